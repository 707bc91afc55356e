#pragma once

// Newton-iterated sub-step integration of M*U'' + f_int(U, U') = F(t).
// Each sub-step solves the nonlinear equilibrium at its end point for the
// acceleration, with displacement and velocity eliminated through the same
// eta*dt substitution as the linear path.

#include <functional>
#include <utility>

#include <Eigen/Dense>

#include "substep/state.hpp"
#include "substep/tableau.hpp"

namespace substep {

struct NonlinearModel {
  Eigen::MatrixXd M;
  // Internal force f_int(U, V).
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> f_int;
  // Jacobians (K_T, C_T) = (d f_int / dU, d f_int / dV).
  std::function<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>(
      const Eigen::VectorXd&, const Eigen::VectorXd&)> tangents;
  std::function<Eigen::VectorXd(double)> load;

  Eigen::Index dofs() const { return M.rows(); }
};

struct NewtonSettings {
  double rtol = 1e-8;   // residual 2-norm tolerance
  double atol = 1e-8;   // acceleration-increment 2-norm tolerance
  int max_iter = 50;
};

struct SubstepSolution {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  Eigen::VectorXd a;
  int iterations = 0;  // Newton solves performed
};

/// Solves one sub-step: finds A with
///   M*A + f_int(u_pred + eta*dt*(v_pred + eta*dt*A), v_pred + eta*dt*A) = F(t_target)
/// by full Newton iteration (Jacobian refreshed every iteration), warm-started
/// from `a_start`.  Convergence when ||r||_2 <= rtol or ||dA||_2 <= atol,
/// residual checked first.  Throws NumericalError on nonconvergence or a
/// non-finite residual.
SubstepSolution substep_solve(const NonlinearModel& model, double eta,
                              const Eigen::VectorXd& u_pred,
                              const Eigen::VectorXd& v_pred, double t_target,
                              double dt, const NewtonSettings& settings,
                              const Eigen::VectorXd& a_start);

/// Acceleration-completed initial state: M*A0 = F(t0) - f_int(U0, V0).
StateVector initial_state(const NonlinearModel& model, const Eigen::VectorXd& u0,
                          const Eigen::VectorXd& v0, double t0);

/// One full step of s Newton-iterated sub-steps.  If `substep_iterations` is
/// given it receives the Newton count of every sub-step solve, in order.
StateVector step(const NonlinearModel& model, const Tableau& tableau,
                 const StateVector& state, double dt, const NewtonSettings& settings,
                 std::vector<int>* substep_iterations = nullptr);

Trajectory simulate(const NonlinearModel& model, const Tableau& tableau,
                    const Eigen::VectorXd& u0, const Eigen::VectorXd& v0,
                    double t0, double t_end, double dt,
                    const NewtonSettings& settings = {},
                    std::vector<int>* substep_iterations = nullptr);

}  // namespace substep
