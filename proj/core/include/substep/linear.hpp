#pragma once

// Time-domain integration of linear second-order systems
//   M*U'' + C*U' + K*U = F(t)
// with any of the sub-step tableaus.  Every sub-step solves against the same
// effective matrix S = M + eta*dt*C + (eta*dt)^2*K (eta = gamma_1/2), so S is
// factorized once per (model, dt) and reused for the whole simulation.

#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "substep/state.hpp"
#include "substep/tableau.hpp"

namespace substep {

using LoadFunction = std::function<Eigen::VectorXd(double)>;

struct LinearModel {
  Eigen::MatrixXd M;
  Eigen::MatrixXd C;
  Eigen::MatrixXd K;
  LoadFunction load;  // t -> F(t)

  Eigen::Index dofs() const { return M.rows(); }
};

/// Factorization of the effective matrix for one (model, tableau, dt).
class EffectiveOperator {
 public:
  EffectiveOperator(const LinearModel& model, const Tableau& tableau, double dt);

  double dt() const noexcept { return dt_; }
  double eta() const noexcept { return eta_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

 private:
  double dt_;
  double eta_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// Acceleration-completed initial state: A0 solves M*A0 = F(t0) - C*V0 - K*U0,
/// which makes the scheme self-starting.
StateVector initial_state(const LinearModel& model, const Eigen::VectorXd& u0,
                          const Eigen::VectorXd& v0, double t0);

/// Advances one full step of s sub-steps.  `fac` must have been built with
/// the same model, tableau, and dt.
StateVector step(const LinearModel& model, const Tableau& tableau,
                 const StateVector& state, double dt, const EffectiveOperator& fac);

struct SimulateOptions {
  int stride = 1;  // keep every stride-th state (the final state always kept)
};

/// Integrates from (u0, v0, t0) to t_end with fixed step dt; the final step
/// is shortened to land exactly on t_end (one extra factorization).
Trajectory simulate(const LinearModel& model, const Tableau& tableau,
                    const Eigen::VectorXd& u0, const Eigen::VectorXd& v0,
                    double t0, double t_end, double dt,
                    const SimulateOptions& opts = {});

}  // namespace substep
