#include "substep/nonlinear.hpp"

#include <cmath>
#include <string>

namespace substep {

namespace {

void check_model(const NonlinearModel& m) {
  if (m.M.rows() != m.M.cols()) {
    throw DomainError("nonlinear model: mass matrix must be square");
  }
  if (!m.f_int || !m.tangents || !m.load) {
    throw DomainError("nonlinear model: missing f_int, tangents, or load");
  }
}

}  // namespace

SubstepSolution substep_solve(const NonlinearModel& model, double eta,
                              const Eigen::VectorXd& u_pred,
                              const Eigen::VectorXd& v_pred, double t_target,
                              double dt, const NewtonSettings& settings,
                              const Eigen::VectorXd& a_start) {
  if (settings.rtol <= 0.0 || settings.atol <= 0.0 || settings.max_iter < 1) {
    throw DomainError("newton settings: tolerances must be positive, max_iter >= 1");
  }
  const double h = eta * dt;
  const Eigen::VectorXd f_ext = model.load(t_target);

  Eigen::VectorXd a = a_start;
  for (int it = 0; it <= settings.max_iter; ++it) {
    const Eigen::VectorXd v = v_pred + h * a;
    const Eigen::VectorXd u = u_pred + h * v;
    const Eigen::VectorXd r = model.M * a + model.f_int(u, v) - f_ext;
    if (!r.allFinite()) {
      throw NumericalError("substep_solve: non-finite residual at t = " +
                           std::to_string(t_target));
    }
    if (r.norm() <= settings.rtol) {
      return {u, v, a, it};
    }
    if (it == settings.max_iter) {
      throw NumericalError("substep_solve: Newton did not converge in " +
                           std::to_string(settings.max_iter) +
                           " iterations at t = " + std::to_string(t_target) +
                           " (residual " + std::to_string(r.norm()) + ")");
    }
    const auto [kt, ct] = model.tangents(u, v);
    const Eigen::MatrixXd jac = model.M + h * ct + h * h * kt;
    const Eigen::VectorXd da = Eigen::PartialPivLU<Eigen::MatrixXd>(jac).solve(-r);
    if (!da.allFinite()) {
      throw NumericalError("substep_solve: singular Newton matrix at t = " +
                           std::to_string(t_target));
    }
    a += da;
    if (da.norm() <= settings.atol) {
      const Eigen::VectorXd v_out = v_pred + h * a;
      return {u_pred + h * v_out, v_out, a, it + 1};
    }
  }
  throw NumericalError("substep_solve: unreachable");
}

StateVector initial_state(const NonlinearModel& model, const Eigen::VectorXd& u0,
                          const Eigen::VectorXd& v0, double t0) {
  check_model(model);
  if (u0.size() != model.dofs() || v0.size() != model.dofs()) {
    throw DomainError("initial_state: dimension mismatch");
  }
  Eigen::VectorXd a0 = Eigen::PartialPivLU<Eigen::MatrixXd>(model.M)
                           .solve(model.load(t0) - model.f_int(u0, v0));
  if (!a0.allFinite()) {
    throw NumericalError("initial_state: mass matrix is singular");
  }
  return {t0, u0, v0, std::move(a0)};
}

StateVector step(const NonlinearModel& model, const Tableau& tableau,
                 const StateVector& state, double dt, const NewtonSettings& settings,
                 std::vector<int>* substep_iterations) {
  const int s = tableau.substeps();
  const double eta = tableau.eta();

  std::vector<Eigen::VectorXd> v_hist(s + 1), a_hist(s + 1);
  v_hist[0] = state.v;
  a_hist[0] = state.a;

  SubstepSolution sol;
  sol.a = state.a;  // warm start for the first sub-step
  for (int i = 1; i <= s; ++i) {
    Eigen::VectorXd u_pred = state.u;
    Eigen::VectorXd v_pred = state.v;
    for (int j = 0; j < i; ++j) {
      const double w = dt * tableau.alpha(i, j);
      if (w != 0.0) {
        u_pred += w * v_hist[j];
        v_pred += w * a_hist[j];
      }
    }
    const double t_i = state.t + tableau.gamma[i] * dt;
    sol = substep_solve(model, eta, u_pred, v_pred, t_i, dt, settings, sol.a);
    if (substep_iterations) {
      substep_iterations->push_back(sol.iterations);
    }
    v_hist[i] = sol.v;
    a_hist[i] = sol.a;
  }
  return {state.t + dt, std::move(sol.u), std::move(sol.v), std::move(sol.a)};
}

Trajectory simulate(const NonlinearModel& model, const Tableau& tableau,
                    const Eigen::VectorXd& u0, const Eigen::VectorXd& v0,
                    double t0, double t_end, double dt,
                    const NewtonSettings& settings,
                    std::vector<int>* substep_iterations) {
  if (t_end < t0) {
    throw DomainError("simulate: t_end must not precede t0");
  }
  if (!(dt > 0.0)) {
    throw DomainError("simulate: dt must be positive");
  }
  Trajectory traj;
  StateVector state = initial_state(model, u0, v0, t0);
  traj.push_back(state);
  if (t_end == t0) {
    return traj;
  }

  const double span = t_end - t0;
  const long long full_steps = static_cast<long long>(std::floor(span / dt + 1e-9));
  for (long long k = 0; k < full_steps; ++k) {
    state = step(model, tableau, state, dt, settings, substep_iterations);
    state.t = t0 + static_cast<double>(k + 1) * dt;
    traj.push_back(state);
  }
  const double rest = t_end - (t0 + static_cast<double>(full_steps) * dt);
  if (rest > 1e-12 * std::max(1.0, std::abs(t_end))) {
    state = step(model, tableau, state, rest, settings, substep_iterations);
    state.t = t_end;
    traj.push_back(state);
  }
  return traj;
}

}  // namespace substep
