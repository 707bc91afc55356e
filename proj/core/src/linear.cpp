#include "substep/linear.hpp"

#include <cmath>
#include <string>

namespace substep {

namespace {

void check_model(const LinearModel& m) {
  const Eigen::Index d = m.M.rows();
  if (m.M.cols() != d || m.C.rows() != d || m.C.cols() != d || m.K.rows() != d ||
      m.K.cols() != d) {
    throw DomainError("linear model: M, C, K must be square with equal size");
  }
  if (!m.load) {
    throw DomainError("linear model: missing load function");
  }
}

}  // namespace

EffectiveOperator::EffectiveOperator(const LinearModel& model,
                                     const Tableau& tableau, double dt)
    : dt_(dt), eta_(tableau.eta()) {
  if (!(dt > 0.0)) {
    throw DomainError("effective matrix: dt must be positive");
  }
  const double h = eta_ * dt;
  Eigen::MatrixXd S = model.M + h * model.C + h * h * model.K;
  lu_.compute(S);
  // PartialPivLU has no rank query; probe with a solve instead.
  const Eigen::VectorXd probe =
      lu_.solve(Eigen::VectorXd::Ones(S.rows()));
  if (!probe.allFinite()) {
    throw NumericalError("effective matrix: singular factorization at dt = " +
                         std::to_string(dt));
  }
}

Eigen::VectorXd EffectiveOperator::solve(const Eigen::VectorXd& rhs) const {
  return lu_.solve(rhs);
}

StateVector initial_state(const LinearModel& model, const Eigen::VectorXd& u0,
                          const Eigen::VectorXd& v0, double t0) {
  check_model(model);
  if (u0.size() != model.dofs() || v0.size() != model.dofs()) {
    throw DomainError("initial_state: dimension mismatch");
  }
  const Eigen::VectorXd f0 = model.load(t0);
  if (!f0.allFinite()) {
    throw NumericalError("initial_state: non-finite load at t0");
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(model.M);
  Eigen::VectorXd a0 = lu.solve(f0 - model.K * u0 - model.C * v0);
  if (!a0.allFinite()) {
    throw NumericalError("initial_state: mass matrix is singular");
  }
  return {t0, u0, v0, std::move(a0)};
}

StateVector step(const LinearModel& model, const Tableau& tableau,
                 const StateVector& state, double dt,
                 const EffectiveOperator& fac) {
  const int s = tableau.substeps();
  const double eta = tableau.eta();
  const Eigen::Index d = model.dofs();

  // Sub-step histories; index 0 carries the step's start values.
  std::vector<Eigen::VectorXd> v_hist(s + 1), a_hist(s + 1);
  v_hist[0] = state.v;
  a_hist[0] = state.a;

  Eigen::VectorXd u_new(d), v_new(d);
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
    const Eigen::VectorXd rhs = model.load(t_i) - model.C * v_pred -
                                model.K * (u_pred + eta * dt * v_pred);
    a_hist[i] = fac.solve(rhs);
    v_hist[i] = v_pred + eta * dt * a_hist[i];
    if (i == s) {
      v_new = v_hist[i];
      u_new = u_pred + eta * dt * v_new;
    }
  }
  if (!u_new.allFinite() || !v_new.allFinite() || !a_hist[s].allFinite()) {
    throw NumericalError("step: non-finite state at t = " +
                         std::to_string(state.t + dt));
  }
  return {state.t + dt, std::move(u_new), std::move(v_new), std::move(a_hist[s])};
}

Trajectory simulate(const LinearModel& model, const Tableau& tableau,
                    const Eigen::VectorXd& u0, const Eigen::VectorXd& v0,
                    double t0, double t_end, double dt,
                    const SimulateOptions& opts) {
  if (!(t_end > t0) && t_end != t0) {
    throw DomainError("simulate: t_end must not precede t0");
  }
  if (!(dt > 0.0)) {
    throw DomainError("simulate: dt must be positive");
  }
  const int stride = std::max(opts.stride, 1);

  Trajectory traj;
  StateVector state = initial_state(model, u0, v0, t0);
  traj.push_back(state);
  if (t_end == t0) {
    return traj;
  }

  const double span = t_end - t0;
  const long long full_steps = static_cast<long long>(std::floor(span / dt + 1e-9));
  const EffectiveOperator fac(model, tableau, dt);

  long long taken = 0;
  for (; taken < full_steps; ++taken) {
    state = step(model, tableau, state, dt, fac);
    state.t = t0 + static_cast<double>(taken + 1) * dt;  // avoid accumulation drift
    if ((taken + 1) % stride == 0) {
      traj.push_back(state);
    }
  }
  const double rest = t_end - (t0 + static_cast<double>(full_steps) * dt);
  if (rest > 1e-12 * std::max(1.0, std::abs(t_end))) {
    const EffectiveOperator fac_last(model, tableau, rest);
    state = step(model, tableau, state, rest, fac_last);
    state.t = t_end;
    traj.push_back(state);
  } else if (traj.back().t != state.t) {
    traj.push_back(state);
  }
  return traj;
}

}  // namespace substep
