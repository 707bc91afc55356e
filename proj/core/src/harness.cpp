#include "substep/harness.hpp"

#include <cmath>

#include "substep/linear.hpp"
#include "substep/nonlinear.hpp"

namespace substep {

namespace {

const Eigen::VectorXd& pick(const StateVector& st, Quantity q) {
  switch (q) {
    case Quantity::Velocity: return st.v;
    case Quantity::Acceleration: return st.a;
    default: return st.u;
  }
}

double error_ratio(double num2, double den2) {
  if (den2 <= 0.0) {
    throw DomainError("global_error: reference trajectory has zero norm");
  }
  return std::sqrt(num2 / den2);
}

}  // namespace

double global_error(const Trajectory& numerical, const ExactState& exact,
                    Quantity quantity) {
  if (numerical.size() < 2) {
    throw DomainError("global_error: trajectory holds no steps");
  }
  double num2 = 0.0, den2 = 0.0;
  for (std::size_t j = 1; j < numerical.size(); ++j) {
    const StateVector ref = exact(numerical[j].t);
    const Eigen::VectorXd& x_ref = pick(ref, quantity);
    num2 += (x_ref - pick(numerical[j], quantity)).squaredNorm();
    den2 += x_ref.squaredNorm();
  }
  return error_ratio(num2, den2);
}

double global_error(const Trajectory& numerical, const Trajectory& reference,
                    Quantity quantity) {
  if (numerical.size() < 2 || reference.size() != numerical.size()) {
    throw DomainError("global_error: trajectories must share the time grid");
  }
  double num2 = 0.0, den2 = 0.0;
  for (std::size_t j = 1; j < numerical.size(); ++j) {
    if (std::abs(reference[j].t - numerical[j].t) >
        1e-9 * std::max(1.0, std::abs(numerical[j].t))) {
      throw DomainError("global_error: trajectories must share the time grid");
    }
    const Eigen::VectorXd& x_ref = pick(reference[j], quantity);
    num2 += (x_ref - pick(numerical[j], quantity)).squaredNorm();
    den2 += x_ref.squaredNorm();
  }
  return error_ratio(num2, den2);
}

double fit_order(const std::vector<double>& dts, const std::vector<double>& errs,
                 double floor_value, std::vector<double>* floored) {
  if (dts.size() != errs.size() || dts.size() < 2) {
    throw DomainError("fit_order: need matching dt/error lists of size >= 2");
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < dts.size(); ++i) {
    if (errs[i] <= floor_value) {
      if (floored) floored->push_back(dts[i]);
      continue;
    }
    x.push_back(std::log(dts[i]));
    y.push_back(std::log(errs[i]));
  }
  if (x.size() < 2) {
    throw NumericalError("fit_order: fewer than two usable points above the "
                         "error floor");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceResult convergence_study(const LinearBenchmark& bench,
                                    const Tableau& tableau,
                                    const std::vector<double>& dt_list,
                                    double horizon) {
  if (dt_list.size() < 3) {
    throw DomainError("convergence_study: need at least 3 step sizes");
  }
  if (!bench.exact) {
    throw DomainError("convergence_study: benchmark lacks an exact solution");
  }
  ConvergenceResult result;
  std::vector<double> eu, ev, ea;
  for (const double dt : dt_list) {
    const Trajectory traj =
        simulate(bench.model, tableau, bench.u0, bench.v0, 0.0, horizon, dt);
    ErrorReport rep;
    rep.dt = dt;
    rep.scheme = tableau.substeps();
    rep.rho_inf = tableau.rho_inf;
    rep.error_u = global_error(traj, bench.exact, Quantity::Displacement);
    rep.error_v = global_error(traj, bench.exact, Quantity::Velocity);
    rep.error_a = global_error(traj, bench.exact, Quantity::Acceleration);
    eu.push_back(rep.error_u);
    ev.push_back(rep.error_v);
    ea.push_back(rep.error_a);
    result.errors.push_back(rep);
  }
  result.slope_u = fit_order(dt_list, eu, 1e-13, &result.floored_dts);
  result.slope_v = fit_order(dt_list, ev, 1e-13, &result.floored_dts);
  result.slope_a = fit_order(dt_list, ea, 1e-13, &result.floored_dts);
  return result;
}

ConvergenceResult convergence_study(const NonlinearBenchmark& bench,
                                    const Tableau& tableau,
                                    const std::vector<double>& dt_list,
                                    double horizon, double dt_ref,
                                    const NewtonSettings& settings) {
  if (dt_list.size() < 3) {
    throw DomainError("convergence_study: need at least 3 step sizes");
  }
  ConvergenceResult result;
  std::vector<double> eu, ev, ea;
  for (const double dt : dt_list) {
    const Trajectory traj = simulate(bench.model, tableau, bench.u0, bench.v0,
                                     0.0, horizon, dt, settings);
    const Trajectory ref =
        reference_trajectory(bench, dt_ref, horizon, dt, settings);
    ErrorReport rep;
    rep.dt = dt;
    rep.scheme = tableau.substeps();
    rep.rho_inf = tableau.rho_inf;
    rep.error_u = global_error(traj, ref, Quantity::Displacement);
    rep.error_v = global_error(traj, ref, Quantity::Velocity);
    rep.error_a = global_error(traj, ref, Quantity::Acceleration);
    eu.push_back(rep.error_u);
    ev.push_back(rep.error_v);
    ea.push_back(rep.error_a);
    result.errors.push_back(rep);
  }
  result.slope_u = fit_order(dt_list, eu, 1e-13, &result.floored_dts);
  result.slope_v = fit_order(dt_list, ev, 1e-13, &result.floored_dts);
  result.slope_a = fit_order(dt_list, ea, 1e-13, &result.floored_dts);
  return result;
}

Trajectory reference_trajectory(const NonlinearBenchmark& bench, double dt_ref,
                                double horizon, double sample_dt,
                                const NewtonSettings& settings) {
  if (!(dt_ref > 0.0) || dt_ref > sample_dt / 100.0) {
    throw DomainError("reference_trajectory: dt_ref must be at least 100x "
                      "smaller than the sampled step");
  }
  const Tableau trap = build_tableau(SchemeId(1), 1.0);
  const long long substeps =
      static_cast<long long>(std::ceil(sample_dt / dt_ref - 1e-12));
  const double dt_fine = sample_dt / static_cast<double>(substeps);

  Trajectory out;
  StateVector state = initial_state(bench.model, bench.u0, bench.v0, 0.0);
  out.push_back(state);
  const long long samples =
      static_cast<long long>(std::floor(horizon / sample_dt + 1e-9));
  for (long long k = 0; k < samples; ++k) {
    for (long long j = 0; j < substeps; ++j) {
      state = step(bench.model, trap, state, dt_fine, settings);
    }
    state.t = static_cast<double>(k + 1) * sample_dt;
    out.push_back(state);
  }
  const double rest = horizon - static_cast<double>(samples) * sample_dt;
  if (rest > 1e-12 * std::max(1.0, horizon)) {
    const long long fine = static_cast<long long>(std::ceil(rest / dt_fine - 1e-12));
    const double dt_rest = rest / static_cast<double>(fine);
    for (long long j = 0; j < fine; ++j) {
      state = step(bench.model, trap, state, dt_rest, settings);
    }
    state.t = horizon;
    out.push_back(state);
  }
  return out;
}

}  // namespace substep
