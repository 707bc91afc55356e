#pragma once

// Error metrics, convergence-order fitting, and reference-solution
// generation for the benchmark problems.

#include <functional>
#include <vector>

#include "substep/models.hpp"
#include "substep/state.hpp"
#include "substep/tableau.hpp"

namespace substep {

enum class Quantity { Displacement, Velocity, Acceleration };

/// Relative l2 trajectory error
///   sqrt( sum_j |x(t_j) - x_j|^2 / sum_j |x(t_j)|^2 ),
/// summed over steps j = 1..N (the initial state is excluded).  Throws
/// DomainError if the reference norm vanishes.
double global_error(const Trajectory& numerical, const ExactState& exact,
                    Quantity quantity);

/// Same metric with a precomputed reference sharing the numerical time grid.
double global_error(const Trajectory& numerical, const Trajectory& reference,
                    Quantity quantity);

struct ErrorReport {
  double dt = 0.0;
  double error_u = 0.0;
  double error_v = 0.0;
  double error_a = 0.0;
  int scheme = 0;        // sub-step count of the tableau under test
  double rho_inf = 0.0;  // its high-frequency spectral radius
};

struct ConvergenceResult {
  std::vector<ErrorReport> errors;    // one entry per step size
  double slope_u = 0.0;
  double slope_v = 0.0;
  double slope_a = 0.0;
  std::vector<double> floored_dts;    // step sizes dropped from the fit
};

/// Runs the scheme over every step size and fits log(error) against
/// log(dt) per quantity.  Points at the floating-point floor (error below
/// 1e-13) are excluded from the fit and flagged.
ConvergenceResult convergence_study(const LinearBenchmark& bench,
                                    const Tableau& tableau,
                                    const std::vector<double>& dt_list,
                                    double horizon);

/// Nonlinear variant; the reference trajectory must already live on the
/// union grid of the requested step sizes (see reference_trajectory).
ConvergenceResult convergence_study(const NonlinearBenchmark& bench,
                                    const Tableau& tableau,
                                    const std::vector<double>& dt_list,
                                    double horizon, double dt_ref,
                                    const NewtonSettings& settings = {});

/// Fine-step trapezoidal-rule solution sampled onto a grid of spacing
/// `sample_dt`.  The internal step is sample_dt / ceil(sample_dt / dt_ref)
/// so samples land exactly on the grid.  Requires dt_ref <= sample_dt / 100.
Trajectory reference_trajectory(const NonlinearBenchmark& bench, double dt_ref,
                                double horizon, double sample_dt,
                                const NewtonSettings& settings = {});

/// Least-squares slope of log(err) vs log(dt); entries with err <= floor are
/// skipped (indices reported through `floored` when non-null).
double fit_order(const std::vector<double>& dts, const std::vector<double>& errs,
                 double floor_value = 1e-13,
                 std::vector<double>* floored = nullptr);

}  // namespace substep
