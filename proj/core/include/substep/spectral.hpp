#pragma once

// Spectral analysis of the integrators on the scalar test problem
//
//   u'' + 2*xi*omega*u' + omega^2*u = f(t),
//
// comparing the scheme's one-step map against the exact one.  The one-step
// map is the pair (D, L): u_{n+1} = D * (u_n, v_n) + L, with L the
// contribution of the probe load f(t) = exp(t - t_n).  Dimensionless
// frequency Omega = omega * dt.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "substep/tableau.hpp"

namespace substep {

struct TestPoint {
  double omega = 0.0;  // undamped natural frequency, rad/time
  double xi = 0.0;     // damping ratio
  double dt = 1.0;     // step size

  double big_omega() const noexcept { return omega * dt; }
};

/// One-step amplification matrix and load operator.
struct AmpPair {
  Eigen::Matrix2d D;
  Eigen::Vector2d L;
};

struct SpectralSample {
  double Omega = 0.0;
  double xi = 0.0;
  double A1 = 0.0;   // trace(D)/2
  double A2 = 0.0;   // det(D)
  double rho = 0.0;  // spectral radius
  // Only defined for a complex eigenvalue pair; NaN otherwise.
  double amplitude_decay_pct = 0.0;  // % amplitude loss per cycle
  double period_error = 0.0;         // relative period discrepancy
};

/// Exact amplification matrix and exp-load operator of the underdamped test
/// problem (xi < 1).  Throws DomainError for xi >= 1.
AmpPair exact_pair(const TestPoint& p);

/// Numerical amplification matrix and exp-load operator of a scheme,
/// obtained from the block system collecting all sub-step velocity and
/// acceleration values of one step.
AmpPair numerical_pair(const Tableau& t, const TestPoint& p);

/// Principal invariants, spectral radius, amplitude decay, and period error
/// of a 2x2 one-step map at dimensionless frequency Omega.
SpectralSample measures(const Eigen::Matrix2d& D, double Omega, double xi = 0.0);

struct StabilityScan {
  double max_rho = 0.0;
  double worst_Omega = 0.0;
  double worst_xi = 0.0;
  // Points where the two-invariant stability conditions fail beyond 1e-10.
  std::vector<SpectralSample> violations;
};

/// Sweeps the (Omega, xi) grid with dt = 1 and reports the largest spectral
/// radius plus any stability-condition violations.
StabilityScan stability_scan(const Tableau& t, std::span<const double> xi_list,
                             std::span<const double> omega_grid);

/// Spectral radius at Omega = 1e8, xi = 0; approximates rho_inf.
double high_frequency_limit(const Tableau& t);

/// Estimates the scheme's order of accuracy from the decay of
/// max(|D_num - D_exa|, |L_num - L_exa|) over dt in {h, h/2, h/4, h/8} with
/// omega*h = 0.35.  Returns the least-squares slope minus one.  Throws
/// NumericalError if the error at the largest step is already at the
/// floating-point floor.
double order_probe(const Tableau& t, double xi, double omega);

/// Log-spaced grid helper for Omega sweeps.
std::vector<double> log_spaced(double lo, double hi, int points);

}  // namespace substep
