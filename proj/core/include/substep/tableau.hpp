#pragma once

// Coefficient tableaus for the composite s-sub-step implicit integrators
// (s = 1..6).  One integration step [t_n, t_n + dt] is split into s
// sub-intervals ending at t_n + gamma_i * dt; every sub-step solves the
// equations of motion at its end point and updates displacement/velocity
// with the weighted sums
//
//   U_{n+g_i} = U_n + dt * sum_j alpha_ij * V_{n+g_j}
//   V_{n+g_i} = V_n + dt * sum_j alpha_ij * A_{n+g_j}      (j = 0..i)
//
// All diagonal entries share alpha_ii = gamma_1 / 2, so a single effective
// stiffness factorization serves every sub-step, and the first sub-step is
// the trapezoidal rule.  The free parameter gamma_1 is the root of a
// scheme-specific rational equation tying it to the spectral radius at the
// high-frequency limit (rho_inf), which is the user-facing dissipation knob.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "substep/errors.hpp"

namespace substep {

/// Number of sub-steps, validated to 1..6.  s = 1 is the trapezoidal rule,
/// s = 2 the two-sub-step scheme with rho_inf in [-1, 1], s = 3..6 the
/// high-order members with rho_inf in [0, 1].
class SchemeId {
 public:
  explicit SchemeId(int substeps);
  int substeps() const noexcept { return s_; }

 private:
  int s_;
};

/// Rule for the free intermediate ratio gamma_2 of the three-sub-step scheme.
/// Standard uses (3 + sqrt(3)) * gamma_1 / 3; Double uses 2 * gamma_1 so the
/// first two sub-steps have equal length.  Higher members always use
/// gamma_i = i * gamma_1 for 2 <= i <= s-1.
enum class Gamma2Rule { Standard, Double };

struct Tableau {
  SchemeId scheme;
  double rho_inf;                // spectral radius at the high-frequency limit
  std::vector<double> gamma;     // s+1 splitting ratios, gamma[0]=0, gamma[s]=1
  Eigen::MatrixXd alpha;         // (s+1)x(s+1), row 0 zero, lower triangular
  Eigen::VectorXd b;             // output weights = last row of alpha

  int substeps() const noexcept { return scheme.substeps(); }
  double gamma1() const noexcept { return gamma[1]; }
  /// Shared diagonal alpha_ii = gamma_1 / 2; the effective stiffness matrix
  /// is M + eta*dt*C + (eta*dt)^2*K.
  double eta() const noexcept { return 0.5 * gamma[1]; }
};

/// Solves the scheme's dissipation equation for gamma_1 given the target
/// high-frequency spectral radius.  s = 2 has a closed form; s = 3..6 use
/// bisection on fixed brackets that isolate the unconditionally stable root.
/// Throws DomainError for rho_inf outside the scheme's admissible range and
/// NumericalError if the bracket does not enclose a sign change.
double gamma1_for_rho_inf(SchemeId scheme, double rho_inf);

/// Left-hand side of the dissipation equation: the high-frequency spectral
/// radius implied by gamma_1.  Inverse of gamma1_for_rho_inf on the stable
/// bracket.  Supported for s = 2..6.
double dissipation_value(SchemeId scheme, double gamma1);

/// Default splitting ratios (gamma_0..gamma_s) for a given gamma_1:
/// gamma_0 = 0 and gamma_s = 1 always; s = 3 uses the Gamma2Rule above;
/// s >= 4 uses gamma_i = i * gamma_1 for the intermediate ratios.  Note the
/// intermediate ratios may exceed 1, in which case the load is sampled
/// beyond t_{n+1}.  Throws DomainError if the ratios collide.
std::vector<double> default_gammas(SchemeId scheme, double gamma1,
                                   Gamma2Rule rule = Gamma2Rule::Standard);

/// Builds the full coefficient tableau.  When `gammas` is provided it must
/// satisfy gamma_0 = 0, gamma_s = 1, gamma_1 > 0, strictly increasing
/// through gamma_{s-1}, and pairwise distinct; otherwise the defaults
/// derived from rho_inf are used.  Construction re-verifies the per-row
/// consistency sums (sum_j alpha_ij = gamma_i and
/// sum_j alpha_ij gamma_j = gamma_i^2 / 2) and aborts if any residual
/// exceeds 1e-10.
Tableau build_tableau(SchemeId scheme, double rho_inf,
                      const std::optional<std::vector<double>>& gammas = std::nullopt,
                      Gamma2Rule rule = Gamma2Rule::Standard);

}  // namespace substep
