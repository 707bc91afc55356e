#include "substep/tableau.hpp"

#include <cmath>
#include <string>

namespace substep {

namespace {

// High-frequency limit of the (repeated) amplification eigenvalue as a
// function of gamma_1.
double limit_eigenvalue(int s, double g) {
  const double g2 = g * g;
  const double g3 = g2 * g;
  switch (s) {
    case 2:
      return (g2 - 4.0 * g + 2.0) / g2;
    case 3:
      return (3.0 * g3 - 18.0 * g2 + 18.0 * g - 4.0) / (3.0 * g3);
    case 4: {
      const double g4 = g2 * g2;
      return (3.0 * g4 - 24.0 * g3 + 36.0 * g2 - 16.0 * g + 2.0) / (3.0 * g4);
    }
    case 5: {
      const double g4 = g2 * g2, g5 = g4 * g;
      return (15.0 * g5 - 150.0 * g4 + 300.0 * g3 - 200.0 * g2 + 50.0 * g - 4.0) /
             (15.0 * g5);
    }
    case 6: {
      const double g4 = g2 * g2, g5 = g4 * g, g6 = g5 * g;
      return (45.0 * g6 - 540.0 * g5 + 1350.0 * g4 - 1200.0 * g3 + 450.0 * g2 -
              72.0 * g + 4.0) /
             (45.0 * g6);
    }
    default:
      throw DomainError("dissipation_value: no dissipation equation for s = " +
                        std::to_string(s));
  }
}

// Implied spectral radius at the high-frequency limit.  On the stable
// bracket the repeated eigenvalue is positive for s = 2..4 but negative for
// s = 5 and 6, so rho_inf is its negation there.
double dissipation_lhs(int s, double g) {
  const double zeta = limit_eigenvalue(s, g);
  return (s >= 5) ? -zeta : zeta;
}

struct Bracket {
  double lo, hi;
};

// Brackets isolating the unconditionally stable root; the tabulated values
// for rho_inf in [0, 1] fall strictly inside, and the dissipation functions
// are monotone decreasing there (checked by the endpoint sign test below).
Bracket stable_bracket(int s) {
  switch (s) {
    case 3: return {0.60, 0.95};
    case 4: return {0.75, 1.20};
    case 5: return {0.45, 0.60};
    case 6: return {0.55, 0.70};
    default:
      throw DomainError("gamma1_for_rho_inf: no bracket for s = " + std::to_string(s));
  }
}

double bisect_gamma1(int s, double rho_inf) {
  const Bracket br = stable_bracket(s);
  double lo = br.lo, hi = br.hi;
  const double f_lo = dissipation_lhs(s, lo) - rho_inf;
  const double f_hi = dissipation_lhs(s, hi) - rho_inf;
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    throw NumericalError("gamma1_for_rho_inf: dissipation equation has no sign "
                         "change on the bracket for s = " + std::to_string(s));
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double f = dissipation_lhs(s, mid) - rho_inf;
    if (std::abs(f) <= 1e-13 || (hi - lo) <= 1e-15) {
      return mid;
    }
    if (f > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw NumericalError("gamma1_for_rho_inf: bisection did not converge for s = " +
                       std::to_string(s));
}

// The coefficient formulas divide only by differences among the
// intermediate ratios gamma_1..gamma_{s-1}; strict monotonicity there keeps
// every denominator alive.  gamma_s = 1 may coincide with an intermediate
// ratio (e.g. the i*gamma_1 rule with gamma_1 = 0.5 at s = 5).
void require_increasing_intermediates(const std::vector<double>& g, int s) {
  for (int i = 1; i < s; ++i) {
    if (!(g[i] > g[i - 1])) {
      throw DomainError("tableau: gamma_0..gamma_{s-1} must be strictly "
                        "increasing");
    }
  }
}

double checked_div(double num, double den, const char* what) {
  if (std::abs(den) < 1e-14) {
    throw DomainError(std::string("tableau: singular denominator in ") + what);
  }
  return num / den;
}

// Columns 0 and 1 of row i >= 2 follow from the two per-row consistency
// sums once the entries alpha_ij (j >= 2) and the diagonal gamma_1/2 are
// known.  Row 1 is the trapezoidal pair (gamma_1/2, gamma_1/2).
void fill_first_columns(Eigen::MatrixXd& a, const std::vector<double>& g, int i) {
  double sum_a = 0.0, sum_ag = 0.0;
  for (int j = 2; j < i; ++j) {
    sum_a += a(i, j);
    sum_ag += a(i, j) * g[j];
  }
  const double g1 = g[1];
  const double gi = g[i];
  a(i, 1) = (-2.0 * sum_ag - g1 * gi + gi * gi) / (2.0 * g1);
  a(i, 0) = (-g1 * g1 + (3.0 * gi - 2.0 * sum_a) * g1 + 2.0 * sum_ag - gi * gi) /
            (2.0 * g1);
}

void fill_alpha3(Eigen::MatrixXd& a, const std::vector<double>& g) {
  const double g1 = g[1], g2 = g[2];
  a(3, 2) = checked_div(3.0 * g1 * g1 - 6.0 * g1 + 2.0,
                        6.0 * g2 * (g2 - g1), "alpha32");
}

void fill_alpha4(Eigen::MatrixXd& a, const std::vector<double>& g) {
  const double g1 = g[1], g2 = g[2], g3 = g[3];
  const double a43 =
      checked_div(6.0 * (1.0 - g2) * g1 * g1 + 12.0 * g1 * g2 - 10.0 * g1 -
                      4.0 * g2 + 3.0,
                  12.0 * g3 * (g3 - g2) * (g3 - g1), "alpha43");
  const double a32 =
      checked_div(-3.0 * g1 * g1 * g1 + 9.0 * g1 * g1 - 6.0 * g1 + 1.0,
                  12.0 * a43 * g2 * (g2 - g1), "alpha32 (divides by alpha43)");
  const double a42 =
      checked_div(6.0 * a43 * g1 * g3 - 6.0 * a43 * g3 * g3 + 3.0 * g1 * g1 -
                      6.0 * g1 + 2.0,
                  6.0 * g2 * (g2 - g1), "alpha42");
  a(4, 3) = a43;
  a(3, 2) = a32;
  a(4, 2) = a42;
}

void fill_alpha5(Eigen::MatrixXd& a, const std::vector<double>& g) {
  const double g1 = g[1], g2 = g[2], g3 = g[3], g4 = g[4];
  const auto G = [&](double x) {
    return 30.0 * (1.0 - x) * (1.0 - g2) * g1 * g1 +
           (50.0 * x - 45.0 + 10.0 * (5.0 - 6.0 * x) * g2) * g1 +
           5.0 * (4.0 * x - 3.0) * g2 - 15.0 * x + 12.0;
  };
  const double g1p2 = g1 * g1, g1p3 = g1p2 * g1, g1p4 = g1p3 * g1;

  const double a54 = checked_div(
      G(g3), 60.0 * g4 * (g4 - g3) * (g4 - g2) * (g4 - g1), "alpha54");
  const double a53 = checked_div(
      G(g4), 60.0 * g3 * (g3 - g4) * (g2 - g3) * (g1 - g3), "alpha53");
  const double a43 = checked_div(
      g4 * (g4 - g1) * (g4 - g2) * (g4 - g3) *
          (15.0 * g1p3 * g2 - 15.0 * g1p3 - 45.0 * g1p2 * g2 + 35.0 * g1p2 +
           30.0 * g1 * g2 - 20.0 * g1 - 5.0 * g2 + 3.0),
      g3 * (g3 - g1) * (g3 - g2) * G(g3), "alpha43 (divides by G(gamma3))");
  const double a52 = checked_div(
      3.0 * g1p2 + 6.0 * (a53 * g3 + a54 * g4 - 1.0) * g1 - 6.0 * a53 * g3 * g3 -
          6.0 * a54 * g4 * g4 + 2.0,
      6.0 * g2 * (g2 - g1), "alpha52");
  const double a42 = checked_div(
      15.0 * a53 * g1p4 + 30.0 * (a43 * a54 - 2.0 * a53) * g1p3 +
          30.0 * (2.0 * a53 - 3.0 * a43 * a54) * g1p2 +
          20.0 * (-6.0 * a43 * a43 * a54 * a54 * g3 + 3.0 * a43 * a54 - a53) * g1 +
          120.0 * a43 * a43 * a54 * a54 * g3 * g3 - 10.0 * a43 * a54 + 2.0 * a53,
      120.0 * a43 * a54 * a54 * g2 * (g1 - g2),
      "alpha42 (divides by alpha43*alpha54^2)");
  const double a32 = checked_div(
      15.0 * g1p4 - 60.0 * g1p3 + 60.0 * g1p2 - 20.0 * g1 + 2.0,
      120.0 * a43 * a54 * g2 * (g2 - g1), "alpha32 (divides by alpha43*alpha54)");

  a(5, 4) = a54;
  a(5, 3) = a53;
  a(4, 3) = a43;
  a(5, 2) = a52;
  a(4, 2) = a42;
  a(3, 2) = a32;
}

void fill_alpha6(Eigen::MatrixXd& a, const std::vector<double>& g) {
  const double g1 = g[1], g2 = g[2], g3 = g[3], g4 = g[4], g5 = g[5];
  const double g1p2 = g1 * g1, g1p3 = g1p2 * g1, g1p4 = g1p3 * g1, g1p5 = g1p4 * g1;

  const double a65 = checked_div(
      30.0 * (1.0 - g4) * (g3 - 1.0) * (g2 - 1.0) * g1p2 +
          (45.0 - 50.0 * g4 + 10.0 * g3 * (6.0 * g4 - 5.0)) * g1 * g2 +
          3.0 * g3 * (5.0 * g4 - 4.0) +
          (45.0 * g4 - 42.0 + 5.0 * g3 * (9.0 - 10.0 * g4)) * g1 +
          (15.0 * g4 - 12.0 + 5.0 * g3 * (3.0 - 4.0 * g4)) * g2 - 12.0 * g4 + 10.0,
      60.0 * g5 * (g4 - g5) * (g3 - g5) * (g2 - g5) * (g1 - g5), "alpha65");

  const double a64 = checked_div(
      30.0 * (1.0 - g3) * (g2 - 1.0) * g1p2 +
          (45.0 - 50.0 * g3 + 10.0 * g2 * (6.0 * g3 - 5.0) -
           60.0 * a65 * g5 * (g3 - g5) * (g2 - g5)) * g1 +
          (15.0 - 20.0 * g3 + 60.0 * a65 * g5 * g5 * (g3 - g5)) * g2 -
          60.0 * a65 * g5 * g5 * g5 * (g3 - g5) + 15.0 * g3 - 12.0,
      60.0 * g4 * (g3 - g4) * (g2 - g4) * (g1 - g4), "alpha64");

  const double a54 = checked_div(
      15.0 * (g3 - 1.0) * (g2 - 1.0) * g1p3 +
          (35.0 * g3 - 30.0 + 5.0 * g2 * (7.0 - 9.0 * g3)) * g1p2 +
          (15.0 - 20.0 * g3 + 10.0 * g2 * (3.0 * g3 - 2.0)) * g1 +
          (3.0 - 5.0 * g3) * g2 + 3.0 * g3 - 2.0,
      60.0 * a65 * g4 * (g3 - g4) * (g2 - g4) * (g1 - g4),
      "alpha54 (divides by alpha65)");

  const double a63 = checked_div(
      12.0 * a64 * g4 * (g2 - g4) * (g4 - g1) +
          12.0 * a65 * g5 * (g2 - g5) * (g5 - g1) -
          6.0 * g1 * (g1 * (g2 - 1.0) - 2.0 * g2) - 10.0 * g1 - 4.0 * g2 + 3.0,
      12.0 * g3 * (g2 - g3) * (g1 - g3), "alpha63");

  const double a53 = checked_div(
      240.0 * a65 * a65 * a54 * a54 * g4 * (g2 - g4) * (g4 - g1) +
          30.0 * a64 * g1p4 * (g2 - 1.0) +
          (60.0 * a65 * a54 * (g2 - 1.0) + 30.0 * a64 * (3.0 - 4.0 * g2)) * g1p3 +
          (20.0 * a65 * a54 * (7.0 - 9.0 * g2) + 15.0 * a64 * (8.0 * g2 - 5.0)) * g1p2 +
          (40.0 * a65 * a54 * (3.0 * g2 - 2.0) + 2.0 * a64 * (11.0 - 20.0 * g2)) * g1 +
          4.0 * a65 * a54 * (3.0 - 5.0 * g2) + 2.0 * a64 * (2.0 * g2 - 1.0),
      240.0 * a65 * a65 * a54 * g3 * (g2 - g3) * (g1 - g3),
      "alpha53 (divides by alpha65^2*alpha54)");

  const double a43 = checked_div(
      60.0 * a65 * a53 * g3 * (g2 - g3) * (g3 - g1) +
          60.0 * a65 * a54 * g4 * (g2 - g4) * (g4 - g1) +
          5.0 * g1p2 * (3.0 * g1 * g2 - 3.0 * g1 - 9.0 * g2 + 7.0) +
          30.0 * g1 * g2 - 20.0 * g1 - 5.0 * g2 + 3.0,
      60.0 * a64 * g3 * (g2 - g3) * (g1 - g3), "alpha43 (divides by alpha64)");

  const double a62 = checked_div(
      6.0 * a63 * g3 * (g1 - g3) + 6.0 * a64 * g4 * (g1 - g4) +
          6.0 * a65 * g5 * (g1 - g5) + 3.0 * g1p2 - 6.0 * g1 + 2.0,
      6.0 * g2 * (g2 - g1), "alpha62");

  const double a52 = checked_div(
      45.0 * (a64 * a64 * a43 + a65 * a64 * a53 - a65 * a63 * a54) * g1p5 -
          12.0 * a65 * a54 * a43 * (5.0 * a65 * a54 - a64) +
          2.0 * a65 * (a63 * a54 - a64 * a53) +
          (90.0 * a65 * a64 * a54 * a43 - 225.0 * a64 * a64 * a43 -
           225.0 * a65 * a64 * a53 + 225.0 * a65 * a63 * a54) * g1p4 +
          720.0 * a65 * a65 * a65 * a54 * a54 * a43 *
              (a54 * g4 * g4 + a53 * g3 * g3) +
          (180.0 * a65 * a54 * a43 * (a65 * a54 - 2.0 * a64) +
           300.0 * (a64 * a64 * a43 + a65 * a64 * a53 - a65 * a63 * a54)) * g1p3 -
          2.0 * a43 * a64 * a64 +
          (180.0 * a65 * a54 * a43 * (2.0 * a64 - 3.0 * a65 * a54) -
           150.0 * (a64 * a64 * a43 + a65 * a64 * a53 - a65 * a63 * a54)) * g1p2 +
          (360.0 * a65 * a65 * a54 * a54 * a43 *
               (1.0 - 2.0 * a65 * (a54 * g4 + a53 * g3)) -
           30.0 * a64 * a43 * (4.0 * a65 * a54 - a64) +
           30.0 * a65 * (a64 * a53 - a63 * a54)) * g1,
      720.0 * a65 * a65 * a65 * a54 * a54 * a43 * g2 * (g1 - g2),
      "alpha52 (divides by alpha65^3*alpha54^2*alpha43)");

  const double a42 = checked_div(
      -45.0 * (a64 * a43 + a65 * a53) * g1p5 +
          (225.0 * a64 * a43 + 225.0 * a65 * a53 - 90.0 * a65 * a54 * a43) * g1p4 +
          720.0 * a65 * a65 * a54 * a54 * a43 * a43 * g3 * g3 +
          (360.0 * a65 * a54 * a43 - 300.0 * a64 * a43 - 300.0 * a65 * a53) * g1p3 +
          (150.0 * a64 * a43 + 150.0 * a65 * a53 - 360.0 * a65 * a54 * a43) * g1p2 +
          (120.0 * a65 * a54 * a43 - 30.0 * a64 * a43 - 30.0 * a65 * a53 -
           720.0 * a65 * a65 * a54 * a54 * a43 * a43 * g3) * g1 -
          12.0 * a65 * a54 * a43 + 2.0 * a64 * a43 + 2.0 * a65 * a53,
      720.0 * a65 * a65 * a54 * a54 * a43 * g2 * (g1 - g2),
      "alpha42 (divides by alpha65^2*alpha54^2*alpha43)");

  const double a32 = checked_div(
      45.0 * g1p5 - 225.0 * g1p4 + 300.0 * g1p3 - 150.0 * g1p2 + 30.0 * g1 - 2.0,
      720.0 * a65 * a54 * a43 * g2 * (g1 - g2),
      "alpha32 (divides by alpha65*alpha54*alpha43)");

  a(6, 5) = a65;
  a(6, 4) = a64;
  a(5, 4) = a54;
  a(6, 3) = a63;
  a(5, 3) = a53;
  a(4, 3) = a43;
  a(6, 2) = a62;
  a(5, 2) = a52;
  a(4, 2) = a42;
  a(3, 2) = a32;
}

void verify_consistency(const Tableau& t) {
  const int s = t.substeps();
  for (int i = 1; i <= s; ++i) {
    double sum_a = 0.0, sum_ag = 0.0;
    for (int j = 0; j <= i; ++j) {
      sum_a += t.alpha(i, j);
      sum_ag += t.alpha(i, j) * t.gamma[j];
    }
    const double r1 = std::abs(sum_a - t.gamma[i]);
    const double r2 = std::abs(sum_ag - 0.5 * t.gamma[i] * t.gamma[i]);
    if (r1 > 1e-10 || r2 > 1e-10) {
      throw NumericalError("tableau: consistency residual exceeds 1e-10 in row " +
                           std::to_string(i));
    }
  }
}

}  // namespace

SchemeId::SchemeId(int substeps) : s_(substeps) {
  if (substeps < 1 || substeps > 6) {
    throw DomainError("scheme: sub-step count must be in [1, 6], got " +
                      std::to_string(substeps));
  }
}

double gamma1_for_rho_inf(SchemeId scheme, double rho_inf) {
  const int s = scheme.substeps();
  if (s == 1) {
    throw DomainError("gamma1_for_rho_inf: the single-step rule has no gamma_1");
  }
  if (s == 2) {
    if (rho_inf < -1.0 || rho_inf > 1.0) {
      throw DomainError("gamma1_for_rho_inf: rho_inf must be in [-1, 1] for s = 2");
    }
    if (rho_inf == 1.0) {
      return 0.5;
    }
    return (2.0 - std::sqrt(2.0 * (1.0 + rho_inf))) / (1.0 - rho_inf);
  }
  if (rho_inf < 0.0 || rho_inf > 1.0) {
    throw DomainError("gamma1_for_rho_inf: rho_inf must be in [0, 1] for s = " +
                      std::to_string(s));
  }
  if (s == 3 && rho_inf == 1.0) {
    return 2.0 / 3.0;
  }
  return bisect_gamma1(s, rho_inf);
}

double dissipation_value(SchemeId scheme, double gamma1) {
  if (gamma1 <= 0.0) {
    throw DomainError("dissipation_value: gamma_1 must be positive");
  }
  return dissipation_lhs(scheme.substeps(), gamma1);
}

std::vector<double> default_gammas(SchemeId scheme, double gamma1, Gamma2Rule rule) {
  const int s = scheme.substeps();
  if (s == 1) {
    return {0.0, 1.0};
  }
  if (gamma1 <= 0.0) {
    throw DomainError("default_gammas: gamma_1 must be positive");
  }
  std::vector<double> g(static_cast<std::size_t>(s) + 1, 0.0);
  g[1] = gamma1;
  if (s == 3) {
    g[2] = (rule == Gamma2Rule::Standard) ? (3.0 + std::sqrt(3.0)) * gamma1 / 3.0
                                          : 2.0 * gamma1;
  } else {
    for (int i = 2; i < s; ++i) {
      g[i] = static_cast<double>(i) * gamma1;
    }
  }
  g[s] = 1.0;
  require_increasing_intermediates(g, s);
  return g;
}

Tableau build_tableau(SchemeId scheme, double rho_inf,
                      const std::optional<std::vector<double>>& gammas,
                      Gamma2Rule rule) {
  const int s = scheme.substeps();
  std::vector<double> g;
  double rho = rho_inf;

  if (s == 1) {
    rho = 1.0;  // the trapezoidal rule has no dissipation parameter
    g = {0.0, 1.0};
  } else if (gammas.has_value()) {
    g = *gammas;
    if (static_cast<int>(g.size()) != s + 1) {
      throw DomainError("build_tableau: expected " + std::to_string(s + 1) +
                        " splitting ratios");
    }
    if (g[0] != 0.0 || g[s] != 1.0) {
      throw DomainError("build_tableau: gamma_0 = 0 and gamma_s = 1 are required");
    }
    require_increasing_intermediates(g, s);
    rho = dissipation_value(scheme, g[1]);
  } else {
    const double g1 = gamma1_for_rho_inf(scheme, rho_inf);
    g = default_gammas(scheme, g1, rule);
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(s + 1, s + 1);
  for (int i = 1; i <= s; ++i) {
    a(i, i) = 0.5 * g[1];
  }
  a(1, 0) = 0.5 * g[1];  // trapezoidal first sub-step
  switch (s) {
    case 1:
    case 2:
      break;  // remaining entries fully determined by the consistency sums
    case 3: fill_alpha3(a, g); break;
    case 4: fill_alpha4(a, g); break;
    case 5: fill_alpha5(a, g); break;
    case 6: fill_alpha6(a, g); break;
    default: break;
  }
  for (int i = 2; i <= s; ++i) {
    fill_first_columns(a, g, i);
  }

  Tableau t{scheme, rho, std::move(g), std::move(a), {}};
  t.b = t.alpha.row(s);
  verify_consistency(t);
  return t;
}

}  // namespace substep
