#include "substep/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace substep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// --- compensated (double-double) arithmetic --------------------------------
// The block system mixes O(1) couplings with O(Omega^2) entries, and the
// one-step map emerges from cancellations of the large terms.  Plain double
// loses ~Omega^2 * eps absolutely, which at Omega = 1e8 wipes out the
// spectral radius entirely; ~31-digit compensated arithmetic keeps the
// absolute error near 1e-15 over the whole sweep range.

struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

inline DD quick_two_sum(double a, double b) {  // requires |a| >= |b|
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DD dd_add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DD dd_neg(DD a) { return {-a.hi, -a.lo}; }

inline DD dd_sub(DD a, DD b) { return dd_add(a, dd_neg(b)); }

inline DD dd_mul(DD a, DD b) {
  const double p = a.hi * b.hi;
  DD r{p, std::fma(a.hi, b.hi, -p)};
  r.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(r.hi, r.lo);
}

inline DD dd_div(DD a, DD b) {
  const double q1 = a.hi / b.hi;
  DD r = dd_sub(a, dd_mul({q1, 0.0}, b));
  const double q2 = r.hi / b.hi;
  r = dd_sub(r, dd_mul({q2, 0.0}, b));
  const double q3 = r.hi / b.hi;
  return dd_add(quick_two_sum(q1, q2), {q3, 0.0});
}

// In-place LU with partial pivoting on a dense n x n compensated matrix,
// solving for `cols` right-hand sides.  n <= 14 here.
void dd_solve(std::vector<DD>& m, std::vector<DD>& rhs, int n, int cols) {
  const auto at = [n](std::vector<DD>& v, int i, int j) -> DD& {
    return v[static_cast<std::size_t>(i) * n + j];
  };
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(at(m, k, k).hi);
    for (int i = k + 1; i < n; ++i) {
      const double cand = std::abs(at(m, i, k).hi);
      if (cand > best) {
        best = cand;
        piv = i;
      }
    }
    if (best == 0.0) {
      throw NumericalError("numerical_pair: singular block system");
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(at(m, k, j), at(m, piv, j));
      for (int c = 0; c < cols; ++c) {
        std::swap(rhs[static_cast<std::size_t>(k) * cols + c],
                  rhs[static_cast<std::size_t>(piv) * cols + c]);
      }
    }
    for (int i = k + 1; i < n; ++i) {
      const DD factor = dd_div(at(m, i, k), at(m, k, k));
      at(m, i, k) = factor;
      for (int j = k + 1; j < n; ++j) {
        at(m, i, j) = dd_sub(at(m, i, j), dd_mul(factor, at(m, k, j)));
      }
      for (int c = 0; c < cols; ++c) {
        DD& target = rhs[static_cast<std::size_t>(i) * cols + c];
        target = dd_sub(target,
                        dd_mul(factor, rhs[static_cast<std::size_t>(k) * cols + c]));
      }
    }
  }
  for (int c = 0; c < cols; ++c) {
    for (int i = n - 1; i >= 0; --i) {
      DD acc = rhs[static_cast<std::size_t>(i) * cols + c];
      for (int j = i + 1; j < n; ++j) {
        acc = dd_sub(acc, dd_mul(at(m, i, j),
                                 rhs[static_cast<std::size_t>(j) * cols + c]));
      }
      rhs[static_cast<std::size_t>(i) * cols + c] = dd_div(acc, at(m, i, i));
    }
  }
}

}  // namespace

AmpPair exact_pair(const TestPoint& p) {
  if (p.xi >= 1.0) {
    throw DomainError("exact_pair: only the underdamped regime (xi < 1) is "
                      "supported");
  }
  if (!(p.dt > 0.0) || p.omega < 0.0 || p.xi < 0.0) {
    throw DomainError("exact_pair: need dt > 0, omega >= 0, xi >= 0");
  }
  const double w = p.omega, xi = p.xi, dt = p.dt;
  AmpPair out;
  if (w == 0.0) {
    // Series limit: free flight plus the integrated exp load.
    out.D << 1.0, dt, 0.0, 1.0;
    out.L << std::exp(dt) - 1.0 - dt, std::exp(dt) - 1.0;
    return out;
  }
  const double wd = w * std::sqrt(1.0 - xi * xi);
  const double e = std::exp(-xi * w * dt);
  const double c = std::cos(wd * dt);
  const double s = std::sin(wd * dt);
  out.D << e * (c + xi * w / wd * s), e * s / wd,
      -e * w * w / wd * s, e * (c - xi * w / wd * s);
  const double den = w * w + 2.0 * xi * w + 1.0;
  out.L << std::exp(dt) / den - e * (wd * c + (1.0 + xi * w) * s) / (wd * den),
      std::exp(dt) / den + e * ((w * w + xi * w) * s - wd * c) / (wd * den);
  return out;
}

AmpPair numerical_pair(const Tableau& t, const TestPoint& p) {
  if (!(p.dt > 0.0)) {
    throw DomainError("numerical_pair: dt must be positive");
  }
  const int s = t.substeps();
  const int n = s + 1;
  const int dim = 2 * n;
  const double w = p.omega, xi = p.xi, dt = p.dt;

  // Block system for the stacked sub-step velocities/accelerations:
  //   [ 2*xi*w*I + w^2*dt*A    I      ] [ Ydot  ]   [ f - w^2*u_n*1 ]
  //   [ I                     -dt*A   ] [ Yddot ] = [ v_n*1         ]
  // assembled and solved in compensated arithmetic (see dd_solve).
  std::vector<DD> blk(static_cast<std::size_t>(dim) * dim, DD{});
  const auto at = [dim, &blk](int i, int j) -> DD& {
    return blk[static_cast<std::size_t>(i) * dim + j];
  };
  const DD w2dt = dd_mul({w, 0.0}, {w * dt, 0.0});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const DD a_ij{t.alpha(i, j), 0.0};
      at(i, j) = dd_mul(w2dt, a_ij);
      at(n + i, n + j) = dd_mul({-dt, 0.0}, a_ij);
    }
    at(i, i) = dd_add(at(i, i), {2.0 * xi * w, 0.0});
    at(i, n + i) = {1.0, 0.0};
    at(n + i, i) = {1.0, 0.0};
  }

  // Three right-hand sides: the exp-load column and the two state columns.
  std::vector<DD> rhs(static_cast<std::size_t>(dim) * 3, DD{});
  const DD minus_w2 = dd_mul({-w, 0.0}, {w, 0.0});
  for (int i = 0; i < n; ++i) {
    rhs[static_cast<std::size_t>(i) * 3 + 0] = {std::exp(t.gamma[i] * dt), 0.0};
    rhs[static_cast<std::size_t>(i) * 3 + 1] = minus_w2;
    rhs[static_cast<std::size_t>(n + i) * 3 + 2] = {1.0, 0.0};
  }

  dd_solve(blk, rhs, dim, 3);

  // Contract with [dt*b^T 0; 0 dt*b^T] and add the identity carry-over.
  Eigen::Matrix<double, 2, 3> reduced;
  for (int c = 0; c < 3; ++c) {
    DD top{}, bot{};
    for (int j = 0; j < n; ++j) {
      const DD bj = dd_mul({dt, 0.0}, {t.b(j), 0.0});
      top = dd_add(top, dd_mul(bj, rhs[static_cast<std::size_t>(j) * 3 + c]));
      bot = dd_add(bot, dd_mul(bj, rhs[static_cast<std::size_t>(n + j) * 3 + c]));
    }
    reduced(0, c) = top.hi;
    reduced(1, c) = bot.hi;
  }
  AmpPair out;
  out.D << 1.0 + reduced(0, 1), reduced(0, 2), reduced(1, 1), 1.0 + reduced(1, 2);
  out.L << reduced(0, 0), reduced(1, 0);
  if (!out.D.allFinite() || !out.L.allFinite()) {
    throw NumericalError("numerical_pair: singular block system at Omega = " +
                         std::to_string(p.big_omega()) + ", xi = " +
                         std::to_string(xi));
  }
  return out;
}

SpectralSample measures(const Eigen::Matrix2d& D, double Omega, double xi) {
  SpectralSample out;
  out.Omega = Omega;
  out.xi = xi;
  out.A1 = 0.5 * D.trace();
  out.A2 = D.determinant();
  const double disc = out.A1 * out.A1 - out.A2;
  if (disc <= 0.0) {
    // Complex pair A1 +/- i*sqrt(-disc): modulus^2 = A2.
    out.rho = std::sqrt(std::max(out.A2, 0.0));
    const double b = std::sqrt(-disc);
    if (b > 0.0) {
      const double wd_bar = std::atan2(b, out.A1);  // numerical damped frequency
      const double xi_bar = -std::log(out.rho) / wd_bar;
      out.amplitude_decay_pct = 100.0 * (1.0 - std::exp(-2.0 * std::numbers::pi * xi_bar));
      out.period_error = (Omega > 0.0) ? Omega / wd_bar - 1.0 : kNaN;
    } else {
      out.amplitude_decay_pct = kNaN;
      out.period_error = kNaN;
    }
  } else {
    const double r = std::sqrt(disc);
    out.rho = std::max(std::abs(out.A1 + r), std::abs(out.A1 - r));
    out.amplitude_decay_pct = kNaN;
    out.period_error = kNaN;
  }
  return out;
}

StabilityScan stability_scan(const Tableau& t, std::span<const double> xi_list,
                             std::span<const double> omega_grid) {
  constexpr double tol = 1e-10;
  StabilityScan scan;
  for (const double xi : xi_list) {
    for (const double Om : omega_grid) {
      const TestPoint p{Om, xi, 1.0};
      const SpectralSample m = measures(numerical_pair(t, p).D, Om, xi);
      if (m.rho > scan.max_rho) {
        scan.max_rho = m.rho;
        scan.worst_Omega = Om;
        scan.worst_xi = xi;
      }
      const bool a2_in_range = m.A2 >= -1.0 - tol && m.A2 <= 1.0 + tol;
      const bool pair_ok = std::abs(2.0 * m.A1) <= m.A2 + 1.0 + tol;
      if (!(a2_in_range && pair_ok)) {
        scan.violations.push_back(m);
      }
    }
  }
  return scan;
}

double high_frequency_limit(const Tableau& t) {
  const TestPoint p{1e8, 0.0, 1.0};
  return measures(numerical_pair(t, p).D, p.big_omega()).rho;
}

double order_probe(const Tableau& t, double xi, double omega) {
  if (!(omega > 0.0) || xi < 0.0 || xi >= 1.0) {
    throw DomainError("order_probe: need omega > 0 and 0 <= xi < 1");
  }
  // omega*h = 0.35: large enough that the finest error stays well above the
  // rounding floor, small enough that next-order terms do not bias the
  // fitted slope (at omega*h = 0.5 the five-sub-step member reads ~5.32).
  const double h = 0.35 / omega;
  std::vector<double> log_dt, log_err;
  for (int k = 0; k < 4; ++k) {
    const double dt = h / static_cast<double>(1 << k);
    const TestPoint p{omega, xi, dt};
    const AmpPair num = numerical_pair(t, p);
    const AmpPair exa = exact_pair(p);
    const double err = std::max((num.D - exa.D).cwiseAbs().maxCoeff(),
                                (num.L - exa.L).cwiseAbs().maxCoeff());
    if (k == 0 && err < 1e-14) {
      throw NumericalError("order_probe: error below 1e-14 at the largest step; "
                           "increase h to recover a slope");
    }
    log_dt.push_back(std::log(dt));
    log_err.push_back(std::log(err));
  }
  // Least-squares slope of log(err) against log(dt).
  const double n = static_cast<double>(log_dt.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < log_dt.size(); ++i) {
    sx += log_dt[i];
    sy += log_err[i];
    sxx += log_dt[i] * log_dt[i];
    sxy += log_dt[i] * log_err[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return slope - 1.0;
}

std::vector<double> log_spaced(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    throw DomainError("log_spaced: need 0 < lo < hi and points >= 2");
  }
  std::vector<double> grid(points);
  const double llo = std::log10(lo), lhi = std::log10(hi);
  for (int i = 0; i < points; ++i) {
    grid[i] = std::pow(10.0, llo + (lhi - llo) * i / (points - 1));
  }
  return grid;
}

}  // namespace substep
