#include "substep/models.hpp"

#include <cmath>

namespace substep {

LinearBenchmark sdof_damped_forced() {
  LinearBenchmark bench;
  bench.model.M = Eigen::MatrixXd::Constant(1, 1, 1.0);
  bench.model.C = Eigen::MatrixXd::Constant(1, 1, 4.0);
  bench.model.K = Eigen::MatrixXd::Constant(1, 1, 5.0);
  bench.model.load = [](double t) {
    return Eigen::VectorXd::Constant(1, std::sin(2.0 * t));
  };
  bench.u0 = Eigen::VectorXd::Constant(1, 57.0 / 65.0);
  bench.v0 = Eigen::VectorXd::Constant(1, 2.0 / 65.0);
  bench.exact = [](double t) {
    const double e = std::exp(-2.0 * t);
    const double c1 = std::cos(t), s1 = std::sin(t);
    const double c2 = std::cos(2.0 * t), s2 = std::sin(2.0 * t);
    StateVector st;
    st.t = t;
    st.u = Eigen::VectorXd::Constant(1, e * (c1 + 2.0 * s1) - (8.0 * c2 - s2) / 65.0);
    st.v = Eigen::VectorXd::Constant(1, -5.0 * e * s1 + (16.0 * s2 + 2.0 * c2) / 65.0);
    st.a = Eigen::VectorXd::Constant(
        1, e * (10.0 * s1 - 5.0 * c1) + (32.0 * c2 - 4.0 * s2) / 65.0);
    return st;
  };
  return bench;
}

LinearBenchmark modal_two_dof() {
  constexpr double k1 = 1e7;
  constexpr double k2 = 1.0;
  constexpr double wp = 1.2;

  LinearBenchmark bench;
  bench.model.M = Eigen::MatrixXd::Identity(2, 2);
  bench.model.C = Eigen::MatrixXd::Zero(2, 2);
  bench.model.K = Eigen::MatrixXd(2, 2);
  bench.model.K << k1 + k2, -k2, -k2, k2;
  bench.model.load = [](double t) {
    Eigen::VectorXd f(2);
    f << k1 * std::sin(wp * t), 0.0;
    return f;
  };
  bench.u0 = Eigen::VectorXd::Zero(2);
  bench.v0 = Eigen::VectorXd::Zero(2);

  // Closed-form modal solution: with M = I, decompose K = Phi*diag(lam)*Phi^T
  // and solve each q'' + lam*q = p*sin(wp*t) from rest.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(bench.model.K);
  const Eigen::Matrix2d phi = eig.eigenvectors();
  const Eigen::Vector2d lam = eig.eigenvalues();
  const Eigen::Vector2d p = phi.transpose() * Eigen::Vector2d(k1, 0.0);
  bench.exact = [phi, lam, p](double t) {
    Eigen::Vector2d q, qd, qdd;
    for (int i = 0; i < 2; ++i) {
      const double wn = std::sqrt(lam(i));
      const double amp = p(i) / (lam(i) - wp * wp);
      q(i) = amp * (std::sin(wp * t) - wp / wn * std::sin(wn * t));
      qd(i) = amp * wp * (std::cos(wp * t) - std::cos(wn * t));
      qdd(i) = amp * wp * (-wp * std::sin(wp * t) + wn * std::sin(wn * t));
    }
    StateVector st;
    st.t = t;
    st.u = phi * q;
    st.v = phi * qd;
    st.a = phi * qdd;
    return st;
  };
  return bench;
}

NonlinearBenchmark pendulum() {
  NonlinearBenchmark bench;
  bench.model.M = Eigen::MatrixXd::Constant(1, 1, 1.0);
  bench.model.f_int = [](const Eigen::VectorXd& u, const Eigen::VectorXd&) {
    return Eigen::VectorXd::Constant(1, std::sin(u(0)));
  };
  bench.model.tangents = [](const Eigen::VectorXd& u, const Eigen::VectorXd&) {
    return std::make_pair(Eigen::MatrixXd::Constant(1, 1, std::cos(u(0))),
                          Eigen::MatrixXd::Zero(1, 1));
  };
  bench.model.load = [](double) { return Eigen::VectorXd::Zero(1); };
  bench.u0 = Eigen::VectorXd::Zero(1);
  bench.v0 = Eigen::VectorXd::Constant(1, 1.999999238456499);
  return bench;
}

NonlinearBenchmark spring_chain(int n) {
  if (n < 2) {
    throw DomainError("spring_chain: need at least 2 masses");
  }
  constexpr double k = 1e5;
  constexpr double hard = 2.0;  // hardening coefficient alpha

  NonlinearBenchmark bench;
  bench.model.M = Eigen::MatrixXd::Identity(n, n);
  // Spring i >= 2 carries force k*e + k*alpha*e^3 over its elongation
  // e_i = u_i - u_{i-1}; spring 1 ties mass 1 to ground linearly.
  bench.model.f_int = [n](const Eigen::VectorXd& u, const Eigen::VectorXd&) {
    Eigen::VectorXd force(n);
    Eigen::VectorXd spring(n);  // spring[i]: force in the spring left of mass i
    spring(0) = k * u(0);
    for (int i = 1; i < n; ++i) {
      const double e = u(i) - u(i - 1);
      spring(i) = k * e + k * hard * e * e * e;
    }
    for (int i = 0; i < n; ++i) {
      force(i) = spring(i) - ((i + 1 < n) ? spring(i + 1) : 0.0);
    }
    return force;
  };
  bench.model.tangents = [n](const Eigen::VectorXd& u, const Eigen::VectorXd&) {
    Eigen::VectorXd kt(n);  // tangent stiffness of the spring left of mass i
    kt(0) = k;
    for (int i = 1; i < n; ++i) {
      const double e = u(i) - u(i - 1);
      kt(i) = k * (1.0 + 3.0 * hard * e * e);
    }
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      jac(i, i) = kt(i) + ((i + 1 < n) ? kt(i + 1) : 0.0);
      if (i + 1 < n) {
        jac(i, i + 1) = -kt(i + 1);
        jac(i + 1, i) = -kt(i + 1);
      }
    }
    return std::make_pair(jac, Eigen::MatrixXd::Zero(n, n));
  };
  bench.model.load = [n](double t) {
    return Eigen::VectorXd::Constant(n, std::sin(t));
  };
  bench.u0 = Eigen::VectorXd::Zero(n);
  bench.v0 = Eigen::VectorXd::Zero(n);
  return bench;
}

NonlinearModel as_nonlinear(const LinearModel& model) {
  NonlinearModel nl;
  nl.M = model.M;
  const Eigen::MatrixXd K = model.K;
  const Eigen::MatrixXd C = model.C;
  nl.f_int = [K, C](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    return Eigen::VectorXd(K * u + C * v);
  };
  nl.tangents = [K, C](const Eigen::VectorXd&, const Eigen::VectorXd&) {
    return std::make_pair(K, C);
  };
  nl.load = model.load;
  return nl;
}

}  // namespace substep
