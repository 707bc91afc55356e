#include <doctest.h>

#include <cmath>
#include <limits>

#include "substep/harness.hpp"
#include "substep/linear.hpp"
#include "substep/models.hpp"
#include "substep/nonlinear.hpp"

using namespace substep;

TEST_SUITE_BEGIN("nonlinear");

TEST_CASE("linear problems converge in one Newton iteration and match") {
  const LinearBenchmark bench = sdof_damped_forced();
  const NonlinearModel wrapped = as_nonlinear(bench.model);
  const Tableau t = build_tableau(SchemeId(4), 0.5);

  const Trajectory lin = simulate(bench.model, t, bench.u0, bench.v0, 0.0, 1.0, 0.1);
  std::vector<int> iters;
  const Trajectory non =
      simulate(wrapped, t, bench.u0, bench.v0, 0.0, 1.0, 0.1, {}, &iters);

  REQUIRE(lin.size() == non.size());
  for (std::size_t j = 0; j < lin.size(); ++j) {
    CHECK(std::abs(lin[j].u(0) - non[j].u(0)) <= 1e-12);
    CHECK(std::abs(lin[j].v(0) - non[j].v(0)) <= 1e-12);
    CHECK(std::abs(lin[j].a(0) - non[j].a(0)) <= 1e-12);
  }
  for (const int it : iters) CHECK(it == 1);
}

TEST_CASE("pendulum sub-steps converge quickly near the origin") {
  const NonlinearBenchmark bench = pendulum();
  std::vector<int> iters;
  simulate(bench.model, build_tableau(SchemeId(3), 1.0), bench.u0, bench.v0, 0.0,
           1.0, 0.02, {}, &iters);
  REQUIRE(!iters.empty());
  for (const int it : iters) {
    CHECK(it >= 1);
    CHECK(it <= 5);
  }
}

TEST_CASE("pendulum energy stays flat for the non-dissipative members") {
  const NonlinearBenchmark bench = pendulum();
  const double e0 = 0.5 * bench.v0(0) * bench.v0(0) - 1.0;
  const Trajectory traj = simulate(bench.model, build_tableau(SchemeId(5), 1.0),
                                   bench.u0, bench.v0, 0.0, 5.0, 0.02);
  for (const StateVector& st : traj) {
    const double e = 0.5 * st.v(0) * st.v(0) - std::cos(st.u(0));
    CHECK(std::abs(e - e0) <= 1e-7);
  }
}

TEST_CASE("non-dissipative integration beats dissipative on the smooth pendulum") {
  const NonlinearBenchmark bench = pendulum();
  const double horizon = 5.0, dt = 0.02;
  const Trajectory ref = reference_trajectory(bench, 1e-5, horizon, dt);
  for (const int s : {3, 6}) {
    const Trajectory conservative = simulate(
        bench.model, build_tableau(SchemeId(s), 1.0), bench.u0, bench.v0, 0.0,
        horizon, dt);
    const Trajectory dissipative = simulate(
        bench.model, build_tableau(SchemeId(s), 0.0), bench.u0, bench.v0, 0.0,
        horizon, dt);
    const double err_cons = global_error(conservative, ref, Quantity::Displacement);
    const double err_diss = global_error(dissipative, ref, Quantity::Displacement);
    CAPTURE(s);
    CHECK(err_cons < err_diss);
  }
}

TEST_CASE("hardening chain integrates and improves with order") {
  const NonlinearBenchmark bench = spring_chain(10);
  const double horizon = 1.0, dt = 0.02;
  const Trajectory ref = reference_trajectory(bench, 1e-4, horizon, dt);
  const Trajectory t3 = simulate(bench.model, build_tableau(SchemeId(3), 1.0),
                                 bench.u0, bench.v0, 0.0, horizon, dt);
  const Trajectory t6 = simulate(bench.model, build_tableau(SchemeId(6), 1.0),
                                 bench.u0, bench.v0, 0.0, horizon, dt);
  const double e3 = global_error(t3, ref, Quantity::Displacement);
  const double e6 = global_error(t6, ref, Quantity::Displacement);
  CHECK(e6 < e3);
}

TEST_CASE("divergence and nonconvergence are reported") {
  SUBCASE("non-finite internal force") {
    NonlinearModel bad;
    bad.M = Eigen::MatrixXd::Identity(1, 1);
    bad.f_int = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
      return Eigen::VectorXd::Constant(1, std::numeric_limits<double>::quiet_NaN());
    };
    bad.tangents = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
      return std::make_pair(Eigen::MatrixXd::Identity(1, 1),
                            Eigen::MatrixXd::Zero(1, 1));
    };
    bad.load = [](double) { return Eigen::VectorXd::Zero(1); };
    CHECK_THROWS_AS(simulate(bad, build_tableau(SchemeId(2), 0.5),
                             Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1),
                             0.0, 0.1, 0.1),
                    NumericalError);
  }
  SUBCASE("iteration budget exhausted") {
    const NonlinearBenchmark bench = pendulum();
    NewtonSettings strict;
    strict.rtol = 1e-15;
    strict.atol = 1e-15;
    strict.max_iter = 1;
    CHECK_THROWS_AS(simulate(bench.model, build_tableau(SchemeId(3), 1.0),
                             bench.u0, bench.v0, 0.0, 1.0, 1.0, strict),
                    NumericalError);
  }
  SUBCASE("invalid settings") {
    const NonlinearBenchmark bench = pendulum();
    NewtonSettings bad;
    bad.max_iter = 0;
    CHECK_THROWS_AS(simulate(bench.model, build_tableau(SchemeId(3), 1.0),
                             bench.u0, bench.v0, 0.0, 0.1, 0.1, bad),
                    DomainError);
  }
}

TEST_SUITE_END();
