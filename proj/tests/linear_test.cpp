#include <doctest.h>

#include <cmath>

#include "substep/linear.hpp"
#include "substep/models.hpp"
#include "substep/spectral.hpp"

using namespace substep;

TEST_SUITE_BEGIN("linear");

TEST_CASE("initial state completes the acceleration from equilibrium") {
  const LinearBenchmark bench = sdof_damped_forced();
  const StateVector st = initial_state(bench.model, bench.u0, bench.v0, 0.0);
  CHECK(std::abs(st.a(0) - (-293.0 / 65.0)) <= 1e-12);

  LinearModel zero;
  zero.M = Eigen::MatrixXd::Identity(3, 3);
  zero.C = Eigen::MatrixXd::Zero(3, 3);
  zero.K = Eigen::MatrixXd::Zero(3, 3);
  zero.load = [](double) { return Eigen::VectorXd::Zero(3); };
  const StateVector z =
      initial_state(zero, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3), 0.0);
  CHECK(z.a.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("effective operator factors M + eta*dt*C + (eta*dt)^2*K") {
  const LinearBenchmark bench = sdof_damped_forced();
  const Tableau t = build_tableau(SchemeId(3), 0.0);
  const double dt = 0.1;
  const EffectiveOperator op(bench.model, t, dt);
  const double h = 0.5 * t.gamma1() * dt;
  const double s_expected = 1.0 + 4.0 * h + 5.0 * h * h;
  const Eigen::VectorXd x = op.solve(Eigen::VectorXd::Ones(1));
  CHECK(std::abs(x(0) - 1.0 / s_expected) <= 1e-15);
  CHECK_THROWS_AS(EffectiveOperator(bench.model, t, 0.0), DomainError);
}

TEST_CASE("one step reproduces the scalar amplification map") {
  const double xi = 0.3, w = 2.0, dt = 0.13;
  LinearModel m;
  m.M = Eigen::MatrixXd::Constant(1, 1, 1.0);
  m.C = Eigen::MatrixXd::Constant(1, 1, 2.0 * xi * w);
  m.K = Eigen::MatrixXd::Constant(1, 1, w * w);
  m.load = [](double) { return Eigen::VectorXd::Zero(1); };
  for (int s = 1; s <= 6; ++s) {
    const Tableau t = build_tableau(SchemeId(s), 0.5);
    const StateVector st0 = initial_state(
        m, Eigen::VectorXd::Constant(1, 0.7), Eigen::VectorXd::Constant(1, -0.4), 0.0);
    const EffectiveOperator op(m, t, dt);
    const StateVector st1 = step(m, t, st0, dt, op);
    const AmpPair ap = numerical_pair(t, {w, xi, dt});
    const double u_ref = ap.D(0, 0) * 0.7 + ap.D(0, 1) * -0.4;
    const double v_ref = ap.D(1, 0) * 0.7 + ap.D(1, 1) * -0.4;
    CAPTURE(s);
    CHECK(std::abs(st1.u(0) - u_ref) <= 1e-12);
    CHECK(std::abs(st1.v(0) - v_ref) <= 1e-12);
    // returned acceleration satisfies equilibrium at the step end
    CHECK(std::abs(st1.a(0) + 2.0 * xi * w * st1.v(0) + w * w * st1.u(0)) <= 1e-12);
  }
}

TEST_CASE("zero load keeps a zero state exactly") {
  LinearModel m;
  m.M = Eigen::MatrixXd::Identity(2, 2);
  m.C = Eigen::MatrixXd::Zero(2, 2);
  m.K = Eigen::MatrixXd(2, 2);
  m.K << 3.0, -1.0, -1.0, 2.0;
  m.load = [](double) { return Eigen::VectorXd::Zero(2); };
  const Tableau t = build_tableau(SchemeId(4), 0.5);
  const Trajectory traj = simulate(m, t, Eigen::VectorXd::Zero(2),
                                   Eigen::VectorXd::Zero(2), 0.0, 1.0, 0.1);
  for (const StateVector& st : traj) {
    CHECK(st.u.cwiseAbs().maxCoeff() == 0.0);
    CHECK(st.v.cwiseAbs().maxCoeff() == 0.0);
    CHECK(st.a.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("trajectory grid and final-step shortening") {
  const LinearBenchmark bench = sdof_damped_forced();
  const Tableau t = build_tableau(SchemeId(3), 0.5);
  SUBCASE("horizon divides the step count") {
    const Trajectory traj =
        simulate(bench.model, t, bench.u0, bench.v0, 0.0, 5.62, 0.02);
    CHECK(traj.size() == 282);  // initial state + 281 steps
    CHECK(traj[1].t == 0.02);
    CHECK(traj.back().t == doctest::Approx(5.62).epsilon(1e-14));
  }
  SUBCASE("shortened final step lands exactly on t_end") {
    const Trajectory traj =
        simulate(bench.model, t, bench.u0, bench.v0, 0.0, 1.03, 0.25);
    CHECK(traj.size() == 6);  // initial + 4 full + 1 short
    CHECK(traj.back().t == 1.03);
  }
  SUBCASE("empty horizon returns just the initial state") {
    const Trajectory traj =
        simulate(bench.model, t, bench.u0, bench.v0, 0.0, 0.0, 0.1);
    CHECK(traj.size() == 1);
  }
  SUBCASE("stride thins the output but keeps the final state") {
    const Trajectory traj = simulate(bench.model, t, bench.u0, bench.v0, 0.0, 1.0,
                                     0.1, SimulateOptions{4});
    REQUIRE(traj.size() == 4);  // t = 0, 0.4, 0.8, 1.0
    CHECK(traj.back().t == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("equilibrium residual holds at every returned state") {
  const LinearBenchmark bench = sdof_damped_forced();
  const Tableau t = build_tableau(SchemeId(4), 0.0);
  const Trajectory traj =
      simulate(bench.model, t, bench.u0, bench.v0, 0.0, 2.0, 0.05);
  for (const StateVector& st : traj) {
    const Eigen::VectorXd f = bench.model.load(st.t);
    const double res = (bench.model.M * st.a + bench.model.C * st.v +
                        bench.model.K * st.u - f).norm();
    CHECK(res <= 1e-9 * (1.0 + f.norm()));
  }
}

TEST_CASE("one factorization serves the whole simulation") {
  const LinearBenchmark bench = sdof_damped_forced();
  const Tableau t = build_tableau(SchemeId(5), 0.5);
  const double dt = 0.1;
  const Trajectory traj =
      simulate(bench.model, t, bench.u0, bench.v0, 0.0, 1.0, dt);
  // manual loop reusing a single handle must agree bit for bit
  const EffectiveOperator op(bench.model, t, dt);
  StateVector st = initial_state(bench.model, bench.u0, bench.v0, 0.0);
  for (int k = 0; k < 10; ++k) {
    st = step(bench.model, t, st, dt, op);
    st.t = (k + 1) * dt;
    CHECK(st.u(0) == traj[k + 1].u(0));
    CHECK(st.v(0) == traj[k + 1].v(0));
    CHECK(st.a(0) == traj[k + 1].a(0));
  }
}

TEST_CASE("sixth-order member integrates the damped forced oscillator tightly") {
  const LinearBenchmark bench = sdof_damped_forced();
  const Tableau t = build_tableau(SchemeId(6), 1.0);
  const Trajectory traj =
      simulate(bench.model, t, bench.u0, bench.v0, 0.0, 5.62, 0.01);
  double num2 = 0.0, den2 = 0.0;
  for (std::size_t j = 1; j < traj.size(); ++j) {
    const double exact = bench.exact(traj[j].t).u(0);
    num2 += (exact - traj[j].u(0)) * (exact - traj[j].u(0));
    den2 += exact * exact;
  }
  CHECK(std::sqrt(num2 / den2) < 1e-10);
}

TEST_CASE("non-finite loads surface as numerical errors") {
  LinearModel m;
  m.M = Eigen::MatrixXd::Identity(1, 1);
  m.C = Eigen::MatrixXd::Zero(1, 1);
  m.K = Eigen::MatrixXd::Identity(1, 1);
  m.load = [](double) {
    return Eigen::VectorXd::Constant(1, std::numeric_limits<double>::quiet_NaN());
  };
  const Tableau t = build_tableau(SchemeId(2), 0.5);
  CHECK_THROWS_AS(simulate(m, t, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1),
                           0.0, 1.0, 0.1),
                  NumericalError);
}

TEST_SUITE_END();
