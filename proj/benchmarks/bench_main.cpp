#include <benchmark/benchmark.h>

#include "substep/harness.hpp"
#include "substep/linear.hpp"
#include "substep/models.hpp"
#include "substep/nonlinear.hpp"
#include "substep/spectral.hpp"
#include "substep/tableau.hpp"

namespace {

using namespace substep;

void BM_BuildTableau(benchmark::State& state) {
  const SchemeId scheme(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_tableau(scheme, 0.3));
  }
}
BENCHMARK(BM_BuildTableau)->DenseRange(2, 6);

void BM_SpectralPoint(benchmark::State& state) {
  const Tableau t = build_tableau(SchemeId(static_cast<int>(state.range(0))), 0.5);
  double omega = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(numerical_pair(t, {omega, 0.1, 1.0}));
    omega = (omega < 1e7) ? omega * 1.7 : 1.0;
  }
}
BENCHMARK(BM_SpectralPoint)->DenseRange(2, 6);

void BM_LinearStepChain(benchmark::State& state) {
  // Dense-operator cost on a moderate DOF count.
  const int n = static_cast<int>(state.range(0));
  LinearModel m;
  m.M = Eigen::MatrixXd::Identity(n, n);
  m.C = Eigen::MatrixXd::Zero(n, n);
  m.K = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m.K(i, i) = (i + 1 < n) ? 2.0 : 1.0;
    if (i + 1 < n) {
      m.K(i, i + 1) = -1.0;
      m.K(i + 1, i) = -1.0;
    }
  }
  m.K *= 1e4;
  m.load = [n](double t) {
    return Eigen::VectorXd::Constant(n, std::sin(t));
  };
  const Tableau t = build_tableau(SchemeId(4), 0.5);
  const double dt = 0.01;
  const EffectiveOperator op(m, t, dt);
  StateVector st = initial_state(m, Eigen::VectorXd::Zero(n),
                                 Eigen::VectorXd::Zero(n), 0.0);
  for (auto _ : state) {
    st = step(m, t, st, dt, op);
    benchmark::DoNotOptimize(st.u.data());
  }
}
BENCHMARK(BM_LinearStepChain)->Arg(16)->Arg(64)->Arg(256);

void BM_PendulumStep(benchmark::State& state) {
  const NonlinearBenchmark bench = pendulum();
  const Tableau t = build_tableau(SchemeId(static_cast<int>(state.range(0))), 1.0);
  StateVector st = initial_state(bench.model, bench.u0, bench.v0, 0.0);
  const NewtonSettings settings;
  for (auto _ : state) {
    st = step(bench.model, t, st, 0.02, settings);
    benchmark::DoNotOptimize(st.u.data());
    if (st.t > 40.0) {
      st = initial_state(bench.model, bench.u0, bench.v0, 0.0);
    }
  }
}
BENCHMARK(BM_PendulumStep)->DenseRange(3, 6);

}  // namespace

BENCHMARK_MAIN();
