#pragma once

// Built-in benchmark systems with exact or reference solutions where
// available.  Each builtin carries its canonical initial conditions.

#include <functional>

#include "substep/linear.hpp"
#include "substep/nonlinear.hpp"

namespace substep {

using ExactState = std::function<StateVector(double)>;

struct LinearBenchmark {
  LinearModel model;
  Eigen::VectorXd u0;
  Eigen::VectorXd v0;
  ExactState exact;  // closed-form state, null if unavailable
};

struct NonlinearBenchmark {
  NonlinearModel model;
  Eigen::VectorXd u0;
  Eigen::VectorXd v0;
};

/// Damped forced oscillator u'' + 4u' + 5u = sin(2t), u(0) = 57/65,
/// u'(0) = 2/65, with the closed-form solution
/// u(t) = exp(-2t)(cos t + 2 sin t) - (8 cos 2t - sin 2t)/65 and its
/// analytic derivatives.
LinearBenchmark sdof_damped_forced();

/// Two-DOF mass-spring system with a stiff (k1 = 1e7) and a flexible
/// (k2 = 1) spring, driven through the stiff spring by sin(1.2 t); zero
/// initial data.  The exact state comes from the closed-form modal solution.
LinearBenchmark modal_two_dof();

/// Simple pendulum theta'' + sin(theta) = 0 with theta(0) = 0 and the
/// near-separatrix initial velocity 1.999999238456499, which keeps the
/// motion oscillating between +/-pi rather than rotating.
NonlinearBenchmark pendulum();

/// Chain of n unit masses: a linear ground spring k on mass 1 and hardening
/// springs between neighbours with force k*e + k*alpha*e^3 (k = 1e5,
/// alpha = 2), every mass driven by sin(t); zero initial data.
NonlinearBenchmark spring_chain(int n);

/// Wraps a linear model as a NonlinearModel with f_int = K*U + C*V; Newton
/// then converges in a single iteration.
NonlinearModel as_nonlinear(const LinearModel& model);

}  // namespace substep
