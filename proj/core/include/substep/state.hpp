#pragma once

#include <vector>

#include <Eigen/Dense>

namespace substep {

/// Displacement/velocity/acceleration triple at one time instant.
struct StateVector {
  double t = 0.0;
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  Eigen::VectorXd a;
};

using Trajectory = std::vector<StateVector>;

}  // namespace substep
