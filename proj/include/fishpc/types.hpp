#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fishpc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Cluster assignment per observation, 0-based (0..k-1). Files use 1-based labels.
using Labels = std::vector<int>;

} // namespace fishpc
