#pragma once

#include <Eigen/Core>

namespace radv {

using Index = Eigen::Index;

/// A state-by-action table: row s, column a. Row-major so that the flat
/// index of (s, a) is s * n_actions + a, matching the transition matrix rows.
using Table = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A function on states.
using StateVector = Eigen::VectorXd;

}  // namespace radv
