// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace netclust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Default tolerance for partition checks; the CLI lets NETCLUST_TOL
/// override it.
inline constexpr double kDefaultTol = 1e-9;

/// Malformed user-supplied data: bad file contents, out-of-range vertex
/// indices, cells that do not partition the vertex set, and the like.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request that is numerically meaningless for the given data, e.g. a
/// closed-form H2 norm of a disconnected damper network, or an H2 norm of a
/// system with an observable marginal mode.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace netclust
