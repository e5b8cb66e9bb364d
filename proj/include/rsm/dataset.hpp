#pragma once

#include <Eigen/Core>

namespace rsm {

/// Observed experimental rows: factor settings in natural units and a
/// positive response. Inverse-polynomial terms divide by the factor
/// settings, so every x coordinate and every y must be strictly positive.
struct Dataset {
  Eigen::MatrixXd x;  // n x k
  Eigen::VectorXd y;  // n

  int rows() const { return static_cast<int>(y.size()); }
  int factors() const { return static_cast<int>(x.cols()); }

  /// Throws InputError naming the first offending row and column.
  void validate() const;
};

}  // namespace rsm
