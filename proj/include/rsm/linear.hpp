#pragma once

#include <Eigen/Core>
#include <vector>

#include "rsm/design.hpp"

namespace rsm {

/// Ordinary least squares fit on an explicit model matrix.
struct LinearFit {
  Eigen::VectorXd coefficients;
  double sigma2_hat = 0.0;      // SSE / (n - p)
  Eigen::MatrixXd xtx_inverse;  // (X'X)^-1, symmetric
  Eigen::VectorXd residuals;
  double sse = 0.0;
};

/// Solves min ||y - X b|| by singular value decomposition; never forms an
/// explicit inverse for the solve. Singular values below 1e-10 times the
/// largest are treated as zero; a deficient X is an error naming the
/// dependent columns.
LinearFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// sigma2_hat * (X'X)^-1.
Eigen::MatrixXd coef_covariance(const LinearFit& fit);

/// The quadratic form f -> f' (X'X)^-1 f, factored once so repeated
/// evaluation (variance probes, grids) stays cheap.
class VarianceForm {
 public:
  /// Throws NumericError when X is column rank deficient.
  explicit VarianceForm(const Eigen::MatrixXd& X);

  double operator()(const Eigen::VectorXd& f) const;
  Eigen::MatrixXd xtx_inverse() const;

 private:
  Eigen::MatrixXd w_;  // diag(1/sigma) V', so that the form is ||w f||^2
};

/// f(x)' (X'X)^-1 f(x) for an explicit model matrix and feature vector,
/// in units of sigma^2.
double prediction_variance(const Eigen::MatrixXd& X, const Eigen::VectorXd& f);

/// Prediction variance of the polynomial model fitted on the design,
/// evaluated at the coded point x.
double prediction_variance(const Design& design, ModelOrder order,
                           const Eigen::VectorXd& x);

/// Rectangular grid: inclusive [min, max] sweep per axis at the given step.
struct GridSpec {
  struct Axis {
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;
  };
  std::vector<Axis> axes;

  int dimensions() const { return static_cast<int>(axes.size()); }
  std::vector<double> axis_values(int axis) const;
  /// All grid nodes, row-major with the first axis slowest.
  Eigen::MatrixXd nodes() const;
};

/// Grid nodes with one value attached to each.
struct GridValues {
  Eigen::MatrixXd points;  // n x k
  Eigen::VectorXd values;  // n
};

/// prediction_variance evaluated at every node of the grid.
GridValues variance_surface_grid(const Design& design, ModelOrder order,
                                 const GridSpec& grid);

}  // namespace rsm
