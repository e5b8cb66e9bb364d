#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>

#include "rsm/dataset.hpp"
#include "rsm/solver.hpp"

namespace rsm {

struct NormalityReport {
  double W = 0.0;
  double p_value = 0.0;
  int n = 0;
};

/// Shapiro-Wilk test for 3 <= n <= 5000 samples. A zero-variance sample
/// is an error.
NormalityReport shapiro_wilk(std::span<const double> values);

/// observed minus fitted at theta_hat.
Eigen::VectorXd residuals(const ModelSpec& model, const Dataset& data,
                          const ParamVector& theta);

/// Residuals divided by s = sqrt(SSE / (n - p)); all-zero when s == 0,
/// an error when n <= p.
Eigen::VectorXd standardized_residuals(const Eigen::VectorXd& raw, int p);

/// Residual-based adequacy summary for a fitted model. The normality test
/// is skipped (degenerate = true) when the residuals have zero variance.
struct AdequacyReport {
  double sse = 0.0;
  Eigen::VectorXd residuals;
  Eigen::VectorXd standardized;
  bool degenerate = false;
  std::optional<NormalityReport> normality;
  bool normal_errors_rejected = false;  // p < alpha
  double alpha = 0.05;
};

AdequacyReport adequacy_report(const ModelSpec& model, const Dataset& data,
                               const FitResult& fit, double alpha = 0.05);

}  // namespace rsm
