#include "rsm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rsm/errors.hpp"
#include "rsm/normal.hpp"

namespace rsm {

namespace {

double poly(std::initializer_list<double> coeffs, double x) {
  double acc = 0.0;
  double pw = 1.0;
  for (double c : coeffs) {
    acc += c * pw;
    pw *= x;
  }
  return acc;
}

}  // namespace

NormalityReport shapiro_wilk(std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  if (n < 3 || n > 5000) {
    throw InputError("Shapiro-Wilk requires between 3 and 5000 values");
  }
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  if (!(v.back() - v.front() > 0.0)) {
    throw InputError("Shapiro-Wilk requires a sample with nonzero variance");
  }

  // Normal scores m_i and the Royston coefficient vector a.
  std::vector<double> m(static_cast<std::size_t>(n));
  double ssq = 0.0;
  for (int i = 0; i < n; ++i) {
    m[static_cast<std::size_t>(i)] =
        normal_quantile((i + 1 - 0.375) / (n + 0.25));
    ssq += m[static_cast<std::size_t>(i)] * m[static_cast<std::size_t>(i)];
  }

  std::vector<double> a(static_cast<std::size_t>(n));
  if (n == 3) {
    const double r = std::sqrt(0.5);
    a = {-r, 0.0, r};
  } else {
    const double u = 1.0 / std::sqrt(static_cast<double>(n));
    const double rssq = std::sqrt(ssq);
    const double an =
        poly({0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056}, u) +
        m[static_cast<std::size_t>(n - 1)] / rssq;
    std::size_t mid_lo, mid_hi;
    double phi;
    if (n > 5) {
      const double an1 =
          poly({0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633}, u) +
          m[static_cast<std::size_t>(n - 2)] / rssq;
      phi = (ssq - 2.0 * m[static_cast<std::size_t>(n - 1)] * m[static_cast<std::size_t>(n - 1)] -
             2.0 * m[static_cast<std::size_t>(n - 2)] * m[static_cast<std::size_t>(n - 2)]) /
            (1.0 - 2.0 * an * an - 2.0 * an1 * an1);
      a[static_cast<std::size_t>(n - 1)] = an;
      a[0] = -an;
      a[static_cast<std::size_t>(n - 2)] = an1;
      a[1] = -an1;
      mid_lo = 2;
      mid_hi = static_cast<std::size_t>(n - 2);
    } else {
      phi = (ssq - 2.0 * m[static_cast<std::size_t>(n - 1)] * m[static_cast<std::size_t>(n - 1)]) /
            (1.0 - 2.0 * an * an);
      a[static_cast<std::size_t>(n - 1)] = an;
      a[0] = -an;
      mid_lo = 1;
      mid_hi = static_cast<std::size_t>(n - 1);
    }
    const double rphi = std::sqrt(phi);
    for (std::size_t i = mid_lo; i < mid_hi; ++i) a[i] = m[i] / rphi;
  }

  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double numer = 0.0, denom = 0.0;
  for (int i = 0; i < n; ++i) {
    numer += a[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    denom += (v[static_cast<std::size_t>(i)] - mean) * (v[static_cast<std::size_t>(i)] - mean);
  }
  double W = numer * numer / denom;

  NormalityReport report;
  report.n = n;
  if (W >= 1.0) {
    report.W = 1.0;
    report.p_value = 1.0;
    return report;
  }
  report.W = W;

  double p;
  if (n == 3) {
    constexpr double pi6 = 1.90985931710274;   // 6/pi
    constexpr double stqr = 1.04719755119660;  // asin(sqrt(3/4))
    p = pi6 * (std::asin(std::sqrt(W)) - stqr);
  } else if (n <= 11) {
    const double an = static_cast<double>(n);
    const double gamma = poly({-2.273, 0.459}, an);
    const double y = std::log(1.0 - W);
    if (y >= gamma) {
      p = 1e-19;
    } else {
      const double z = (-std::log(gamma - y) -
                        poly({0.5440, -0.39978, 0.025054, -0.0006714}, an)) /
                       std::exp(poly({1.3822, -0.77857, 0.062767, -0.0020322}, an));
      p = 1.0 - normal_cdf(z);
    }
  } else {
    const double x = std::log(static_cast<double>(n));
    const double z = (std::log(1.0 - W) -
                      poly({-1.5861, -0.31082, -0.083751, 0.0038915}, x)) /
                     std::exp(poly({-0.4803, -0.082676, 0.0030302}, x));
    p = 1.0 - normal_cdf(z);
  }
  report.p_value = std::clamp(p, 0.0, 1.0);
  return report;
}

Eigen::VectorXd residuals(const ModelSpec& model, const Dataset& data,
                          const ParamVector& theta) {
  data.validate();
  const Eigen::MatrixXd F = model_matrix(data.x, model);
  return data.y - eval_response(F, theta.values);
}

Eigen::VectorXd standardized_residuals(const Eigen::VectorXd& raw, int p) {
  const auto n = static_cast<int>(raw.size());
  if (n <= p) {
    throw InputError("standardized residuals need more rows than parameters (" +
                     std::to_string(n) + " rows, " + std::to_string(p) +
                     " parameters)");
  }
  const double s = std::sqrt(raw.squaredNorm() / static_cast<double>(n - p));
  if (s == 0.0) return Eigen::VectorXd::Zero(n);
  return raw / s;
}

AdequacyReport adequacy_report(const ModelSpec& model, const Dataset& data,
                               const FitResult& fit, double alpha) {
  if (!fit.converged) {
    throw ConvergenceError("adequacy report requires a converged fit");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InputError("significance level must be strictly inside (0, 1)");
  }
  AdequacyReport report;
  report.alpha = alpha;
  report.residuals = residuals(model, data, fit.theta_hat);
  report.sse = report.residuals.squaredNorm();
  report.standardized =
      standardized_residuals(report.residuals, static_cast<int>(fit.theta_hat.values.size()));

  const double spread = report.residuals.maxCoeff() - report.residuals.minCoeff();
  if (report.residuals.size() < 3 || !(spread > 0.0)) {
    report.degenerate = true;
    return report;
  }
  report.normality = shapiro_wilk(
      std::span<const double>(report.standardized.data(),
                              static_cast<std::size_t>(report.standardized.size())));
  report.normal_errors_rejected = report.normality->p_value < alpha;
  return report;
}

}  // namespace rsm
