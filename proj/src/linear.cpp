#include "rsm/linear.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "rsm/errors.hpp"

namespace rsm {

namespace {

constexpr double rank_rtol = 1e-10;

std::string dependent_columns(const Eigen::MatrixXd& X) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(rank_rtol);
  const Eigen::Index rank = qr.rank();
  const auto perm = qr.colsPermutation().indices();
  std::string out;
  for (Eigen::Index i = rank; i < X.cols(); ++i) {
    if (!out.empty()) out += ", ";
    out += std::to_string(perm[i] + 1);
  }
  return out;
}

Eigen::JacobiSVD<Eigen::MatrixXd> thin_svd(const Eigen::MatrixXd& X) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(rank_rtol);
  return svd;
}

}  // namespace

LinearFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (n != y.size()) {
    throw InputError("model matrix has " + std::to_string(n) + " rows but " +
                     std::to_string(y.size()) + " responses");
  }
  if (n <= p) {
    throw InputError("underdetermined system: " + std::to_string(n) +
                     " rows for " + std::to_string(p) + " columns");
  }
  auto svd = thin_svd(X);
  if (svd.rank() < p) {
    throw NumericError("model matrix is rank deficient (rank " +
                       std::to_string(svd.rank()) + " of " + std::to_string(p) +
                       "); dependent columns: " + dependent_columns(X));
  }

  LinearFit fit;
  fit.coefficients = svd.solve(y);
  fit.residuals = y - X * fit.coefficients;
  fit.sse = fit.residuals.squaredNorm();
  fit.sigma2_hat = fit.sse / static_cast<double>(n - p);

  const Eigen::MatrixXd& V = svd.matrixV();
  const Eigen::VectorXd inv_s2 =
      svd.singularValues().array().square().inverse().matrix();
  fit.xtx_inverse = V * inv_s2.asDiagonal() * V.transpose();
  fit.xtx_inverse = 0.5 * (fit.xtx_inverse + fit.xtx_inverse.transpose()).eval();
  return fit;
}

Eigen::MatrixXd coef_covariance(const LinearFit& fit) {
  return fit.sigma2_hat * fit.xtx_inverse;
}

VarianceForm::VarianceForm(const Eigen::MatrixXd& X) {
  auto svd = thin_svd(X);
  if (svd.rank() < X.cols()) {
    throw NumericError("model matrix is rank deficient (rank " +
                       std::to_string(svd.rank()) + " of " +
                       std::to_string(X.cols()) + "); dependent columns: " +
                       dependent_columns(X));
  }
  w_ = svd.singularValues().array().inverse().matrix().asDiagonal() *
       svd.matrixV().transpose();
}

double VarianceForm::operator()(const Eigen::VectorXd& f) const {
  return (w_ * f).squaredNorm();
}

Eigen::MatrixXd VarianceForm::xtx_inverse() const {
  Eigen::MatrixXd inv = w_.transpose() * w_;
  return 0.5 * (inv + inv.transpose()).eval();
}

double prediction_variance(const Eigen::MatrixXd& X, const Eigen::VectorXd& f) {
  return VarianceForm(X)(f);
}

double prediction_variance(const Design& design, ModelOrder order,
                           const Eigen::VectorXd& x) {
  if (x.size() != design.k) {
    throw InputError("point has " + std::to_string(x.size()) +
                     " coordinates but the design has " +
                     std::to_string(design.k) + " factors");
  }
  VarianceForm form(model_matrix(design.rows, order));
  return form(polynomial_features(x, order));
}

std::vector<double> GridSpec::axis_values(int axis) const {
  const Axis& a = axes.at(static_cast<std::size_t>(axis));
  if (!(a.step > 0.0)) throw InputError("grid step must be positive");
  if (a.max < a.min) throw InputError("grid max must be at least min");
  std::vector<double> values;
  const int count = static_cast<int>(std::floor((a.max - a.min) / a.step + 1e-9)) + 1;
  values.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) values.push_back(a.min + a.step * i);
  return values;
}

Eigen::MatrixXd GridSpec::nodes() const {
  if (axes.empty()) throw InputError("grid has no axes");
  std::vector<std::vector<double>> per_axis;
  Eigen::Index total = 1;
  for (int j = 0; j < dimensions(); ++j) {
    per_axis.push_back(axis_values(j));
    total *= static_cast<Eigen::Index>(per_axis.back().size());
  }
  Eigen::MatrixXd nodes(total, dimensions());
  for (Eigen::Index i = 0; i < total; ++i) {
    Eigen::Index rem = i;
    for (int j = dimensions() - 1; j >= 0; --j) {
      const auto m = static_cast<Eigen::Index>(per_axis[static_cast<std::size_t>(j)].size());
      nodes(i, j) = per_axis[static_cast<std::size_t>(j)][static_cast<std::size_t>(rem % m)];
      rem /= m;
    }
  }
  return nodes;
}

GridValues variance_surface_grid(const Design& design, ModelOrder order,
                                 const GridSpec& grid) {
  if (grid.dimensions() != design.k) {
    throw InputError("grid has " + std::to_string(grid.dimensions()) +
                     " axes but the design has " + std::to_string(design.k) +
                     " factors");
  }
  GridValues out;
  out.points = grid.nodes();
  VarianceForm form(model_matrix(design.rows, order));
  out.values.resize(out.points.rows());
  for (Eigen::Index i = 0; i < out.points.rows(); ++i) {
    out.values[i] = form(polynomial_features(out.points.row(i).transpose(), order));
  }
  return out;
}

}  // namespace rsm
