#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <string>

#include "rsm/design.hpp"
#include "rsm/errors.hpp"
#include "rsm/linear.hpp"

using rsm::ccd;
using rsm::ccd_rotatable;
using rsm::coef_covariance;
using rsm::Design;
using rsm::full_factorial;
using rsm::GridSpec;
using rsm::InputError;
using rsm::LinearFit;
using rsm::ModelOrder;
using rsm::NumericError;
using rsm::ols_fit;
using rsm::prediction_variance;
using rsm::VarianceForm;
using rsm::variance_surface_grid;

namespace {

Eigen::MatrixXd random_matrix(int n, int p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  Eigen::MatrixXd X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = uni(gen);
  return X;
}

}  // namespace

TEST_CASE("constant column fit returns the mean") {
  Eigen::MatrixXd X = Eigen::MatrixXd::Ones(4, 1);
  Eigen::VectorXd y(4);
  y << 2.0, 2.0, 2.0, 2.0;
  const LinearFit fit = ols_fit(X, y);
  CHECK(fit.coefficients(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(fit.sse == doctest::Approx(0.0).scale(1.0).epsilon(1e-24));
  CHECK(fit.sigma2_hat == doctest::Approx(0.0).scale(1.0).epsilon(1e-24));
}

TEST_CASE("noiseless coefficients are recovered to machine precision") {
  std::mt19937_64 gen(20240925);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd X = random_matrix(12, 4, 777 + trial);
    Eigen::VectorXd beta(4);
    for (int j = 0; j < 4; ++j) beta(j) = uni(gen);
    const Eigen::VectorXd y = X * beta;
    const LinearFit fit = ols_fit(X, y);
    CAPTURE(trial);
    const double scale = std::max(1.0, beta.cwiseAbs().maxCoeff());
    CHECK((fit.coefficients - beta).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }
}

TEST_CASE("factorial coefficients are contrast means") {
  const Design d = full_factorial({{-1.0, 1.0}, {-1.0, 1.0}});
  const Eigen::MatrixXd X = model_matrix(d.rows, ModelOrder::first);
  Eigen::VectorXd y(4);
  y << 3.0, 5.0, 7.0, 13.0;
  const LinearFit fit = ols_fit(X, y);
  // X'X = 4 I, so each coefficient is X_j'y / 4.
  const Eigen::VectorXd expected = X.transpose() * y / 4.0;
  CHECK((fit.coefficients - expected).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("residuals are orthogonal to the design columns") {
  const Eigen::MatrixXd X = random_matrix(20, 5, 99);
  std::mt19937_64 gen(5);
  std::normal_distribution<double> noise(0.0, 1.0);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) y(i) = X.row(i).sum() + noise(gen);
  const LinearFit fit = ols_fit(X, y);
  const Eigen::VectorXd xr = X.transpose() * fit.residuals;
  for (int j = 0; j < 5; ++j) {
    const double scale = std::max(1.0, X.col(j).norm() * fit.residuals.norm());
    CHECK(std::abs(xr(j)) <= 1e-9 * scale);
  }
}

TEST_CASE("residuals sum to zero when the model has an intercept") {
  Eigen::MatrixXd X(6, 2);
  X << 1, 0.5, 1, 1.5, 1, 2.5, 1, 3.0, 1, 4.5, 1, 5.0;
  Eigen::VectorXd y(6);
  y << 1.0, 2.2, 2.9, 3.4, 5.1, 5.4;
  const LinearFit fit = ols_fit(X, y);
  CHECK(std::abs(fit.residuals.sum()) <= 1e-9 * std::max(1.0, y.cwiseAbs().sum()));
}

TEST_CASE("reported inverse is symmetric") {
  const Eigen::MatrixXd X = random_matrix(15, 4, 321);
  const LinearFit fit = ols_fit(X, Eigen::VectorXd::Ones(15));
  const Eigen::MatrixXd& A = fit.xtx_inverse;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  // And it really is the inverse of X'X.
  const Eigen::MatrixXd prod = A * (X.transpose() * X);
  CHECK((prod - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("rank deficiency is an error naming the dependent columns") {
  Eigen::MatrixXd X = random_matrix(10, 2, 11);
  Eigen::MatrixXd bad(10, 3);
  bad << X, X.col(0) + X.col(1);
  try {
    ols_fit(bad, Eigen::VectorXd::Ones(10));
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("rank deficient") != std::string::npos);
    CHECK(msg.find("dependent columns") != std::string::npos);
  }
}

TEST_CASE("underdetermined systems are rejected") {
  const Eigen::MatrixXd X = random_matrix(3, 3, 4);
  CHECK_THROWS_AS(ols_fit(X, Eigen::VectorXd::Ones(3)), InputError);
  CHECK_THROWS_AS(ols_fit(random_matrix(2, 3, 4), Eigen::VectorXd::Ones(2)),
                  InputError);
}

TEST_CASE("shape mismatches are rejected") {
  const Eigen::MatrixXd X = random_matrix(8, 2, 6);
  CHECK_THROWS_AS(ols_fit(X, Eigen::VectorXd::Ones(7)), InputError);
}

TEST_CASE("coefficient covariance on the factorial is sigma2/4 times identity") {
  const Design d = full_factorial({{-1.0, 1.0}, {-1.0, 1.0}});
  const Eigen::MatrixXd X = model_matrix(d.rows, ModelOrder::first);
  Eigen::VectorXd y(4);
  y << 1.0, 2.0, 4.0, 9.0;
  const LinearFit fit = ols_fit(X, y);
  const Eigen::MatrixXd cov = coef_covariance(fit);
  const Eigen::MatrixXd expected =
      fit.sigma2_hat / 4.0 * Eigen::MatrixXd::Identity(3, 3);
  CHECK((cov - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("an exact fit has zero covariance") {
  const Eigen::MatrixXd X = random_matrix(9, 3, 8);
  Eigen::VectorXd beta(3);
  beta << 1.0, -2.0, 0.5;
  const LinearFit fit = ols_fit(X, X * beta);
  CHECK(coef_covariance(fit).cwiseAbs().maxCoeff() <= 1e-20);
}

TEST_CASE("duplicating every row halves the inverse") {
  const Eigen::MatrixXd X = random_matrix(7, 3, 12);
  Eigen::MatrixXd doubled(14, 3);
  doubled << X, X;
  const LinearFit one = ols_fit(X, Eigen::VectorXd::Ones(7));
  const LinearFit two = ols_fit(doubled, Eigen::VectorXd::Ones(14));
  CHECK((two.xtx_inverse - 0.5 * one.xtx_inverse).cwiseAbs().maxCoeff() <=
        1e-12 * std::max(1.0, one.xtx_inverse.cwiseAbs().maxCoeff()));
}

TEST_CASE("factorial prediction variance at the center and a corner") {
  const Design d = full_factorial({{-1.0, 1.0}, {-1.0, 1.0}});
  Eigen::VectorXd center(2), corner(2);
  center << 0.0, 0.0;
  corner << 1.0, 1.0;
  CHECK(prediction_variance(d, ModelOrder::first, center) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK(prediction_variance(d, ModelOrder::first, corner) ==
        doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("prediction variance scales inversely with the square of the matrix") {
  const Eigen::MatrixXd X = random_matrix(12, 3, 77);
  Eigen::VectorXd f(3);
  f << 1.0, 0.4, -0.3;
  const double v1 = prediction_variance(X, f);
  const double v2 = prediction_variance(Eigen::MatrixXd(2.0 * X), f);
  CHECK(v2 == doctest::Approx(v1 / 4.0).epsilon(1e-10));
}

TEST_CASE("variance form agrees with the explicit quadratic product") {
  const Eigen::MatrixXd X = random_matrix(18, 4, 31);
  const VarianceForm form(X);
  const Eigen::MatrixXd inv = (X.transpose() * X).inverse();
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd f(4);
    for (int j = 0; j < 4; ++j) f(j) = uni(gen);
    const double direct = f.dot(inv * f);
    CHECK(form(f) == doctest::Approx(direct).epsilon(1e-9));
  }
  CHECK((form.xtx_inverse() - inv).cwiseAbs().maxCoeff() <=
        1e-9 * inv.cwiseAbs().maxCoeff());
}

TEST_CASE("grid axis values are inclusive of both endpoints") {
  GridSpec grid;
  grid.axes = {{-1.0, 1.0, 0.5}};
  const auto values = grid.axis_values(0);
  REQUIRE(values.size() == 5);
  CHECK(values.front() == -1.0);
  CHECK(values.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("grid nodes enumerate with the first axis slowest") {
  GridSpec grid;
  grid.axes = {{0.0, 1.0, 1.0}, {0.0, 1.0, 1.0}};
  const Eigen::MatrixXd nodes = grid.nodes();
  REQUIRE(nodes.rows() == 4);
  Eigen::MatrixXd expected(4, 2);
  expected << 0, 0, 0, 1, 1, 0, 1, 1;
  CHECK((nodes - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("degenerate single-node grid evaluates at one point") {
  GridSpec grid;
  grid.axes = {{0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}};
  const Design d = ccd_rotatable(2, 5);
  const auto surface = variance_surface_grid(d, ModelOrder::second, grid);
  REQUIRE(surface.values.size() == 1);
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
  CHECK(surface.values(0) ==
        doctest::Approx(prediction_variance(d, ModelOrder::second, origin))
            .epsilon(1e-12));
}

TEST_CASE("variance surface of the rotatable ccd is constant on circles") {
  GridSpec grid;
  grid.axes = {{-1.0, 1.0, 0.2}, {-1.0, 1.0, 0.2}};
  const Design d = ccd_rotatable(2, 5);
  const auto surface = variance_surface_grid(d, ModelOrder::second, grid);
  REQUIRE(surface.values.size() == 121);

  auto value_at = [&](double x1, double x2) {
    for (int i = 0; i < surface.points.rows(); ++i) {
      if (std::abs(surface.points(i, 0) - x1) < 1e-9 &&
          std::abs(surface.points(i, 1) - x2) < 1e-9)
        return surface.values(i);
    }
    FAIL("grid node not found");
    return 0.0;
  };

  const double corner = value_at(1.0, 0.0);
  CHECK(std::abs(value_at(0.6, 0.8) - corner) < 1e-8);
  CHECK(std::abs(value_at(0.0, 1.0) - corner) < 1e-8);
  CHECK(std::abs(value_at(-0.6, -0.8) - corner) < 1e-8);

  // The same probe distinguishes the face-centered design.
  const auto face =
      variance_surface_grid(ccd(2, 5, 1.0), ModelOrder::second, grid);
  auto face_at = [&](double x1, double x2) {
    for (int i = 0; i < face.points.rows(); ++i) {
      if (std::abs(face.points(i, 0) - x1) < 1e-9 &&
          std::abs(face.points(i, 1) - x2) < 1e-9)
        return face.values(i);
    }
    FAIL("grid node not found");
    return 0.0;
  };
  CHECK(std::abs(face_at(0.6, 0.8) - face_at(1.0, 0.0)) > 1e-6);
}

TEST_CASE("grid specs with bad steps are rejected") {
  GridSpec grid;
  grid.axes = {{0.0, 1.0, 0.0}};
  CHECK_THROWS_AS(grid.nodes(), InputError);
  grid.axes = {{1.0, 0.0, 0.5}};
  CHECK_THROWS_AS(grid.nodes(), InputError);
}
