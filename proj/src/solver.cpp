#include "rsm/solver.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <string>

#include "rsm/errors.hpp"
#include "rsm/normal.hpp"

namespace rsm {

namespace {

constexpr double rank_rtol = 1e-10;

double max_relative_change(const Eigen::VectorXd& theta, const Eigen::VectorXd& step) {
  double worst = 0.0;
  for (Eigen::Index t = 0; t < theta.size(); ++t) {
    worst = std::max(worst, std::abs(step[t]) / std::max(std::abs(theta[t]), 1e-10));
  }
  return worst;
}

}  // namespace

double sse(const Eigen::VectorXd& observed, const Eigen::VectorXd& fitted) {
  if (observed.size() != fitted.size()) {
    throw InputError("observed and fitted vectors differ in length");
  }
  return (observed - fitted).squaredNorm();
}

bool convergence_check(const Eigen::VectorXd& previous,
                       const Eigen::VectorXd& next, double delta) {
  if (previous.size() != next.size()) {
    throw InputError("parameter vectors differ in length");
  }
  return max_relative_change(previous, next - previous) < delta;
}

FitResult gauss_newton(const ModelSpec& model, const Dataset& data,
                       const Eigen::VectorXd& theta0, const SolverConfig& config) {
  model.validate();
  data.validate();
  if (data.factors() != model.k) {
    throw InputError("dataset has " + std::to_string(data.factors()) +
                     " factors but the model expects " + std::to_string(model.k));
  }
  const int n = data.rows();
  const int p = model.term_count();
  if (n < p) {
    throw InputError("dataset has " + std::to_string(n) + " rows for " +
                     std::to_string(p) + " parameters");
  }
  if (theta0.size() != p) {
    throw InputError("starting vector has " + std::to_string(theta0.size()) +
                     " entries but the model has " + std::to_string(p) + " terms");
  }
  if (!(config.delta > 0.0)) throw InputError("convergence tolerance must be positive");
  if (config.max_iterations < 1) throw InputError("max_iterations must be at least 1");
  if (config.halving_limit < 1) throw InputError("halving_limit must be at least 1");

  const Eigen::MatrixXd F = model_matrix(data.x, model);
  Eigen::VectorXd theta = theta0;
  Eigen::VectorXd fitted = eval_response(F, theta);
  double current = sse(data.y, fitted);

  FitResult result;
  result.sse_trace.push_back(current);
  bool converged = false;
  int iterations = 0;
  double achieved = std::numeric_limits<double>::infinity();

  while (iterations < config.max_iterations) {
    const Eigen::MatrixXd Z = jacobian(F, theta);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(rank_rtol);
    if (svd.rank() < p) {
      throw NumericError("linearized system is singular (rank " +
                         std::to_string(svd.rank()) + " of " + std::to_string(p) + ")");
    }
    Eigen::VectorXd step = svd.solve(data.y - fitted);

    // The solved step is the candidate increment; a candidate already
    // inside the tolerance is neither applied nor counted, so a start at
    // the solution reports zero iterations and identical estimates.
    achieved = max_relative_change(theta, step);
    if (achieved < config.delta) {
      converged = true;
      break;
    }

    bool accepted = false;
    int halvings = 0;
    while (true) {
      const Eigen::VectorXd candidate = theta + step;
      bool evaluable = true;
      Eigen::VectorXd cand_fitted;
      double cand_sse = std::numeric_limits<double>::infinity();
      try {
        cand_fitted = eval_response(F, candidate);
        cand_sse = sse(data.y, cand_fitted);
      } catch (const SingularityError&) {
        evaluable = false;
      }
      if (evaluable && (!config.step_halving || cand_sse <= current)) {
        theta = candidate;
        fitted = std::move(cand_fitted);
        current = cand_sse;
        accepted = true;
        break;
      }
      if (!config.step_halving) {
        throw SingularityError("model evaluation hit a pole at the trial point");
      }
      if (halvings >= config.halving_limit) {
        if (!evaluable) {
          throw SingularityError(
              "model evaluation hit a pole at every trial point after " +
              std::to_string(halvings) + " halvings");
        }
        break;  // SSE still increases at the smallest step: give up here
      }
      step *= 0.5;
      ++halvings;
    }
    if (!accepted) break;
    ++iterations;
    result.sse_trace.push_back(current);
  }

  result.iterations = iterations;
  result.converged = converged;
  result.achieved_tolerance = achieved;
  result.sse = current;
  result.theta_hat = make_params(model, theta);

  const Eigen::MatrixXd Z = jacobian(F, theta);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Z, Eigen::ComputeThinV);
  svd.setThreshold(rank_rtol);
  if (svd.rank() < p) {
    if (converged) {
      throw NumericError("linearized system is singular at the solution (rank " +
                         std::to_string(svd.rank()) + " of " + std::to_string(p) + ")");
    }
    result.covariance = Eigen::MatrixXd::Zero(p, p);
    return result;
  }
  const double s2 = n > p ? current / static_cast<double>(n - p) : 0.0;
  const Eigen::MatrixXd& V = svd.matrixV();
  const Eigen::VectorXd inv_s2 = svd.singularValues().array().square().inverse().matrix();
  result.covariance = s2 * (V * inv_s2.asDiagonal() * V.transpose());
  result.covariance = 0.5 * (result.covariance + result.covariance.transpose()).eval();
  return result;
}

FitResult refit_from_solution(const ModelSpec& model, const Dataset& data,
                              const FitResult& fit, const SolverConfig& config) {
  if (!fit.converged) throw InputError("refit requires a converged fit");
  FitResult refit = gauss_newton(model, data, fit.theta_hat.values, config);
  if (refit.iterations != 0) {
    throw NumericError("reported solution is not stationary: refit accepted " +
                       std::to_string(refit.iterations) + " steps");
  }
  if (std::abs(refit.sse - fit.sse) > 1e-10 * std::max(fit.sse, 1e-30)) {
    throw NumericError("reported solution is not stationary: SSE moved on refit");
  }
  if (!convergence_check(fit.theta_hat.values, refit.theta_hat.values, config.delta)) {
    throw NumericError("reported solution is not stationary: estimates moved on refit");
  }
  return refit;
}

std::vector<Interval> asymptotic_ci(const FitResult& fit, double level) {
  if (!fit.converged) throw InputError("confidence intervals require a converged fit");
  if (!(level > 0.0 && level < 1.0)) {
    throw InputError("confidence level must be strictly inside (0, 1)");
  }
  const double z = normal_quantile(0.5 * (1.0 + level));
  std::vector<Interval> intervals;
  const Eigen::Index p = fit.theta_hat.values.size();
  intervals.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index t = 0; t < p; ++t) {
    const double var = fit.covariance(t, t);
    if (var < 0.0) {
      throw NumericError("negative variance for parameter '" +
                         fit.theta_hat.labels[static_cast<std::size_t>(t)] + "'");
    }
    const double half = z * std::sqrt(var);
    intervals.push_back({fit.theta_hat.values[t] - half,
                         fit.theta_hat.values[t] + half});
  }
  return intervals;
}

}  // namespace rsm
