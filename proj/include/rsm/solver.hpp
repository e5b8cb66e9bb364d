#pragma once

#include <Eigen/Core>
#include <vector>

#include "rsm/dataset.hpp"
#include "rsm/model.hpp"

namespace rsm {

struct SolverConfig {
  double delta = 1e-6;      // relative per-parameter convergence tolerance
  int max_iterations = 50;  // accepted steps before giving up
  bool step_halving = true;
  int halving_limit = 10;
};

/// Outcome of a Gauss-Newton run.
struct FitResult {
  ParamVector theta_hat;
  double sse = 0.0;
  std::vector<double> sse_trace;  // SSE after each accepted step; front is the start
  int iterations = 0;             // accepted steps
  bool converged = false;
  double achieved_tolerance = 0.0;  // max relative parameter change at the last test
  Eigen::MatrixXd covariance;       // s^2 (Z'Z)^-1 at the solution
};

double sse(const Eigen::VectorXd& observed, const Eigen::VectorXd& fitted);

/// True when every parameter moved by less than delta relative to
/// max(|previous|, 1e-10).
bool convergence_check(const Eigen::VectorXd& previous,
                       const Eigen::VectorXd& next, double delta);

/// Gauss-Newton least squares for the inverse polynomial model. Each step
/// solves the linearized problem by SVD; when step halving is enabled a
/// step that raises the SSE is halved up to halving_limit times. A
/// candidate step already inside the tolerance is not applied and not
/// counted, so a start at the solution reports zero iterations.
FitResult gauss_newton(const ModelSpec& model, const Dataset& data,
                       const Eigen::VectorXd& theta0,
                       const SolverConfig& config = {});

/// Start from the theta of a converged fit with the OLS start bypassed.
/// The refit must accept no step and reproduce theta and SSE; anything
/// else is an error.
FitResult refit_from_solution(const ModelSpec& model, const Dataset& data,
                              const FitResult& fit,
                              const SolverConfig& config = {});

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Per-parameter linearization intervals theta_t +/- z_{1-(1-level)/2} se_t.
std::vector<Interval> asymptotic_ci(const FitResult& fit, double level);

}  // namespace rsm
