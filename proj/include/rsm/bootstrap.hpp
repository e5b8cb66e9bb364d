#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "rsm/dataset.hpp"
#include "rsm/solver.hpp"

namespace rsm {

/// Case-resampling bootstrap summary. estimates holds one row per
/// successful replicate, in replicate-index order.
struct BootstrapResult {
  int B = 0;
  double level = 0.95;
  ParamVector observed;
  Eigen::MatrixXd estimates;       // successes x p
  std::vector<Interval> intervals; // percentile, one per parameter
  Eigen::VectorXd bias;            // replicate mean minus observed
  int failures = 0;
};

/// Seed for replicate index i (zero-based), derived from the master seed
/// by a splitmix64 step so streams never overlap.
std::uint64_t replicate_seed(std::uint64_t master, int index);

/// Uniform draw in [0, n); unbiased for every n.
std::size_t bounded_index(std::mt19937_64& gen, std::size_t n);

/// n rows drawn with replacement from data.
Dataset resample_cases(const Dataset& data, std::mt19937_64& gen);

/// Percentile interval from sorted replicate values: order statistics
/// ceil(alpha/2 * m) and ceil((1 - alpha/2) * m), 1-based, clamped to
/// [1, m].
Interval percentile_ci(std::span<const double> sorted, double level);

/// Fits each of B case resamples, warm-starting at the observed solution.
/// Replicates that fail to converge are dropped and counted; more than 5%
/// failures is an error naming the rate. executors = 0 picks the hardware
/// thread count; results are identical for every executor count.
BootstrapResult bootstrap_fit(const ModelSpec& model, const Dataset& data,
                              const FitResult& observed, int B,
                              std::uint64_t seed,
                              const SolverConfig& config = {},
                              double level = 0.95, int executors = 0);

}  // namespace rsm
