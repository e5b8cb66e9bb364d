#include "rsm/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <thread>

#include "rsm/errors.hpp"
#include "rsm/format.hpp"

namespace rsm {

std::uint64_t replicate_seed(std::uint64_t master, int index) {
  // splitmix64 step on master + (index+1) * golden gamma; distinct indices
  // yield well-separated stream seeds.
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::size_t bounded_index(std::mt19937_64& gen, std::size_t n) {
  if (n == 0) throw InputError("bounded draw needs a positive range");
  const std::uint64_t bound = n;
  const std::uint64_t reject_below = (0 - bound) % bound;  // 2^64 mod n
  std::uint64_t r;
  do {
    r = gen();
  } while (r < reject_below);
  return static_cast<std::size_t>(r % bound);
}

Dataset resample_cases(const Dataset& data, std::mt19937_64& gen) {
  if (data.rows() == 0) throw InputError("dataset is empty");
  const auto n = static_cast<std::size_t>(data.rows());
  Dataset out;
  out.x.resize(data.x.rows(), data.x.cols());
  out.y.resize(data.y.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto pick = static_cast<Eigen::Index>(bounded_index(gen, n));
    out.x.row(static_cast<Eigen::Index>(i)) = data.x.row(pick);
    out.y[static_cast<Eigen::Index>(i)] = data.y[pick];
  }
  return out;
}

Interval percentile_ci(std::span<const double> sorted, double level) {
  const auto m = static_cast<std::ptrdiff_t>(sorted.size());
  if (m < 2) throw InputError("percentile interval needs at least 2 samples");
  if (!(level > 0.0 && level < 1.0)) {
    throw InputError("confidence level must be strictly inside (0, 1)");
  }
  const double alpha = 1.0 - level;
  // 1-based order statistics at ceil(q*m); the tiny backoff keeps exact
  // products like 0.025 * 40 from rounding up to the next integer.
  const auto order_stat = [m](double q) {
    auto idx = static_cast<std::ptrdiff_t>(std::ceil(q * static_cast<double>(m) - 1e-9));
    return std::clamp<std::ptrdiff_t>(idx, 1, m);
  };
  return {sorted[static_cast<std::size_t>(order_stat(alpha / 2.0) - 1)],
          sorted[static_cast<std::size_t>(order_stat(1.0 - alpha / 2.0) - 1)]};
}

BootstrapResult bootstrap_fit(const ModelSpec& model, const Dataset& data,
                              const FitResult& observed, int B, std::uint64_t seed,
                              const SolverConfig& config, double level,
                              int executors) {
  model.validate();
  data.validate();
  if (!observed.converged) {
    throw ConvergenceError("bootstrap requires a converged observed-sample fit");
  }
  if (B < 1) throw InputError("replicate count must be at least 1");
  if (executors < 0) throw InputError("executor count must be nonnegative");
  if (!(level > 0.0 && level < 1.0)) {
    throw InputError("confidence level must be strictly inside (0, 1)");
  }

  const int p = model.term_count();
  std::vector<std::optional<Eigen::VectorXd>> replicates(static_cast<std::size_t>(B));

  const auto run_replicate = [&](int i) {
    std::mt19937_64 gen(replicate_seed(seed, i));
    const Dataset sample = resample_cases(data, gen);
    const auto try_fit = [&](const Eigen::VectorXd& start) -> std::optional<Eigen::VectorXd> {
      try {
        FitResult fit = gauss_newton(model, sample, start, config);
        if (fit.converged) return fit.theta_hat.values;
      } catch (const Error&) {
      }
      return std::nullopt;
    };
    auto theta = try_fit(observed.theta_hat.values);
    if (!theta) {
      try {
        theta = try_fit(reciprocal_ols_start(model, sample));
      } catch (const Error&) {
      }
    }
    replicates[static_cast<std::size_t>(i)] = std::move(theta);
  };

  int workers = executors == 0
      ? static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))
      : executors;
  workers = std::min(workers, B);
  if (workers <= 1) {
    for (int i = 0; i < B; ++i) run_replicate(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int i = w; i < B; i += workers) run_replicate(i);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  BootstrapResult result;
  result.B = B;
  result.level = level;
  result.observed = observed.theta_hat;

  int successes = 0;
  for (const auto& r : replicates) successes += r.has_value() ? 1 : 0;
  result.failures = B - successes;
  if (result.failures > 0.05 * B) {
    throw ConvergenceError(
        std::to_string(result.failures) + " of " + std::to_string(B) +
        " bootstrap replicates failed to converge (rate " +
        format_double(static_cast<double>(result.failures) / B) + ")");
  }

  result.estimates.resize(successes, p);
  Eigen::Index row = 0;
  for (const auto& r : replicates) {
    if (r) result.estimates.row(row++) = r->transpose();
  }

  result.intervals.reserve(static_cast<std::size_t>(p));
  for (int t = 0; t < p; ++t) {
    std::vector<double> column(result.estimates.col(t).begin(),
                               result.estimates.col(t).end());
    std::sort(column.begin(), column.end());
    result.intervals.push_back(percentile_ci(column, level));
  }
  // Mean of per-replicate differences, not difference of means: replicates
  // equal to the observed estimate then contribute exactly zero.
  result.bias = (result.estimates.rowwise() -
                 observed.theta_hat.values.transpose())
                    .colwise()
                    .mean()
                    .transpose();
  return result;
}

}  // namespace rsm
