#pragma once

namespace rsm {

/// Standard normal distribution function.
double normal_cdf(double z);

/// Standard normal quantile; p must lie strictly inside (0, 1).
double normal_quantile(double p);

}  // namespace rsm
