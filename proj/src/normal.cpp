#include "rsm/normal.hpp"

#include <boost/math/distributions/normal.hpp>

#include "rsm/errors.hpp"

namespace rsm {

namespace {
const boost::math::normal_distribution<double> std_normal{0.0, 1.0};
}

double normal_cdf(double z) { return boost::math::cdf(std_normal, z); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InputError("normal quantile requires a probability strictly inside (0, 1)");
  }
  return boost::math::quantile(std_normal, p);
}

}  // namespace rsm
