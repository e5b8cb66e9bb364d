#include "rsm/dataset.hpp"

#include <cmath>
#include <string>

#include "rsm/errors.hpp"

namespace rsm {

void Dataset::validate() const {
  if (x.rows() != y.size()) {
    throw InputError("dataset has " + std::to_string(x.rows()) +
                     " factor rows but " + std::to_string(y.size()) +
                     " responses");
  }
  if (rows() == 0) throw InputError("dataset is empty");
  if (factors() == 0) throw InputError("dataset has no factor columns");
  for (int i = 0; i < rows(); ++i) {
    for (int j = 0; j < factors(); ++j) {
      const double v = x(i, j);
      if (!std::isfinite(v)) {
        throw InputError("x" + std::to_string(j + 1) + " is not finite (row " +
                         std::to_string(i + 1) + ")");
      }
      if (v <= 0.0) {
        throw InputError("x" + std::to_string(j + 1) + " must be positive (row " +
                         std::to_string(i + 1) + ")");
      }
    }
    if (!std::isfinite(y[i])) {
      throw InputError("y is not finite (row " + std::to_string(i + 1) + ")");
    }
    if (y[i] <= 0.0) {
      throw InputError("y must be positive (row " + std::to_string(i + 1) + ")");
    }
  }
}

}  // namespace rsm
