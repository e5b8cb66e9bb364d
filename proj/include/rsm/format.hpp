#pragma once

#include <string>

namespace rsm {

/// Shortest decimal form of x that round-trips to the same double.
std::string format_double(double x);

}  // namespace rsm
