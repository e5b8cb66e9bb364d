#include "rsm/format.hpp"

#include <charconv>
#include <system_error>

namespace rsm {

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace rsm
