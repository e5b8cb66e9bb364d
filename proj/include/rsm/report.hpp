#pragma once

#include <json.hpp>
#include <string>

#include "rsm/bootstrap.hpp"
#include "rsm/design.hpp"
#include "rsm/diagnostics.hpp"
#include "rsm/linear.hpp"
#include "rsm/solver.hpp"

namespace rsm {

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

json to_json(const Design& design);
json to_json(const PropertyReport& report);
json to_json(const ParamVector& params);
json to_json(const Interval& interval);
json to_json(const FitResult& fit);
json to_json(const BootstrapResult& result);
json to_json(const NormalityReport& report);
json to_json(const AdequacyReport& report);

void write_text_file(const std::string& path, const std::string& text);

/// Grid CSV with header x1,..,xk,value; one node per row in grid order.
std::string grid_csv(const GridValues& grid, const std::string& value_name);

}  // namespace rsm
