#pragma once

#include <string>

#include "rsm/dataset.hpp"

namespace rsm {

/// Reads a dataset from a CSV file with header columns x1..xk and y, in
/// any order and case. Unknown or missing columns, a factor index gap,
/// non-numeric cells, and non-positive responses are errors naming the
/// offending column or row.
Dataset ingest_csv(const std::string& path);

/// Same grammar applied to an in-memory document; name appears in errors.
Dataset parse_csv(const std::string& text, const std::string& name);

}  // namespace rsm
