#include "rsm/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rsm/errors.hpp"

namespace rsm {

namespace {

std::string trim(std::string_view s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      cells.push_back(trim(std::string_view(line).substr(start)));
      break;
    }
    cells.push_back(trim(std::string_view(line).substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_number(const std::string& cell, const std::string& column, int row) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || cell.empty()) {
    throw InputError("malformed number '" + cell + "' in column " + column +
                     " (row " + std::to_string(row) + ")");
  }
  return value;
}

}  // namespace

Dataset parse_csv(const std::string& text, const std::string& name) {
  std::string body = text;
  if (body.starts_with("\xEF\xBB\xBF")) body.erase(0, 3);

  std::vector<std::string> lines;
  std::istringstream stream(body);
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw InputError("no header row in " + name);

  // Header: columns x1..xk and y, any order, any case.
  const std::vector<std::string> header = split(lines.front(), ',');
  int y_col = -1;
  std::vector<int> x_cols;  // factor index -> column position
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string h = lower(header[c]);
    if (h == "y") {
      if (y_col >= 0) throw InputError("duplicate column y in " + name);
      y_col = static_cast<int>(c);
      continue;
    }
    if (h.size() >= 2 && h[0] == 'x' &&
        std::all_of(h.begin() + 1, h.end(),
                    [](unsigned char ch) { return std::isdigit(ch) != 0; })) {
      const int idx = std::stoi(h.substr(1));
      if (idx < 1) throw InputError("unknown column '" + header[c] + "' in " + name);
      if (static_cast<std::size_t>(idx) > header.size()) {
        throw InputError("factor column " + h + " exceeds the column count in " + name);
      }
      if (x_cols.size() < static_cast<std::size_t>(idx)) x_cols.resize(static_cast<std::size_t>(idx), -1);
      if (x_cols[static_cast<std::size_t>(idx - 1)] >= 0) {
        throw InputError("duplicate column " + h + " in " + name);
      }
      x_cols[static_cast<std::size_t>(idx - 1)] = static_cast<int>(c);
      continue;
    }
    throw InputError("unknown column '" + header[c] + "' in " + name);
  }
  if (y_col < 0) throw InputError("missing column y in " + name);
  if (x_cols.empty()) throw InputError("no factor columns x1..xk in " + name);
  for (std::size_t j = 0; j < x_cols.size(); ++j) {
    if (x_cols[j] < 0) {
      throw InputError("missing column x" + std::to_string(j + 1) + " in " + name);
    }
  }

  const int k = static_cast<int>(x_cols.size());
  const auto n = static_cast<Eigen::Index>(lines.size() - 1);
  if (n == 0) throw InputError("no data rows in " + name);

  Dataset data;
  data.x.resize(n, k);
  data.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int row = static_cast<int>(i) + 1;
    const std::vector<std::string> cells = split(lines[static_cast<std::size_t>(i + 1)], ',');
    if (cells.size() != header.size()) {
      throw InputError("row " + std::to_string(row) + " has " +
                       std::to_string(cells.size()) + " cells but the header has " +
                       std::to_string(header.size()) + " in " + name);
    }
    for (int j = 0; j < k; ++j) {
      data.x(i, j) = parse_number(cells[static_cast<std::size_t>(x_cols[static_cast<std::size_t>(j)])],
                                  "x" + std::to_string(j + 1), row);
    }
    data.y[i] = parse_number(cells[static_cast<std::size_t>(y_col)], "y", row);
  }
  data.validate();
  return data;
}

Dataset ingest_csv(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot open " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_csv(buffer.str(), path);
}

}  // namespace rsm
