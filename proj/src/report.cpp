#include "rsm/report.hpp"

#include <filesystem>
#include <fstream>

#include "rsm/errors.hpp"
#include "rsm/format.hpp"

namespace rsm {

namespace {

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out.push_back(vector_json(m.row(i).transpose()));
  }
  return out;
}

}  // namespace

json to_json(const Design& design) {
  json out;
  out["k"] = design.k;
  out["runs"] = design.run_count();
  out["rows"] = matrix_json(design.rows);
  json kinds = json::array();
  for (PointKind kind : design.kinds) kinds.push_back(std::string(to_string(kind)));
  out["kinds"] = kinds;
  return out;
}

json to_json(const PropertyReport& report) {
  json out;
  out["property"] = std::string(to_string(report.property));
  out["holds"] = report.holds;
  json evidence;
  for (const auto& [name, value] : report.evidence) evidence[name] = value;
  out["evidence"] = evidence;
  if (!report.note.empty()) out["note"] = report.note;
  return out;
}

json to_json(const ParamVector& params) {
  json out;
  for (std::size_t i = 0; i < params.labels.size(); ++i) {
    out[params.labels[i]] = params.values[static_cast<Eigen::Index>(i)];
  }
  return out;
}

json to_json(const Interval& interval) {
  return json{{"lower", interval.lower}, {"upper", interval.upper}};
}

json to_json(const FitResult& fit) {
  json out;
  out["theta"] = to_json(fit.theta_hat);
  out["sse"] = fit.sse;
  out["iterations"] = fit.iterations;
  out["converged"] = fit.converged;
  out["achieved_tolerance"] = fit.achieved_tolerance;
  out["sse_trace"] = json::array();
  for (double s : fit.sse_trace) out["sse_trace"].push_back(s);
  out["covariance"] = matrix_json(fit.covariance);
  return out;
}

json to_json(const BootstrapResult& result) {
  json out;
  out["B"] = result.B;
  out["level"] = result.level;
  out["failures"] = result.failures;
  out["replicates_used"] = static_cast<int>(result.estimates.rows());
  out["observed"] = to_json(result.observed);
  json intervals;
  for (std::size_t i = 0; i < result.observed.labels.size(); ++i) {
    intervals[result.observed.labels[i]] = to_json(result.intervals[i]);
  }
  out["percentile_intervals"] = intervals;
  json bias;
  for (std::size_t i = 0; i < result.observed.labels.size(); ++i) {
    bias[result.observed.labels[i]] = result.bias[static_cast<Eigen::Index>(i)];
  }
  out["bias"] = bias;
  out["estimates"] = matrix_json(result.estimates);
  return out;
}

json to_json(const NormalityReport& report) {
  return json{{"W", report.W}, {"p_value", report.p_value}, {"n", report.n}};
}

json to_json(const AdequacyReport& report) {
  json out;
  out["sse"] = report.sse;
  out["residuals"] = vector_json(report.residuals);
  out["standardized_residuals"] = vector_json(report.standardized);
  out["degenerate"] = report.degenerate;
  out["shapiro_wilk"] = report.normality ? to_json(*report.normality) : json(nullptr);
  out["normal_errors_rejected"] = report.normal_errors_rejected;
  out["alpha"] = report.alpha;
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot write " + path);
  file << text;
  if (!file) throw InputError("cannot write " + path);
}

std::string grid_csv(const GridValues& grid, const std::string& value_name) {
  std::string out;
  const auto k = static_cast<int>(grid.points.cols());
  for (int j = 0; j < k; ++j) {
    out += "x" + std::to_string(j + 1) + ",";
  }
  out += value_name + "\n";
  for (Eigen::Index i = 0; i < grid.points.rows(); ++i) {
    for (int j = 0; j < k; ++j) {
      out += format_double(grid.points(i, j)) + ",";
    }
    out += format_double(grid.values[i]) + "\n";
  }
  return out;
}

}  // namespace rsm
