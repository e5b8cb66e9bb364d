#include "rsm/app.hpp"

#include <charconv>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "rsm/bootstrap.hpp"
#include "rsm/csv.hpp"
#include "rsm/design.hpp"
#include "rsm/diagnostics.hpp"
#include "rsm/errors.hpp"
#include "rsm/format.hpp"
#include "rsm/linear.hpp"
#include "rsm/model.hpp"
#include "rsm/report.hpp"
#include "rsm/solver.hpp"

namespace rsm::app {

namespace {

double parse_double(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw InputError(what + ": '" + text + "' is not a number");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

ModelOrder parse_order(const std::string& text) {
  if (text == "first") return ModelOrder::first;
  if (text == "second") return ModelOrder::second;
  throw InputError("--order must be 'first' or 'second'");
}

double resolve_alpha(const std::string& text, int k) {
  if (text == "rotatable") return rotatable_alpha(k);
  const double alpha = parse_double(text, "--alpha");
  if (!(alpha > 0.0)) throw InputError("--alpha must be positive");
  return alpha;
}

ModelSpec make_model(const ModelOptions& opts, int k) {
  if (opts.model == "ipm1") return ipm_first_order(k);
  if (opts.model == "ipm2") return ipm_second_order(k);
  if (opts.model == "custom") {
    if (opts.terms.empty()) {
      throw InputError("--model custom requires --terms");
    }
    return ipm_terms(k, opts.terms);
  }
  throw InputError("--model must be 'ipm1', 'ipm2', or 'custom'");
}

json model_json(const ModelOptions& opts, const ModelSpec& model) {
  json out;
  out["name"] = opts.model;
  out["k"] = model.k;
  json terms;
  for (const Term& t : model.terms) {
    json e = json::array();
    for (int x : t.exponents) e.push_back(x);
    terms[t.label] = e;
  }
  out["terms"] = terms;
  return out;
}

json solver_json(const SolverOptions& opts) {
  return json{{"delta", opts.delta}, {"max_iterations", opts.max_iterations}};
}

json intervals_json(const std::vector<std::string>& labels,
                    const std::vector<Interval>& intervals) {
  json out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[labels[i]] = to_json(intervals[i]);
  }
  return out;
}

SolverConfig solver_config(const SolverOptions& opts) {
  SolverConfig config;
  config.delta = opts.delta;
  config.max_iterations = opts.max_iterations;
  return config;
}

void emit(const std::string& out_dir, const std::string& filename,
          const json& report, std::ostream& log) {
  const std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
  write_text_file((dir / filename).string(), report.dump(2) + "\n");
  log << report.dump(2) << "\n";
}

void write_grid_file(const std::string& out_dir, const std::string& filename,
                     const GridValues& grid) {
  const std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
  write_text_file((dir / filename).string(), grid_csv(grid, "value"));
}

template <typename Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const InputError& e) {
    log << "error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const ConvergenceError& e) {
    log << "error: " << e.what() << "\n";
    return exit_no_convergence;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return exit_numeric_error;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_numeric_error;
  }
}

struct FittedPipeline {
  Dataset data;
  ModelSpec model;
  Eigen::VectorXd start;
  FitResult fit;
};

FittedPipeline fit_pipeline(const std::string& input, const ModelOptions& model_opts,
                            const SolverOptions& solver_opts) {
  if (input.empty()) throw InputError("--input is required");
  FittedPipeline p;
  p.data = ingest_csv(input);
  p.model = make_model(model_opts, p.data.factors());
  p.start = reciprocal_ols_start(p.model, p.data);
  p.fit = gauss_newton(p.model, p.data, p.start, solver_config(solver_opts));
  return p;
}

GridSpec parse_grid(const std::string& text) {
  if (text.empty()) throw InputError("--grid is required");
  GridSpec grid;
  for (const std::string& part : split(text, ',')) {
    const std::vector<std::string> bounds = split(part, ':');
    if (bounds.size() != 3) {
      throw InputError("--grid axes must look like min:max:step, got '" + part + "'");
    }
    GridSpec::Axis axis;
    axis.min = parse_double(bounds[0], "--grid min");
    axis.max = parse_double(bounds[1], "--grid max");
    axis.step = parse_double(bounds[2], "--grid step");
    grid.axes.push_back(axis);
  }
  return grid;
}

json grid_config_json(const GridSpec& grid) {
  json axes = json::array();
  for (const auto& axis : grid.axes) {
    axes.push_back(json{{"min", axis.min}, {"max", axis.max}, {"step", axis.step}});
  }
  return axes;
}

}  // namespace

int run_design(const DesignOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    if (opts.k < 1) throw InputError("--k must be at least 1");
    if (opts.n0 < 0) throw InputError("--n0 must be nonnegative");
    const double alpha = resolve_alpha(opts.alpha, opts.k);
    const ModelOrder order = parse_order(opts.order);

    const Design design = ccd(opts.k, opts.n0, alpha);
    const DesignMoments moments = design_moments(design);
    std::vector<double> radii = {0.5, 1.0, alpha};
    radii.insert(radii.end(), opts.radii.begin(), opts.radii.end());

    json report;
    report["command"] = "design";
    json config;
    config["k"] = opts.k;
    config["n0"] = opts.n0;
    config["alpha_mode"] = opts.alpha == "rotatable" ? "rotatable" : "explicit";
    config["alpha"] = alpha;
    config["order"] = opts.order;
    config["radii"] = radii;
    report["config"] = config;
    report["design"] = to_json(design);
    report["moments"] = json{{"N", moments.N}, {"b", moments.b},
                             {"c", moments.c}, {"d", moments.d}};
    json properties;
    properties["orthogonal"] = to_json(check_orthogonality(design, order));
    properties["rotatable"] = to_json(check_rotatability(design, order, radii));
    properties["uniform_precision"] = to_json(check_uniform_precision(design));
    report["properties"] = properties;
    emit(opts.out, "design_report.json", report, log);
    return exit_ok;
  });
}

int run_fit(const FitOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    const FittedPipeline p = fit_pipeline(opts.input, opts.model, opts.solver);

    json report;
    report["command"] = "fit";
    json config;
    config["input"] = opts.input;
    config["model"] = model_json(opts.model, p.model);
    config["solver"] = solver_json(opts.solver);
    config["level"] = opts.level;
    report["config"] = config;
    report["start"] = to_json(make_params(p.model, p.start));
    report["fit"] = to_json(p.fit);
    if (p.fit.converged) {
      report["linearization_intervals"] =
          intervals_json(p.model.labels(), asymptotic_ci(p.fit, opts.level));
      report["adequacy"] = p.data.rows() > p.model.term_count()
          ? to_json(adequacy_report(p.model, p.data, p.fit))
          : json(nullptr);
    }
    emit(opts.out, "fit_report.json", report, log);
    return p.fit.converged ? exit_ok : exit_no_convergence;
  });
}

int run_bootstrap(const BootstrapOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    if (opts.B < 1) throw InputError("--B must be at least 1");
    if (opts.threads < 0) throw InputError("--threads must be nonnegative");
    const FittedPipeline p = fit_pipeline(opts.input, opts.model, opts.solver);
    if (!p.fit.converged) {
      throw ConvergenceError("observed-sample fit did not converge after " +
                             std::to_string(p.fit.iterations) + " iterations");
    }
    std::uint64_t seed;
    if (opts.seed) {
      seed = *opts.seed;
    } else {
      std::random_device rd;
      seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      log << "seed: " << seed << "\n";
    }
    const BootstrapResult boot =
        bootstrap_fit(p.model, p.data, p.fit, opts.B, seed,
                      solver_config(opts.solver), opts.level, opts.threads);

    json report;
    report["command"] = "bootstrap";
    json config;
    config["input"] = opts.input;
    config["model"] = model_json(opts.model, p.model);
    config["solver"] = solver_json(opts.solver);
    config["B"] = opts.B;
    config["level"] = opts.level;
    config["seed"] = seed;
    // executor count deliberately not echoed: results are identical for
    // every executor count, so it is not part of the run's identity
    report["config"] = config;
    report["observed_fit"] = to_json(p.fit);
    report["bootstrap"] = to_json(boot);
    emit(opts.out, "bootstrap_report.json", report, log);
    return exit_ok;
  });
}

int run_diagnose(const DiagnoseOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    const FittedPipeline p = fit_pipeline(opts.input, opts.model, opts.solver);
    if (!p.fit.converged) {
      throw ConvergenceError("fit did not converge after " +
                             std::to_string(p.fit.iterations) + " iterations");
    }
    const AdequacyReport adequacy =
        adequacy_report(p.model, p.data, p.fit, opts.alpha);

    json report;
    report["command"] = "diagnose";
    json config;
    config["input"] = opts.input;
    config["model"] = model_json(opts.model, p.model);
    config["solver"] = solver_json(opts.solver);
    config["alpha"] = opts.alpha;
    report["config"] = config;
    report["fit"] = to_json(p.fit);
    report["adequacy"] = to_json(adequacy);
    emit(opts.out, "diagnose_report.json", report, log);
    return exit_ok;
  });
}

int run_predict(const PredictOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    if (opts.at.empty()) throw InputError("--at is required");
    const int k = static_cast<int>(opts.at.size());

    json report;
    report["command"] = "predict";
    json config;
    config["at"] = opts.at;

    ModelSpec model;
    Eigen::VectorXd theta;
    if (!opts.theta.empty()) {
      model = make_model(opts.model, k);
      if (static_cast<int>(opts.theta.size()) != model.term_count()) {
        throw InputError("--theta has " + std::to_string(opts.theta.size()) +
                         " entries but the model has " +
                         std::to_string(model.term_count()) + " terms");
      }
      theta = Eigen::Map<const Eigen::VectorXd>(opts.theta.data(),
                                                static_cast<Eigen::Index>(opts.theta.size()));
      config["model"] = model_json(opts.model, model);
      config["theta"] = opts.theta;
    } else {
      const FittedPipeline p = fit_pipeline(opts.input, opts.model, opts.solver);
      if (!p.fit.converged) {
        throw ConvergenceError("fit did not converge after " +
                               std::to_string(p.fit.iterations) + " iterations");
      }
      if (p.model.k != k) {
        throw InputError("--at has " + std::to_string(k) +
                         " coordinates but the fitted model has " +
                         std::to_string(p.model.k) + " factors");
      }
      model = p.model;
      theta = p.fit.theta_hat.values;
      config["input"] = opts.input;
      config["model"] = model_json(opts.model, model);
      config["solver"] = solver_json(opts.solver);
    }
    report["config"] = config;

    Eigen::MatrixXd point(1, k);
    for (int j = 0; j < k; ++j) point(0, j) = opts.at[static_cast<std::size_t>(j)];
    const Eigen::MatrixXd F = model_matrix(point, model);
    const double eta = eval_linear_predictor(F, theta)[0];
    const double y = eval_response(F, theta)[0];
    report["prediction"] = json{{"at", opts.at}, {"eta", eta}, {"y", y}};
    emit(opts.out, "predict_report.json", report, log);
    return exit_ok;
  });
}

int run_surface(const SurfaceOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    const GridSpec grid = parse_grid(opts.grid);

    json report;
    report["command"] = "surface";
    json config;
    config["kind"] = opts.kind;
    config["grid"] = grid_config_json(grid);

    GridValues values;
    std::string grid_file;
    if (opts.kind == "variance") {
      if (opts.k < 1) throw InputError("--k must be at least 1");
      if (opts.n0 < 0) throw InputError("--n0 must be nonnegative");
      const double alpha = resolve_alpha(opts.alpha, opts.k);
      const ModelOrder order = parse_order(opts.order);
      const Design design = ccd(opts.k, opts.n0, alpha);
      values = variance_surface_grid(design, order, grid);
      grid_file = "surface_variance.csv";
      config["k"] = opts.k;
      config["n0"] = opts.n0;
      config["alpha_mode"] = opts.alpha == "rotatable" ? "rotatable" : "explicit";
      config["alpha"] = alpha;
      config["order"] = opts.order;
    } else if (opts.kind == "response") {
      const int k = grid.dimensions();
      ModelSpec model;
      Eigen::VectorXd theta;
      if (!opts.theta.empty()) {
        model = make_model(opts.model, k);
        if (static_cast<int>(opts.theta.size()) != model.term_count()) {
          throw InputError("--theta has " + std::to_string(opts.theta.size()) +
                           " entries but the model has " +
                           std::to_string(model.term_count()) + " terms");
        }
        theta = Eigen::Map<const Eigen::VectorXd>(opts.theta.data(),
                                                  static_cast<Eigen::Index>(opts.theta.size()));
        config["model"] = model_json(opts.model, model);
        config["theta"] = opts.theta;
      } else {
        const FittedPipeline p = fit_pipeline(opts.input, opts.model, opts.solver);
        if (!p.fit.converged) {
          throw ConvergenceError("fit did not converge after " +
                                 std::to_string(p.fit.iterations) + " iterations");
        }
        if (p.model.k != k) {
          throw InputError("--grid has " + std::to_string(k) +
                           " axes but the fitted model has " +
                           std::to_string(p.model.k) + " factors");
        }
        model = p.model;
        theta = p.fit.theta_hat.values;
        config["input"] = opts.input;
        config["model"] = model_json(opts.model, model);
        config["solver"] = solver_json(opts.solver);
      }
      values.points = grid.nodes();
      values.values = eval_response(model_matrix(values.points, model), theta);
      grid_file = "surface_response.csv";
    } else {
      throw InputError("--kind must be 'response' or 'variance'");
    }

    write_grid_file(opts.out, grid_file, values);
    report["config"] = config;
    report["grid_file"] = grid_file;
    report["nodes"] = static_cast<int>(values.points.rows());
    report["value_min"] = values.values.minCoeff();
    report["value_max"] = values.values.maxCoeff();
    emit(opts.out, "surface_report.json", report, log);
    return exit_ok;
  });
}

}  // namespace rsm::app
