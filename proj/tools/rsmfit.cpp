#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "rsm/app.hpp"

namespace {

void add_model_options(CLI::App* cmd, rsm::app::ModelOptions& opts) {
  cmd->add_option("--model", opts.model, "Model family: ipm1, ipm2, or custom")
      ->default_val("ipm1");
  cmd->add_option("--terms", opts.terms,
                  "Term labels for --model custom (e.g. 11 01 10 00)");
}

void add_solver_options(CLI::App* cmd, rsm::app::SolverOptions& opts) {
  cmd->add_option("--delta", opts.delta, "Relative convergence tolerance")
      ->default_val(1e-6);
  cmd->add_option("--max-iterations", opts.max_iterations,
                  "Cap on accepted Gauss-Newton steps")
      ->default_val(50);
}

std::vector<double> parse_csv_doubles(const std::string& text, const std::string& what) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(',', start);
    const std::string cell = text.substr(
        start, pos == std::string::npos ? std::string::npos : pos - start);
    try {
      std::size_t used = 0;
      const double v = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::runtime_error(what + ": '" + cell + "' is not a number");
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Response surface designs, inverse polynomial fits, bootstrap "
               "uncertainty, and residual diagnostics"};
  cli.require_subcommand(1);

  rsm::app::DesignOptions design_opts;
  std::string design_radii;
  CLI::App* design = cli.add_subcommand("design",
      "Construct a central composite design and check its properties");
  design->add_option("--k", design_opts.k, "Factor count")->default_val(2);
  design->add_option("--n0", design_opts.n0, "Center point count")->default_val(1);
  design->add_option("--alpha", design_opts.alpha,
                     "Axial distance: 'rotatable' or a positive number")
      ->default_val("rotatable");
  design->add_option("--order", design_opts.order, "Model order: first or second")
      ->default_val("second");
  design->add_option("--radii", design_radii,
                     "Extra probe radii, comma separated (e.g. 0.75,1.25)");
  design->add_option("--out", design_opts.out, "Output directory")->default_val(".");

  rsm::app::FitOptions fit_opts;
  CLI::App* fit = cli.add_subcommand("fit",
      "Fit an inverse polynomial model to CSV data by Gauss-Newton");
  fit->add_option("--input", fit_opts.input, "CSV file with columns x1..xk,y")
      ->required();
  add_model_options(fit, fit_opts.model);
  add_solver_options(fit, fit_opts.solver);
  fit->add_option("--level", fit_opts.level, "Confidence level")->default_val(0.95);
  fit->add_option("--out", fit_opts.out, "Output directory")->default_val(".");

  rsm::app::BootstrapOptions boot_opts;
  std::uint64_t boot_seed = 0;
  CLI::App* bootstrap = cli.add_subcommand("bootstrap",
      "Case-resampling bootstrap intervals for a fitted model");
  bootstrap->add_option("--input", boot_opts.input, "CSV file with columns x1..xk,y")
      ->required();
  add_model_options(bootstrap, boot_opts.model);
  add_solver_options(bootstrap, boot_opts.solver);
  bootstrap->add_option("--B", boot_opts.B, "Replicate count")->default_val(1000);
  bootstrap->add_option("--level", boot_opts.level, "Confidence level")
      ->default_val(0.95);
  CLI::Option* seed_opt = bootstrap->add_option(
      "--seed", boot_seed, "64-bit seed; omit to draw one (printed)");
  bootstrap->add_option("--threads", boot_opts.threads,
                        "Concurrent replicate executors; 0 = hardware count")
      ->default_val(0);
  bootstrap->add_option("--out", boot_opts.out, "Output directory")->default_val(".");

  rsm::app::DiagnoseOptions diag_opts;
  CLI::App* diagnose = cli.add_subcommand("diagnose",
      "Residual and normality diagnostics for a fitted model");
  diagnose->add_option("--input", diag_opts.input, "CSV file with columns x1..xk,y")
      ->required();
  add_model_options(diagnose, diag_opts.model);
  add_solver_options(diagnose, diag_opts.solver);
  diagnose->add_option("--alpha", diag_opts.alpha, "Normality rejection level")
      ->default_val(0.05);
  diagnose->add_option("--out", diag_opts.out, "Output directory")->default_val(".");

  rsm::app::PredictOptions pred_opts;
  std::string pred_at, pred_theta;
  CLI::App* predict = cli.add_subcommand("predict",
      "Evaluate the fitted (or supplied) model at a point");
  predict->add_option("--at", pred_at, "Evaluation point, comma separated")
      ->required();
  predict->add_option("--theta", pred_theta,
                      "Model coefficients, comma separated (bypasses fitting)");
  predict->add_option("--input", pred_opts.input, "CSV file to fit when --theta is absent");
  add_model_options(predict, pred_opts.model);
  add_solver_options(predict, pred_opts.solver);
  predict->add_option("--out", pred_opts.out, "Output directory")->default_val(".");

  rsm::app::SurfaceOptions surf_opts;
  std::string surf_theta;
  CLI::App* surface = cli.add_subcommand("surface",
      "Tabulate a response or prediction-variance surface on a grid");
  surface->add_option("--kind", surf_opts.kind, "Surface kind: response or variance")
      ->default_val("response");
  surface->add_option("--grid", surf_opts.grid,
                      "Per-axis min:max:step, comma separated")
      ->required();
  surface->add_option("--theta", surf_theta,
                      "Model coefficients for response surfaces, comma separated");
  surface->add_option("--input", surf_opts.input, "CSV file to fit when --theta is absent");
  add_model_options(surface, surf_opts.model);
  add_solver_options(surface, surf_opts.solver);
  surface->add_option("--k", surf_opts.k, "Design factor count (variance surfaces)")
      ->default_val(2);
  surface->add_option("--n0", surf_opts.n0, "Design center count (variance surfaces)")
      ->default_val(1);
  surface->add_option("--alpha", surf_opts.alpha,
                      "Design axial distance (variance surfaces)")
      ->default_val("rotatable");
  surface->add_option("--order", surf_opts.order,
                      "Polynomial order for variance surfaces")
      ->default_val("second");
  surface->add_option("--out", surf_opts.out, "Output directory")->default_val(".");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? rsm::app::exit_ok : rsm::app::exit_input_error;
  }
  try {
    if (seed_opt->count() > 0) boot_opts.seed = boot_seed;
    design_opts.radii = parse_csv_doubles(design_radii, "--radii");
    pred_opts.at = parse_csv_doubles(pred_at, "--at");
    pred_opts.theta = parse_csv_doubles(pred_theta, "--theta");
    surf_opts.theta = parse_csv_doubles(surf_theta, "--theta");
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return rsm::app::exit_input_error;
  }

  if (design->parsed()) return rsm::app::run_design(design_opts, std::cout);
  if (fit->parsed()) return rsm::app::run_fit(fit_opts, std::cout);
  if (bootstrap->parsed()) return rsm::app::run_bootstrap(boot_opts, std::cout);
  if (diagnose->parsed()) return rsm::app::run_diagnose(diag_opts, std::cout);
  if (predict->parsed()) return rsm::app::run_predict(pred_opts, std::cout);
  if (surface->parsed()) return rsm::app::run_surface(surf_opts, std::cout);
  return rsm::app::exit_input_error;
}
