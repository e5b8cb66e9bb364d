#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rsm::app {

/// Process exit codes shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_input_error = 1;
inline constexpr int exit_numeric_error = 2;
inline constexpr int exit_no_convergence = 3;

struct ModelOptions {
  std::string model = "ipm1";       // ipm1 | ipm2 | custom
  std::vector<std::string> terms;   // labels, custom only
};

struct SolverOptions {
  double delta = 1e-6;
  int max_iterations = 50;
};

struct DesignOptions {
  int k = 2;
  int n0 = 1;
  std::string alpha = "rotatable";  // or a number
  std::string order = "second";     // first | second
  std::vector<double> radii;        // extra rotatability probe radii
  std::string out;
};

struct FitOptions {
  std::string input;
  ModelOptions model;
  SolverOptions solver;
  double level = 0.95;
  std::string out;
};

struct BootstrapOptions {
  std::string input;
  ModelOptions model;
  SolverOptions solver;
  int B = 1000;
  double level = 0.95;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out;
};

struct DiagnoseOptions {
  std::string input;
  ModelOptions model;
  SolverOptions solver;
  double alpha = 0.05;
  std::string out;
};

struct PredictOptions {
  std::string input;
  ModelOptions model;
  SolverOptions solver;
  std::vector<double> at;           // evaluation point, one value per factor
  std::vector<double> theta;        // bypasses the fit when given
  std::string out;
};

struct SurfaceOptions {
  std::string kind = "response";    // response | variance
  std::string grid;                 // "min:max:step,min:max:step"
  // response surfaces: a fitted model (from input) or explicit theta
  std::string input;
  ModelOptions model;
  SolverOptions solver;
  std::vector<double> theta;
  // variance surfaces: the design whose prediction variance is mapped
  int k = 2;
  int n0 = 1;
  std::string alpha = "rotatable";
  std::string order = "second";
  std::string out;
};

int run_design(const DesignOptions& opts, std::ostream& log);
int run_fit(const FitOptions& opts, std::ostream& log);
int run_bootstrap(const BootstrapOptions& opts, std::ostream& log);
int run_diagnose(const DiagnoseOptions& opts, std::ostream& log);
int run_predict(const PredictOptions& opts, std::ostream& log);
int run_surface(const SurfaceOptions& opts, std::ostream& log);

}  // namespace rsm::app
