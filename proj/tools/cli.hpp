#pragma once

// Command-line front end: parses flags into a RunConfig, runs the pipeline
// and produces a JSON or CSV report.

#include <optional>
#include <string>
#include <vector>

namespace qnm::cli {

struct RunConfig {
  std::string command;  // solve, gram, sumrule, evolve, perturb
  std::string model_path;
  std::string output_path;  // empty writes to stdout
  std::string format = "json";
  double tol = 1e-12;

  // solve / gram
  double re_min = 0.0;
  double re_max = 20.0;
  double im_min = -3.0;
  double im_max = 0.5;
  /// solve: cap on the count (all by default); gram: modes (10); evolve:
  /// conjugate pairs (30)
  std::optional<int> n_modes;
  std::string modes_path;

  // sumrule
  double x = 0.5;
  double y = 0.5;
  std::optional<double> testwidth;  // default 0.1 a
  /// sweep over min_modes..max_modes conjugate pairs
  int min_modes = 2;
  int max_modes = 50;

  // evolve
  std::optional<double> t_end;  // default 6 a
  std::optional<double> dx;     // default a / 2000
  std::optional<double> center;  // default 0.5 a
  std::optional<double> width;   // default 0.1 a
  std::optional<double> probe;   // default 0.7 a
  int samples = 61;

  // perturb
  int mode_index = 0;
  std::string perturbation_path;
  std::optional<double> v_left;
  std::optional<double> v_right;
  double v_value = 1.0;
  std::vector<double> mu;
  int truncation = 60;
};

struct RunResult {
  int exit_code = 0;
  std::string report;
};

/// Executes the command; failures are reported, never thrown.
RunResult run(const RunConfig& config);

/// Parses argv, runs and writes the report. Returns the exit status.
int main(int argc, char** argv);

}  // namespace qnm::cli
