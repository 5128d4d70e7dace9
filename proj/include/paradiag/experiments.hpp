#pragma once

#include <optional>
#include <string>
#include <vector>

namespace paradiag {

/* Flat configuration for the benchmark harness. Optional fields fall back to
 * per-experiment defaults (the smallest sizes from the reference runs).
 * Key "T" is the time horizon; tau = T / ell.
 */
struct RunConfig {
  std::string experiment;
  std::string out = ".";
  std::optional<int> n;
  std::optional<double> nu;
  std::optional<int> ell;
  double horizon = 1.0;
  int s = 1;
  std::optional<double> alpha;  // defaults: 1e-4 for advection-diffusion runs, 1 otherwise
  double eps = 1e-8;
  int q = 1;
  std::optional<int> maxit;  // default 100 (1 for the alpha sweep's fixed protocol)
  bool skip_correction = false;
  long seed = 1234;
  std::optional<int> workers;
};

// Parses a flat JSON object; unknown keys or wrong types throw
// std::invalid_argument (CLI exit code 2).
RunConfig parse_config_json(const std::string& text);

// Range validation shared by JSON and flag inputs; throws std::invalid_argument.
void validate_config(const RunConfig& cfg);

std::vector<std::string> experiment_names();

struct ExperimentResult {
  int exit_code = 0;  // 0 ok, 3 solver non-convergence / failed oracle check
  std::string csv_path;
  std::string summary;  // human-readable; also written next to the CSV
};

// Runs one named experiment, writing <experiment>.csv and
// <experiment>_summary.txt into cfg.out. Throws std::invalid_argument for
// validation problems (exit 2 at the CLI).
ExperimentResult run_experiment(const RunConfig& cfg);

}  // namespace paradiag
