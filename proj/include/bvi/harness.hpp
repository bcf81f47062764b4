#pragma once

// Experiment configuration and the run / compare / validate entry points.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bvi/algorithms.hpp"

namespace bvi {

struct ExperimentConfig {
  std::string problem_id;
  std::string algorithm = "alg2";
  /// Used by compare.
  std::vector<std::string> algorithms;
  /// Defaults to the Euclidean projection of the bounding box's upper corner.
  std::optional<Vector> x0;
  StopRule stop;
  std::uint64_t seed = 0;
  /// Trace destination; empty means stdout.
  std::string output_path;

  std::optional<StepRule> lambda;
  std::optional<std::vector<AlphaRule>> alpha;
  std::optional<double> r;
  /// lambda_n = 1/n regardless of the step cap.
  bool strict_paper = false;

  /// Korpelevich and Tseng step; defaults to alpha/2.
  std::optional<double> baseline_lambda;
  ThongParams thong;
};

/// Parses a JSON config document. Unknown keys are rejected with ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// The schedule an algorithm would run with under this config.
ScheduleSet resolve_schedule(const ExperimentConfig& cfg, const ProblemSpec& p, const std::string& algorithm);

Vector resolve_x0(const ExperimentConfig& cfg, const ProblemSpec& p);

/// Runs one algorithm on the configured problem. Precondition failures throw.
IterateTrace run_experiment(const ExperimentConfig& cfg, const std::string& algorithm);

/// Exit codes: 0 converged, 2 max_iter, 1 error.
int exit_code(RunStatus s);

/// Runs cfg.algorithm and writes the trace. Returns the exit code.
int cli_run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// Runs cfg.algorithms and writes one CSV with n and <alg>_step_norm,
/// <alg>_phi_to_solution per algorithm, aligned by n.
int cli_compare(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// Samples the standing assumptions of the problem and prints one line per check.
int cli_validate(const std::string& problem_id, std::uint64_t seed, std::ostream& out, std::ostream& err);

/// Applies VI_LOG (trace, debug, info, warn, error, critical, off) to the default logger.
void configure_logging();

}  // namespace bvi
