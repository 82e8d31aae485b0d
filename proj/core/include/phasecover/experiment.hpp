#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "phasecover/config.hpp"

namespace phasecover {

struct RunOutcome {
  int exit_code = 0;  // 0 ok, 1 validation, 2 numeric failure, 3 verification mismatch
  std::string message;
};

/// Executes the experiment and writes certificate.csv, equivalence.csv,
/// invariants.json and plotdata/error_vs_u.csv into out_dir. Outputs are a
/// pure function of (config, seed, version); rerunning the same config yields
/// identical bytes.
RunOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                          int threads = 1);

/// Recomputes the experiment and diffs every CSV against the baseline
/// directory with per-cell tolerance 1e-9, reporting the first mismatch.
RunOutcome verify_experiment(const ExperimentConfig& cfg,
                             const std::filesystem::path& baseline_dir, int threads = 1);

std::vector<std::string> fixture_names();
std::string fixture_json(const std::string& name);

/// Loads a config from a path, falling back to a bundled fixture with that
/// base name when no such file exists.
ExperimentConfig load_config(const std::string& path_or_fixture);

}  // namespace phasecover
