#pragma once

#include <string>
#include <vector>

#include "idyn/checks.hpp"

namespace idyn {

/// Names of the registered checks, in the deterministic run order.
std::vector<std::string> registered_checks();

/// Parses a line-oriented key=value config file ('#' starts a comment).
/// Recognized keys: horizon, seed, trials, threshold, workers, support_bound,
/// gap_target. Unknown keys throw std::invalid_argument.
SuiteConfig load_config(const std::string& path);
void apply_config_entry(SuiteConfig& cfg, const std::string& key, const std::string& value);

struct SuiteReport {
  std::vector<CheckResult> results;
  int exit_code = 0;  ///< 0 all pass (inconclusive allowed), 1 any fail
};

/// Runs the selected checks (names from registered_checks(), or "all") on a
/// bounded worker pool and writes results.csv plus summary.txt under out_dir
/// (skipped when out_dir is empty). Results are ordered by check name, so
/// identical configs produce byte-identical files.
/// Throws std::invalid_argument for unknown check names.
SuiteReport run_suite(const SuiteConfig& cfg, const std::vector<std::string>& which,
                      const std::string& out_dir);

}  // namespace idyn
