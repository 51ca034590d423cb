#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "hyperlab/circle.hpp"

namespace hyperlab {

/// Process exit codes shared by the experiment runner and the CLI.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitInvalidConfig = 2,
  kExitInconclusive = 3,
};

struct RunOutcome {
  int exit_code = kExitOk;
  nlohmann::json report;
  std::vector<std::string> written;  // report files
};

/// Parses the map record {"kind":"circle_ms","k":..,"amplitude":..,
/// "orientation":..}.  Throws nlohmann::json::exception or
/// std::invalid_argument on malformed input.
MorseSmaleCircleMap map_from_json(const nlohmann::json& sys);

std::vector<std::string> list_experiments();

/// Validates and dispatches one experiment config; writes the JSON report
/// (and CSV tables where the experiment has tabular output) under out_dir.
RunOutcome run_experiment(const nlohmann::json& config, const std::string& out_dir);

/// Convenience wrapper reading the config from a file; returns
/// kExitInvalidConfig on unreadable or malformed JSON.
RunOutcome run_config_file(const std::string& path, const std::string& out_dir,
                           std::int64_t seed_override = -1);

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values, one line
};

/// Runs one acceptance criterion at its pinned parameters, writing evidence
/// reports under out_dir.
CriterionResult run_criterion(int index, const std::string& out_dir);

/// Runs every criterion with pinned seeds and writes summary.{json,csv};
/// returns 0 iff all pass.
int reproduce_all(const std::string& out_dir);

}  // namespace hyperlab
