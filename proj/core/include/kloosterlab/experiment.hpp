#pragma once

#include <map>
#include <string>
#include <vector>

#include "kloosterlab/report.hpp"

namespace kloosterlab::cli {

enum class Kind {
  table,
  vst,
  interval,
  moments,
  signs,
  extremes,
  cdf,
  multisum,
  gm,
  horizontal,
  bounds,
};

enum class Format { csv, json };

Kind parse_kind(const std::string& name);
std::string kind_name(Kind kind);
Format parse_format(const std::string& name);

// One experiment: a kind, a flat string parameter map, and where the report
// goes. Validation happens up front; no computation starts on a bad config.
struct ExperimentConfig {
  Kind kind = Kind::vst;
  std::map<std::string, std::string> params;
  std::string output;  // empty = stdout
  Format format = Format::csv;
};

// Flat key=value file ('#' comments). Recognized reserved keys: kind, output,
// format; everything else lands in params. Flag/CLI overrides beat the file.
ExperimentConfig load_config_file(const std::string& path);

// Validates and executes; throws UsageError / CostGuardError / std exceptions.
report::Report execute(const ExperimentConfig& config);

struct RunOutcome {
  int exit_code = 0;      // 0 ok, 2 usage, 3 cost-guard refusal, 1 other
  std::string message;    // empty on success
};

// execute() plus report serialization to config.output (stdout when empty).
// Exceptions are mapped onto exit codes; a machine-readable JSON error record
// goes to stderr on failure.
RunOutcome run(const ExperimentConfig& config);

// Runs independent configs on up to `workers` threads. Row order in the
// aggregate is sorted by (kind, p, params) no matter the schedule; duplicate
// output paths are rejected before anything runs. Child failures leave the
// other reports in place and surface as a nonzero aggregate exit.
RunOutcome sweep(const std::vector<ExperimentConfig>& configs, unsigned workers,
                 const std::string& aggregate_output, Format aggregate_format);

}  // namespace kloosterlab::cli
