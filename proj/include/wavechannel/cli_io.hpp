#pragma once

#include "wavechannel/config.hpp"
#include "wavechannel/experiments.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wavechannel {

inline constexpr const char* kToolName = "wavechannel";
inline constexpr const char* kToolVersion = "1.0.0";

// Strict JSON config: unknown keys, wrong types and constraint violations raise
// ConfigError naming the field path; syntax errors report line and column.
// Missing keys take the documented defaults.
RunConfig parse_config(const std::string& text);

// Canonical JSON of a config (all fields, unset optionals as null). parse_config
// of this text gives back an equal config.
std::string config_to_json(const RunConfig& cfg);

// Shortest decimal text that reads back as the same double.
std::string format_double(double v);

// FNV-1a 64 of the text, as 16 hex digits.
std::string content_hash(const std::string& text);

inline constexpr const char* kSeriesHeader = "t,norm2,mean_x,mean_p,dpdt,f_boundary,f_potential,transmitted";

std::string series_csv(const std::vector<ObservableRecord>& rows);
std::string sweep_csv(const SweepResult& sweep);
std::string models_csv(const ModelComparison& cmp);

// JSON documents (pretty-printed, fixed key order).
std::string summary_json(const RunResult& result);
std::string summary_json(const SweepResult& sweep, const RunConfig& cfg);
std::string summary_json(const ModelComparison& cmp, const RunConfig& cfg);

struct Manifest {
  std::string command;
  std::string config_hash;
  double wall_seconds = 0.0;
  std::string started_utc;
  std::vector<std::string> files;
};
std::string manifest_json(const Manifest& m, const RunConfig& cfg);

// Creates the directory if needed and proves it writable; throws IoError.
void preflight_output(const std::string& dir);

// Writes the result files for each output format into dir and returns their
// names (manifest excluded). Throws IoError.
std::vector<std::string> emit_results(const RunResult& result, const OutputSpec& out);
std::vector<std::string> emit_results(const SweepResult& sweep, const RunConfig& cfg, const OutputSpec& out);
std::vector<std::string> emit_results(const ModelComparison& cmp, const RunConfig& cfg, const OutputSpec& out);
void write_manifest(const Manifest& m, const RunConfig& cfg, const OutputSpec& out);

// Command-line entry point. Exit codes: 0 success, 1 usage or configuration
// error, 2 numerical failure.
int cli_main(int argc, char** argv);

}  // namespace wavechannel
