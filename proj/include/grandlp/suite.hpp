#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "grandlp/verify.hpp"

namespace grandlp {

struct SuiteEntry {
  std::size_t index = 0;
  std::string kind;
  nlohmann::json params = nlohmann::json::object();  // with defaults filled in
  bool pass = false;
  nlohmann::json result = nlohmann::json::object();
  std::string error_kind;  // empty unless the check threw
  std::string error_message;
  std::vector<TraceRow> trace;
  double seconds = 0.0;
};

struct SuiteReport {
  std::uint64_t seed = 1;
  std::vector<SuiteEntry> entries;
  bool pass = true;
  double seconds = 0.0;
};

/// Deterministic report: no timing, entries in config order.
nlohmann::json report_json(const SuiteReport& r);
/// Wall-clock seconds per entry and in total.
nlohmann::json timing_json(const SuiteReport& r);

/// p_or_t,value,model_value rows with full precision.
std::string trace_csv(const std::vector<TraceRow>& rows);

/// Check kinds understood by run_suite.
std::vector<std::string> suite_kinds();

/// Every acceptance-level check at its default parameters.
nlohmann::json default_suite_config(std::uint64_t seed = 1);

/// Runs one check; params missing from `params` take their defaults.
/// Errors propagate.
SuiteEntry run_check(const std::string& kind, const nlohmann::json& params, std::uint64_t seed);

/// {"seed": s, "checks": [{"kind": ..., params...}, ...]}. Entries run
/// concurrently; an entry that throws is recorded with its error kind and
/// fails unless it lists that kind under "expect_error".
SuiteReport run_suite(const nlohmann::json& config);

/// report.json, timing.json and one <index>_<kind>.csv per entry with a trace.
void write_suite_outputs(const SuiteReport& r, const std::filesystem::path& dir);

/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace grandlp
