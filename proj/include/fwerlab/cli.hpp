#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fwerlab/mc.hpp"
#include "fwerlab/report.hpp"

namespace fwerlab {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { table1, eval, limits, slepian, kfwer };
enum class OutputFormat { csv, json, humanTable };

/// Fully resolved invocation. Defaults mirror the reference setup:
/// alpha .05, one million replications, human-readable table.
struct RunConfig {
  Command command = Command::eval;
  double alpha = 0.05;
  std::vector<std::int64_t> ns;
  std::vector<double> rhos;
  std::optional<std::int64_t> k;
  std::int64_t mc_replications = 1'000'000;
  std::uint64_t seed = 42;
  std::optional<MaxSampler> sampler_override;
  OutputFormat output_format = OutputFormat::humanTable;
  std::optional<std::string> output_path;
  std::string matrix_path;
  int threads = 0;
};

/// Exit codes: 0 success, 2 usage/validation, 3 inapplicable method,
/// 4 internal numeric failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInapplicable = 3;
inline constexpr int kExitNumeric = 4;

/// Runs one command, writing the report to `out` and diagnostics to `err`.
/// Never throws; failures map onto the exit-code contract above.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// {config, rows[], version} serialization used by --format json.
std::string to_json_report(const RunConfig& cfg,
                           const std::vector<ReportRow>& rows);

}  // namespace fwerlab
