#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fwerlab {

/// One long-format result row. `uncertainty` holds the Monte Carlo
/// standard error or the deterministic error estimate, whichever applies.
/// Elapsed time is shown in human output only, so CSV/JSON emissions stay
/// byte-identical across runs with the same seed.
struct ReportRow {
  std::int64_t n = 0;
  double rho = 0.0;
  std::string method;
  double value = 0.0;
  double uncertainty = 0.0;
  double elapsed_ms = 0.0;
  std::string note;  // human-mode annotation, e.g. "skipped (degenerate)"
};

/// Long-format CSV: single header line, '.' decimal point, 12 significant
/// digits per numeric field.
std::string to_csv(const std::vector<ReportRow>& rows);

/// Parses to_csv output back; throws std::runtime_error on malformed text.
std::vector<ReportRow> parse_csv(const std::string& text);

/// Fixed-width table for terminals: probabilities at 6 decimals,
/// uncertainties at 2 significant digits, notes and timings appended.
std::string to_human_table(const std::vector<ReportRow>& rows);

/// 12-significant-digit numeric formatting shared by the emitters.
std::string format_g12(double v);

}  // namespace fwerlab
