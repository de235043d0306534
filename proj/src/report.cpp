#include "fwerlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace fwerlab {

namespace {
constexpr const char* kHeader = "n,rho,method,value,uncertainty";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, sep)) {
    out.push_back(cell);
  }
  return out;
}
}  // namespace

std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string to_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  os << kHeader << "\n";
  for (const auto& row : rows) {
    os << row.n << "," << format_g12(row.rho) << "," << row.method << ","
       << format_g12(row.value) << "," << format_g12(row.uncertainty) << "\n";
  }
  return os.str();
}

std::vector<ReportRow> parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kHeader) {
    throw std::runtime_error("csv parse: missing or unexpected header");
  }
  std::vector<ReportRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 5) {
      throw std::runtime_error("csv parse: expected 5 fields, got " +
                               std::to_string(cells.size()));
    }
    ReportRow row;
    row.n = std::stoll(cells[0]);
    row.rho = std::stod(cells[1]);
    row.method = cells[2];
    row.value = std::stod(cells[3]);
    row.uncertainty = std::stod(cells[4]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string to_human_table(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(12) << "n" << std::setw(8) << "rho"
     << std::setw(26) << "method" << std::setw(14) << "value" << std::setw(12)
     << "+/-" << std::setw(10) << "ms" << "note" << "\n";
  for (const auto& row : rows) {
    char value[32];
    char unc[32];
    std::snprintf(value, sizeof(value), "%.6f", row.value);
    if (row.uncertainty == 0.0) {
      std::snprintf(unc, sizeof(unc), "-");
    } else {
      std::snprintf(unc, sizeof(unc), "%.2g", row.uncertainty);
    }
    char ms[32];
    std::snprintf(ms, sizeof(ms), "%.1f", row.elapsed_ms);
    os << std::left << std::setw(12) << row.n << std::setw(8) << row.rho
       << std::setw(26) << row.method << std::setw(14) << value
       << std::setw(12) << unc << std::setw(10) << ms << row.note << "\n";
  }
  return os.str();
}

}  // namespace fwerlab
