#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qsteg {

// Result of one configured run: a table with one or more rows per parameter
// point and a pass flag per row.
struct ExperimentResult {
  std::string kind;
  std::uint64_t seed = 0;
  long points = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<bool> row_ok;
  double wall_seconds = 0.0;

  long failures() const;
  bool passed() const { return failures() == 0; }
  // Comma-separated, header first, '.' decimal point, no locale dependence.
  std::string csv() const;
  std::string summary_json() const;
};

struct RunOptions {
  std::string kind;                   // overrides or supplies the config's "kind"
  std::optional<std::uint64_t> seed;  // overrides the config's "seed"
};

// Parses a JSON experiment config and runs every parameter point. Throws
// Error(kConfig) on malformed JSON (with the parser's line and column),
// unknown kinds, or missing parameters.
ExperimentResult run_experiment(const std::string& config_text, const RunOptions& opts = {});
ExperimentResult run_experiment_file(const std::string& path, const RunOptions& opts = {});

std::vector<std::string> experiment_kinds();
std::vector<std::string> experiment_columns(const std::string& kind);

// Formats a number for CSV output (%.12g in the C locale).
std::string csv_number(double x);

}  // namespace qsteg
