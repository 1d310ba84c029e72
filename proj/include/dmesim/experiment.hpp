#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "dmesim/scenario_file.hpp"

namespace dmesim {

using Cell = std::variant<double, std::string>;

// One experiment's output: a fixed column set and one row per sweep value
// (or per sweep value x quantile level for the CDF experiment).
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Executes the experiment described by the spec. Deterministic: identical
// specs (including seeds) produce identical tables. Row-level solver
// infeasibility lands in the status column, not in an exception.
ResultTable run_experiment(const ExperimentSpec& spec, int threads = 0);

// CSV with a header row, comma separators, scientific notation at nine
// significant digits, LF endings.
void write_csv(const ResultTable& table, std::ostream& os);

// JSON: {"columns": [...], "rows": [[...], ...]}.
void write_json(const ResultTable& table, std::ostream& os);

// Raw Monte Carlo sample export. Text format: '#'-prefixed header lines
// carrying seed, trials and the scenario digest, then one mW value per line.
// Binary format: a fixed 40-byte header followed by trials little-endian
// doubles.
void export_mc(const ExperimentSpec& spec, std::ostream& os, bool binary,
               int threads = 0);

}  // namespace dmesim
