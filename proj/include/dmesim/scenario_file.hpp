#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dmesim/scenario.hpp"

namespace dmesim {

enum class OutputFormat { kCsv, kJson };

struct McBlock {
  uint64_t trials = 10000;
  uint64_t seed = 1;
};

// A parsed experiment description: scenario fields at the top level, the
// Monte Carlo block and ACR mask override as the only nested sections, and
// the experiment plumbing (kind, sweep, output) alongside.
struct ExperimentSpec {
  std::string experiment;  // fig3-cdf | fig4-ithr | fig5-frontier |
                           // fig6-exclusion | fig7-power | custom
  std::variant<TransponderScenario, AirborneScenario> scenario;
  AcrMask acr_mask = AcrMask::dme_default();

  std::string sweep_axis;
  std::vector<double> sweep_values;

  std::optional<McBlock> mc;
  std::optional<double> i_thr_dbm;     // censoring threshold where needed
  std::optional<double> r_o_km;        // airborne exclusion radius override
  double prob_floor = 0.90;
  double r_ref_km = 5.0;
  std::vector<double> delays_s = {0.0, 60.0, 300.0};

  std::string output_path;
  OutputFormat format = OutputFormat::kCsv;

  bool is_transponder() const {
    return std::holds_alternative<TransponderScenario>(scenario);
  }
  const TransponderScenario& transponder() const {
    return std::get<TransponderScenario>(scenario);
  }
  const AirborneScenario& airborne() const {
    return std::get<AirborneScenario>(scenario);
  }
};

struct ParseIssue {
  int line = 0;  // 0 when the issue is not tied to a specific line
  std::string field;
  std::string message;
};

struct ParsedSpec {
  ExperimentSpec spec;
  std::vector<ParseIssue> issues;

  bool ok() const { return issues.empty(); }
};

// Parses and validates a spec document; returns every problem found rather
// than stopping at the first. Omitted scenario fields keep their defaults.
ParsedSpec parse_spec_text(const std::string& text);
ParsedSpec parse_spec_file(const std::string& path);

// Applies a named scenario field (units-suffixed key) to the right member;
// returns false for unknown names. Shared by the parser and sweep runner.
bool apply_scenario_field(TransponderScenario& s, const std::string& key, double value);
bool apply_scenario_field(AirborneScenario& s, const std::string& key, double value);
bool apply_scenario_field(ExperimentSpec& spec, const std::string& key, double value);

}  // namespace dmesim
