#include "dmesim/scenario_file.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dmesim {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& text, double& out) {
  errno = 0;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return errno == 0 && end && *end == '\0' && !text.empty();
}

bool parse_u64(const std::string& text, uint64_t& out) {
  errno = 0;
  char* end = nullptr;
  out = std::strtoull(text.c_str(), &end, 10);
  return errno == 0 && end && *end == '\0' && !text.empty();
}

bool parse_double_list(const std::string& text, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) return false;
    double v;
    if (!parse_double(item, v)) return false;
    out.push_back(v);
  }
  return true;
}

struct RawLine {
  int line;
  std::string section;  // "", "mc", "acr_mask"
  std::string key;
  std::string value;
};

const std::set<std::string> kTransponderKeys = {
    "p_pu_dbm", "p_su_dbm", "g_su_dbi", "g_dme_dbi", "penetration_db",
    "c_pathloss", "alpha", "sigma_db", "rho", "lambda_su_per_km2",
    "r_min_km", "r_max_km", "a_thr_dbm", "beta_pu", "acr_db", "margin_db"};

const std::set<std::string> kAirborneKeys = {
    "p_pu_dbm", "p_su_dbm", "g_su_dbi", "g_dme_dbi", "penetration_db",
    "c_pathloss", "alpha", "h_km", "t_u_s", "v_kmh", "lambda_su_per_km2",
    "r_max_km", "a_thr_dbm", "beta_pu", "acr_db", "margin_db"};

const std::set<std::string> kExperimentKinds = {
    "fig3-cdf", "fig4-ithr", "fig5-frontier", "fig6-exclusion", "fig7-power",
    "custom"};

}  // namespace

bool apply_scenario_field(TransponderScenario& s, const std::string& key, double v) {
  if (key == "p_pu_dbm") s.p_pu_dbm = PowerDbm(v);
  else if (key == "p_su_dbm") s.p_su_dbm = PowerDbm(v);
  else if (key == "g_su_dbi") s.g_su_dbi = v;
  else if (key == "g_dme_dbi") s.g_dme_dbi = v;
  else if (key == "penetration_db") s.penetration_db = v;
  else if (key == "c_pathloss") s.c_pathloss = v;
  else if (key == "alpha") s.alpha = v;
  else if (key == "sigma_db") s.sigma_db = v;
  else if (key == "rho") s.rho = v;
  else if (key == "lambda_su_per_km2") s.lambda_su = v;
  else if (key == "r_min_km") s.r_min_km = v;
  else if (key == "r_max_km") s.r_max_km = v;
  else if (key == "a_thr_dbm") s.a_thr_dbm = PowerDbm(v);
  else if (key == "beta_pu") s.beta_pu = v;
  else if (key == "acr_db") s.acr_db = v;
  else if (key == "margin_db") s.margin_db = v;
  else return false;
  return true;
}

bool apply_scenario_field(AirborneScenario& s, const std::string& key, double v) {
  if (key == "p_pu_dbm") s.p_pu_dbm = PowerDbm(v);
  else if (key == "p_su_dbm") s.p_su_dbm = PowerDbm(v);
  else if (key == "g_su_dbi") s.g_su_dbi = v;
  else if (key == "g_dme_dbi") s.g_dme_dbi = v;
  else if (key == "penetration_db") s.penetration_db = v;
  else if (key == "c_pathloss") s.c_pathloss = v;
  else if (key == "alpha") s.alpha = v;
  else if (key == "h_km") s.h_km = v;
  else if (key == "t_u_s") s.t_u_s = v;
  else if (key == "v_kmh") s.v_kmh = v;
  else if (key == "lambda_su_per_km2") s.lambda_su = v;
  else if (key == "r_max_km") s.r_max_km = v;
  else if (key == "a_thr_dbm") s.a_thr_dbm = PowerDbm(v);
  else if (key == "beta_pu") s.beta_pu = v;
  else if (key == "acr_db") s.acr_db = v;
  else if (key == "margin_db") s.margin_db = v;
  else return false;
  return true;
}

bool apply_scenario_field(ExperimentSpec& spec, const std::string& key, double v) {
  if (spec.is_transponder())
    return apply_scenario_field(std::get<TransponderScenario>(spec.scenario), key, v);
  return apply_scenario_field(std::get<AirborneScenario>(spec.scenario), key, v);
}

ParsedSpec parse_spec_text(const std::string& text) {
  ParsedSpec out;
  auto& issues = out.issues;
  auto& spec = out.spec;

  // First pass: split into (section, key, value) with line numbers.
  std::vector<RawLine> lines;
  {
    std::stringstream ss(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    std::set<std::string> seen;
    while (std::getline(ss, raw)) {
      ++lineno;
      const size_t hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      const std::string line = trim(raw);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          issues.push_back({lineno, "", "malformed section header"});
          continue;
        }
        section = trim(line.substr(1, line.size() - 2));
        if (section != "mc" && section != "acr_mask")
          issues.push_back({lineno, section, "unknown section (expected [mc] or [acr_mask])"});
        continue;
      }
      const size_t eq = line.find('=');
      if (eq == std::string::npos) {
        issues.push_back({lineno, "", "expected 'key = value'"});
        continue;
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty() || value.empty()) {
        issues.push_back({lineno, key, "empty key or value"});
        continue;
      }
      const std::string qualified = section.empty() ? key : section + "." + key;
      if (!seen.insert(qualified).second) {
        issues.push_back({lineno, qualified, "duplicate key"});
        continue;
      }
      lines.push_back({lineno, section, key, value});
    }
  }

  // Scenario kind decides which field names are legal; default transponder.
  std::string kind = "transponder";
  for (const auto& l : lines)
    if (l.section.empty() && l.key == "kind") kind = l.value;
  if (kind == "airborne") {
    spec.scenario = AirborneScenario{};
  } else if (kind != "transponder") {
    issues.push_back({0, "kind", "must be 'transponder' or 'airborne'"});
  }
  const auto& scenario_keys = kind == "airborne" ? kAirborneKeys : kTransponderKeys;

  bool margin_given = false;
  std::optional<int> channel_offset;
  std::map<int, double> mask_entries;
  bool acr_given = false;

  for (const auto& l : lines) {
    auto bad_number = [&] { issues.push_back({l.line, l.key, "not a number"}); };
    if (l.section == "mc") {
      if (!spec.mc) spec.mc = McBlock{};
      uint64_t v;
      if (l.key == "trials") {
        if (!parse_u64(l.value, v) || v < 1)
          issues.push_back({l.line, "mc.trials", "must be an integer >= 1"});
        else spec.mc->trials = v;
      } else if (l.key == "seed") {
        if (!parse_u64(l.value, v)) issues.push_back({l.line, "mc.seed", "must be an integer"});
        else spec.mc->seed = v;
      } else {
        issues.push_back({l.line, "mc." + l.key, "unknown key"});
      }
      continue;
    }
    if (l.section == "acr_mask") {
      uint64_t off;
      double db;
      if (!parse_u64(l.key, off))
        issues.push_back({l.line, "acr_mask", "offsets must be nonnegative integers (MHz)"});
      else if (!parse_double(l.value, db))
        bad_number();
      else
        mask_entries[static_cast<int>(off)] = db;
      continue;
    }

    // top level
    if (l.key == "kind") continue;
    if (l.key == "experiment") {
      if (!kExperimentKinds.count(l.value))
        issues.push_back({l.line, "experiment", "unknown experiment kind '" + l.value + "'"});
      spec.experiment = l.value;
      continue;
    }
    if (l.key == "sweep_axis") {
      spec.sweep_axis = l.value;
      continue;
    }
    if (l.key == "sweep_values") {
      if (!parse_double_list(l.value, spec.sweep_values))
        issues.push_back({l.line, "sweep_values", "expected a comma-separated number list"});
      continue;
    }
    if (l.key == "delays_s") {
      if (!parse_double_list(l.value, spec.delays_s))
        issues.push_back({l.line, "delays_s", "expected a comma-separated number list"});
      continue;
    }
    if (l.key == "output_format") {
      if (l.value == "csv") spec.format = OutputFormat::kCsv;
      else if (l.value == "json") spec.format = OutputFormat::kJson;
      else issues.push_back({l.line, "output_format", "must be 'csv' or 'json'"});
      continue;
    }
    if (l.key == "output_path") {
      spec.output_path = l.value;
      continue;
    }
    double v;
    if (l.key == "i_thr_dbm") {
      if (!parse_double(l.value, v)) bad_number();
      else spec.i_thr_dbm = v;
      continue;
    }
    if (l.key == "r_o_km") {
      if (!parse_double(l.value, v)) bad_number();
      else spec.r_o_km = v;
      continue;
    }
    if (l.key == "prob_floor") {
      if (!parse_double(l.value, v)) bad_number();
      else spec.prob_floor = v;
      continue;
    }
    if (l.key == "r_ref_km") {
      if (!parse_double(l.value, v)) bad_number();
      else spec.r_ref_km = v;
      continue;
    }
    if (l.key == "channel_offset_mhz") {
      uint64_t off;
      if (!parse_u64(l.value, off))
        issues.push_back({l.line, "channel_offset_mhz", "must be a nonnegative integer"});
      else channel_offset = static_cast<int>(off);
      continue;
    }
    if (scenario_keys.count(l.key)) {
      if (!parse_double(l.value, v)) {
        bad_number();
        continue;
      }
      if (l.key == "margin_db") margin_given = true;
      if (l.key == "acr_db") acr_given = true;
      apply_scenario_field(spec, l.key, v);
      continue;
    }
    issues.push_back({l.line, l.key, "unknown key for kind '" + kind + "'"});
  }

  if (!mask_entries.empty()) spec.acr_mask = AcrMask(std::move(mask_entries));

  // Channel offset resolves the rejection through the mask; an explicit
  // acr_db alongside it would be ambiguous.
  if (channel_offset) {
    if (acr_given) {
      issues.push_back({0, "channel_offset_mhz",
                        "conflicts with explicit acr_db; give one or the other"});
    } else {
      const double acr = spec.acr_mask.db_for_offset(*channel_offset);
      apply_scenario_field(spec, "acr_db", acr);
      acr_given = true;
    }
  }

  // Co-channel margin 3 dB, adjacent-channel 10 dB unless stated.
  if (!margin_given) {
    const double acr = spec.is_transponder() ? spec.transponder().acr_db
                                             : spec.airborne().acr_db;
    apply_scenario_field(spec, "margin_db", acr == 0.0 ? 3.0 : 10.0);
  }

  if (!spec.sweep_axis.empty()) {
    ExperimentSpec probe = spec;
    if (!apply_scenario_field(probe, spec.sweep_axis, 1.0))
      issues.push_back({0, "sweep_axis",
                        "'" + spec.sweep_axis + "' is not a scenario field of kind '" +
                            kind + "'"});
  } else if (!spec.sweep_values.empty()) {
    issues.push_back({0, "sweep_axis", "sweep_values given without sweep_axis"});
  }

  // Scenario invariants, reported with the same machinery as parse errors.
  const ValidationReport rep = spec.is_transponder() ? spec.transponder().validate()
                                                     : spec.airborne().validate();
  for (const auto& e : rep.errors) issues.push_back({0, e.field, e.message});

  return out;
}

ParsedSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParsedSpec bad;
    bad.issues.push_back({0, path, "cannot open file"});
    return bad;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str());
}

}  // namespace dmesim
