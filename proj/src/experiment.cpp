#include "dmesim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "dmesim/analytic.hpp"
#include "dmesim/montecarlo.hpp"
#include "dmesim/solver.hpp"

namespace dmesim {

namespace {

constexpr double kCdfLevels[] = {0.01, 0.02, 0.05, 0.10, 0.25, 0.50, 0.75,
                                 0.90, 0.95, 0.98, 0.99, 0.995, 0.999};

std::string format_cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

McOptions row_mc_options(const ExperimentSpec& spec, size_t row, int threads) {
  McOptions opt;
  opt.trials = spec.mc->trials;
  opt.seed = spec.mc->seed + row;  // per-row stream, reproducible by row index
  opt.threads = threads;
  return opt;
}

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

// Row-level failures (bad sweep value, solver breakdown) land in the status
// column; the run itself keeps going.
std::vector<Cell> error_row(size_t columns, double sweep_value) {
  std::vector<Cell> row{sweep_value};
  while (row.size() + 1 < columns) row.emplace_back(std::string("nan"));
  row.emplace_back(std::string("error"));
  return row;
}

template <class S>
S scenario_at(const ExperimentSpec& spec, const S& base, double sweep_value) {
  S s = base;
  if (!spec.sweep_axis.empty()) {
    apply_scenario_field(s, spec.sweep_axis, sweep_value);
    s.validate_or_throw();
  }
  return s;
}

ResultTable run_fig3(const ExperimentSpec& spec, int threads) {
  require(spec.is_transponder(), "fig3-cdf requires kind = transponder");
  require(spec.i_thr_dbm.has_value(), "fig3-cdf requires i_thr_dbm");
  require(spec.mc.has_value(), "fig3-cdf requires an [mc] block");
  ResultTable t;
  t.columns = {spec.sweep_axis.empty() ? "row" : spec.sweep_axis, "level",
               "analytic_dbm", "mc_dbm", "diff_db", "status"};
  for (size_t i = 0; i < spec.sweep_values.size(); ++i) {
    const double sv = spec.sweep_values[i];
    const TransponderScenario s = scenario_at(spec, spec.transponder(), sv);
    const double i_thr = dbm_to_mw(*spec.i_thr_dbm);
    std::string status = "ok";
    FittedDistribution fit;
    try {
      fit = fit_lognormal(transponder_cumulants(s, i_thr));
    } catch (const std::exception&) {
      status = "empty-field";
    }
    McSample mc = simulate_transponder(s, i_thr, row_mc_options(spec, i, threads));
    std::sort(mc.values.begin(), mc.values.end());
    for (double level : kCdfLevels) {
      std::vector<Cell> row{sv, level};
      const double qm = empirical_quantile(mc.values, level);
      if (status == "ok" && qm > 0.0) {
        const double qa = fit.quantile(level);
        row.emplace_back(mw_to_dbm(qa));
        row.emplace_back(mw_to_dbm(qm));
        row.emplace_back(10.0 * std::log10(qa / qm));
        row.emplace_back(status);
      } else {
        row.emplace_back(std::string("nan"));
        row.emplace_back(qm > 0.0 ? Cell{mw_to_dbm(qm)} : Cell{std::string("nan")});
        row.emplace_back(std::string("nan"));
        row.emplace_back(status == "ok" ? std::string("empty-trial") : status);
      }
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

ResultTable run_fig4(const ExperimentSpec& spec) {
  require(spec.is_transponder(), "fig4-ithr requires kind = transponder");
  ResultTable t;
  t.columns = {spec.sweep_axis, "i_thr_dbm", "achieved_prob", "iterations", "status"};
  t.rows.resize(spec.sweep_values.size());
#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < spec.sweep_values.size(); ++i) {
    try {
      const TransponderScenario s =
          scenario_at(spec, spec.transponder(), spec.sweep_values[i]);
      const FeasibilityResult r = solve_ithr(s);
      t.rows[i] = {spec.sweep_values[i], r.value, r.achieved,
                   static_cast<double>(r.iterations), to_string(r.status)};
    } catch (const std::exception&) {
      t.rows[i] = error_row(t.columns.size(), spec.sweep_values[i]);
    }
  }
  return t;
}

ResultTable run_fig5(const ExperimentSpec& spec) {
  require(spec.is_transponder(), "fig5-frontier requires kind = transponder");
  ResultTable t;
  t.columns = {spec.sweep_axis.empty() ? "p_su_dbm" : spec.sweep_axis,
               "max_lambda_per_km2", "achieved_tx_prob", "status"};
  t.rows.resize(spec.sweep_values.size());
#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < spec.sweep_values.size(); ++i) {
    const double sv = spec.sweep_values[i];
    try {
      TransponderScenario base = spec.transponder();
      double p_su = base.p_su_dbm.dbm;
      if (spec.sweep_axis == "p_su_dbm" || spec.sweep_axis.empty()) {
        p_su = sv;
      } else {
        base = scenario_at(spec, base, sv);
      }
      const FeasibilityResult r =
          max_density_for_power(base, p_su, spec.prob_floor, spec.r_ref_km);
      t.rows[i] = {sv, r.value, r.achieved, to_string(r.status)};
    } catch (const std::exception&) {
      t.rows[i] = error_row(t.columns.size(), sv);
    }
  }
  return t;
}

ResultTable run_fig6(const ExperimentSpec& spec) {
  require(!spec.is_transponder(), "fig6-exclusion requires kind = airborne");
  ResultTable t;
  t.columns = {spec.sweep_axis, "r_thr_km"};
  for (double d : spec.delays_s) {
    char name[48];
    std::snprintf(name, sizeof name, "r_o_km_delay_%gs", d);
    t.columns.emplace_back(name);
  }
  t.columns.emplace_back("status");
  t.rows.resize(spec.sweep_values.size());
#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < spec.sweep_values.size(); ++i) {
    try {
      const AirborneScenario s =
          scenario_at(spec, spec.airborne(), spec.sweep_values[i]);
      const FeasibilityResult r = solve_exclusion_radius(s);
      std::vector<Cell> row{spec.sweep_values[i], r.value};
      for (double d : spec.delays_s)
        row.emplace_back(apply_update_delay(r.value, d, s.v_kmh));
      row.emplace_back(to_string(r.status));
      t.rows[i] = std::move(row);
    } catch (const std::exception&) {
      t.rows[i] = error_row(t.columns.size(), spec.sweep_values[i]);
    }
  }
  return t;
}

ResultTable run_fig7(const ExperimentSpec& spec) {
  require(!spec.is_transponder(), "fig7-power requires kind = airborne");
  ResultTable t;
  t.columns = {spec.sweep_axis.empty() ? "lambda_su_per_km2" : spec.sweep_axis,
               "max_p_su_dbm", "achieved_tail", "status"};
  t.rows.resize(spec.sweep_values.size());
#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < spec.sweep_values.size(); ++i) {
    const double sv = spec.sweep_values[i];
    try {
      AirborneScenario base = spec.airborne();
      double lambda = base.lambda_su;
      if (spec.sweep_axis == "lambda_su_per_km2" || spec.sweep_axis.empty()) {
        lambda = sv;
      } else {
        base = scenario_at(spec, base, sv);
      }
      const FeasibilityResult r = max_power_no_exclusion(base, lambda);
      t.rows[i] = {sv, r.value, r.achieved, to_string(r.status)};
    } catch (const std::exception&) {
      t.rows[i] = error_row(t.columns.size(), sv);
    }
  }
  return t;
}

ResultTable run_custom(const ExperimentSpec& spec, int threads) {
  ResultTable t;
  const bool with_mc = spec.mc.has_value();
  t.columns = {spec.sweep_axis.empty() ? "row" : spec.sweep_axis,
               "k1_mw", "k2_mw2", "fit_mu", "fit_sigma", "a_eff_dbm", "tail_prob"};
  if (with_mc) {
    t.columns.insert(t.columns.end(), {"mc_tail", "mc_ci_lo", "mc_ci_hi"});
  }
  t.columns.emplace_back("status");
  for (size_t i = 0; i < spec.sweep_values.size(); ++i) {
    const double sv = spec.sweep_values[i];
    std::vector<Cell> row{sv};
    std::string status = "ok";
    CumulantSet k;
    double thr = 0.0;
    McSample mc;
    if (spec.is_transponder()) {
      require(spec.i_thr_dbm.has_value(), "custom transponder runs require i_thr_dbm");
      const TransponderScenario s = scenario_at(spec, spec.transponder(), sv);
      const double i_thr = dbm_to_mw(*spec.i_thr_dbm);
      thr = effective_protection_threshold_mw(s);
      k = transponder_cumulants(s, i_thr);
      if (with_mc) mc = simulate_transponder(s, i_thr, row_mc_options(spec, i, threads));
    } else {
      const AirborneScenario s = scenario_at(spec, spec.airborne(), sv);
      const double r_o = spec.r_o_km.value_or(0.0);
      thr = effective_protection_threshold_mw(s);
      k = airborne_cumulants(s, r_o);
      if (with_mc) mc = simulate_airborne(s, r_o, row_mc_options(spec, i, threads));
    }
    row.emplace_back(k.k1());
    row.emplace_back(k.k2());
    if (k.k1() > 0.0 && k.k2() > 0.0) {
      const FittedDistribution fit = spec.is_transponder()
                                         ? fit_lognormal(k)
                                         : fit_gaussian(k);
      row.emplace_back(fit.mu);
      row.emplace_back(fit.sigma);
      row.emplace_back(mw_to_dbm(thr));
      row.emplace_back(prob_exceed(fit, thr));
    } else {
      status = "empty-field";
      row.insert(row.end(), {std::string("nan"), std::string("nan"),
                             mw_to_dbm(thr), 0.0});
    }
    if (with_mc) {
      const TailEstimate tail = empirical_tail(mc, thr);
      row.insert(row.end(), {tail.probability, tail.ci.lo, tail.ci.hi});
    }
    row.emplace_back(status);
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

ResultTable run_experiment(const ExperimentSpec& spec, int threads) {
  if (spec.experiment == "fig3-cdf") return run_fig3(spec, threads);
  if (spec.experiment == "fig4-ithr") return run_fig4(spec);
  if (spec.experiment == "fig5-frontier") return run_fig5(spec);
  if (spec.experiment == "fig6-exclusion") return run_fig6(spec);
  if (spec.experiment == "fig7-power") return run_fig7(spec);
  if (spec.experiment == "custom") return run_custom(spec, threads);
  throw std::invalid_argument("unknown or missing experiment kind '" +
                              spec.experiment + "'");
}

void write_csv(const ResultTable& table, std::ostream& os) {
  for (size_t c = 0; c < table.columns.size(); ++c)
    os << table.columns[c] << (c + 1 < table.columns.size() ? "," : "\n");
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (const double* d = std::get_if<double>(&row[c]))
        os << format_cell(*d);
      else
        os << std::get<std::string>(row[c]);
      os << (c + 1 < row.size() ? "," : "\n");
    }
  }
}

void write_json(const ResultTable& table, std::ostream& os) {
  nlohmann::json j;
  j["columns"] = table.columns;
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& cell : row) {
      if (const double* d = std::get_if<double>(&cell))
        jr.push_back(*d);
      else
        jr.push_back(std::get<std::string>(cell));
    }
    rows.push_back(std::move(jr));
  }
  os << j.dump(2) << "\n";
}

void export_mc(const ExperimentSpec& spec, std::ostream& os, bool binary,
               int threads) {
  require(spec.mc.has_value(), "mc-export requires an [mc] block");
  McOptions opt{spec.mc->trials, spec.mc->seed, threads};
  McSample sample;
  if (spec.is_transponder()) {
    require(spec.i_thr_dbm.has_value(), "mc-export (transponder) requires i_thr_dbm");
    sample = simulate_transponder(spec.transponder(), dbm_to_mw(*spec.i_thr_dbm), opt);
  } else {
    sample = simulate_airborne(spec.airborne(), spec.r_o_km.value_or(0.0), opt);
  }
  if (binary) {
    char magic[8] = {'D', 'M', 'E', 'M', 'C', '0', '1', '\0'};
    os.write(magic, 8);
    uint64_t header[4] = {sample.seed, sample.trials, sample.scenario_digest, 0};
    os.write(reinterpret_cast<const char*>(header), sizeof header);
    os.write(reinterpret_cast<const char*>(sample.values.data()),
             static_cast<std::streamsize>(sample.values.size() * sizeof(double)));
    return;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(sample.scenario_digest));
  os << "# dmesim mc-export\n";
  os << "# scenario_digest = " << buf << "\n";
  os << "# seed = " << sample.seed << "\n";
  os << "# trials = " << sample.trials << "\n";
  os << "value_mw\n";
  for (double v : sample.values) os << format_cell(v) << "\n";
}

}  // namespace dmesim
