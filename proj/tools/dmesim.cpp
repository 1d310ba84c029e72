// Experiment runner for DME-band secondary-access feasibility studies.
//
//   dmesim run <spec-file>        execute the experiment in the spec file
//   dmesim validate <spec-file>   check a spec file and report every problem
//   dmesim mc-export <spec-file>  dump raw Monte Carlo samples
//
// Output goes to --output (or the spec's output_path), default stdout.

#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmesim/experiment.hpp"
#include "dmesim/scenario_file.hpp"

namespace {

using dmesim::ExperimentSpec;
using dmesim::OutputFormat;
using dmesim::ParsedSpec;

void print_error_json(const std::string& kind, const std::string& message,
                      const std::vector<dmesim::ParseIssue>& issues = {}) {
  nlohmann::json j;
  j["error"]["kind"] = kind;
  j["error"]["message"] = message;
  if (!issues.empty()) {
    auto& arr = j["error"]["issues"] = nlohmann::json::array();
    for (const auto& i : issues)
      arr.push_back({{"line", i.line}, {"field", i.field}, {"message", i.message}});
  }
  std::cerr << j.dump() << "\n";
}

int resolve_cli_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("DMESIM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;
}

std::ostream* open_output(const std::string& path, std::ofstream& file,
                          bool binary) {
  if (path.empty() || path == "-") return &std::cout;
  file.open(path, binary ? std::ios::binary : std::ios::out);
  if (!file) {
    print_error_json("io", "cannot open output file '" + path + "'");
    return nullptr;
  }
  return &file;
}

int cmd_validate(const std::string& path) {
  const ParsedSpec parsed = dmesim::parse_spec_file(path);
  if (!parsed.ok()) {
    for (const auto& i : parsed.issues) {
      std::cout << path << ":" << i.line << ": [" << i.field << "] " << i.message
                << "\n";
    }
    print_error_json("invalid-spec", "spec file failed validation", parsed.issues);
    return 2;
  }
  const auto& spec = parsed.spec;
  std::cout << "valid " << (spec.is_transponder() ? "transponder" : "airborne")
            << " spec";
  if (!spec.experiment.empty()) std::cout << ", experiment " << spec.experiment;
  std::cout << "\n";
  const dmesim::ValidationReport rep =
      spec.is_transponder() ? spec.transponder().validate()
                            : spec.airborne().validate();
  for (const auto& w : rep.warnings)
    std::cout << "warning: [" << w.field << "] " << w.message << "\n";
  return 0;
}

struct McOverrides {
  uint64_t seed = 0;
  uint64_t trials = 0;
  bool seed_set = false;
  bool trials_set = false;
};

int run_with_spec(const std::string& path, const std::string& output,
                  const std::string& format, const McOverrides& mc, int threads,
                  bool is_export) {
  ParsedSpec parsed = dmesim::parse_spec_file(path);
  if (!parsed.ok()) {
    print_error_json("invalid-spec", "spec file failed validation", parsed.issues);
    return 2;
  }
  ExperimentSpec& spec = parsed.spec;
  if (!output.empty()) spec.output_path = output;
  if (mc.seed_set || mc.trials_set) {
    if (!spec.mc) spec.mc = dmesim::McBlock{};
    if (mc.seed_set) spec.mc->seed = mc.seed;
    if (mc.trials_set) spec.mc->trials = mc.trials;
  }
  bool binary = false;
  if (!format.empty()) {
    if (format == "csv") {
      spec.format = OutputFormat::kCsv;
    } else if (format == "json" && !is_export) {
      spec.format = OutputFormat::kJson;
    } else if (format == "bin" && is_export) {
      binary = true;
    } else {
      print_error_json("invalid-flag", "unsupported --format '" + format + "'");
      return 2;
    }
  }
  try {
    std::ofstream file;
    std::ostream* os = open_output(spec.output_path, file, binary);
    if (!os) return 1;
    if (is_export) {
      dmesim::export_mc(spec, *os, binary, threads);
    } else {
      const dmesim::ResultTable table = dmesim::run_experiment(spec, threads);
      if (spec.format == OutputFormat::kCsv)
        dmesim::write_csv(table, *os);
      else
        dmesim::write_json(table, *os);
    }
  } catch (const std::invalid_argument& e) {
    print_error_json("invalid-spec", e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error_json("runtime", e.what());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DME-band secondary spectrum access feasibility toolkit"};
  app.require_subcommand(1);

  std::string spec_path, output, format;
  McOverrides mc;
  int threads = 0;

  CLI::App* run = app.add_subcommand("run", "run an experiment");
  CLI::App* validate =
      app.add_subcommand("validate", "validate a spec file and report all issues");
  CLI::App* mc_export = app.add_subcommand("mc-export", "export raw MC samples");

  for (CLI::App* cmd : {run, mc_export}) {
    cmd->add_option("spec", spec_path, "experiment spec file")->required();
    cmd->add_option("--output", output,
                    "output path (default: spec output_path or stdout)");
    cmd->add_option("--threads", threads, "worker threads (0 = auto)");
    cmd->add_option("--seed", mc.seed, "override Monte Carlo seed");
    cmd->add_option("--trials", mc.trials, "override Monte Carlo trial count");
  }
  run->add_option("--format", format, "csv or json");
  mc_export->add_option("--format", format, "csv or bin");
  validate->add_option("spec", spec_path, "experiment spec file")->required();

  CLI11_PARSE(app, argc, argv);

  const int resolved = resolve_cli_threads(threads);
  if (resolved > 0) omp_set_num_threads(resolved);

  if (validate->parsed()) return cmd_validate(spec_path);
  const CLI::App* active = run->parsed() ? run : mc_export;
  mc.seed_set = active->count("--seed") > 0;
  mc.trials_set = active->count("--trials") > 0;
  return run_with_spec(spec_path, output, format, mc, resolved,
                       mc_export->parsed());
}
