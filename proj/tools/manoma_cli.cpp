#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "manoma/experiment.hpp"
#include "manoma/ho.hpp"

namespace {

struct Common {
  std::string config;
  std::string profile = "full";
  std::uint64_t seed = 1;
  std::string out;
  int threads = 0;
  bool timing = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON config applied on top of the profile");
  app->add_option("--profile", c.profile, "Base parameter set")
      ->check(CLI::IsMember({"desk", "full"}));
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--out", c.out, "Output CSV (stdout when omitted)");
  app->add_option("--threads", c.threads, "OpenMP threads (0 keeps the runtime default)")
      ->check(CLI::NonNegativeNumber);
  app->add_flag("--timing", c.timing, "Add a wallclock column (breaks byte-identity)");
}

manoma::ScenarioConfig resolve(const Common& c) {
  manoma::ScenarioConfig cfg = manoma::profile_config(c.profile);
  if (!c.config.empty()) cfg = manoma::load_config(c.config, cfg);
  if (c.threads > 0) omp_set_num_threads(c.threads);
  return cfg;
}

// Owns the output file when --out is given.
struct Output {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream = &std::cout;

  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw std::runtime_error("cannot open " + path);
    stream = file.get();
  }
};

std::vector<manoma::Scheme> parse_schemes(const std::vector<std::string>& names) {
  std::vector<manoma::Scheme> out;
  if (names.empty()) return {manoma::kAllSchemes.begin(), manoma::kAllSchemes.end()};
  for (const auto& n : names) out.push_back(manoma::parse_scheme(n));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Movable-antenna NOMA simulator"};
  app.require_subcommand(1);

  Common run_c, sweep_c, conv_c, fri_c;
  std::string run_scheme = "MA-NOMA";
  std::string run_axis = "none";
  double run_value = 0.0;
  auto* run = app.add_subcommand("run", "One scheme on one scenario");
  add_common(run, run_c);
  run->add_option("--scheme", run_scheme, "Scheme name");
  run->add_option("--axis", run_axis, "Axis parameter to override (re-running a sweep row)");
  run->add_option("--values", run_value, "Value for --axis");

  std::string sweep_axis;
  std::vector<double> sweep_values;
  std::vector<std::string> sweep_schemes;
  int sweep_trials = 20;
  std::string sweep_jsonl;
  auto* sweep = app.add_subcommand("sweep", "Schemes over one axis, many trials");
  add_common(sweep, sweep_c);
  sweep->add_option("--axis", sweep_axis, "users|antennas|paths|region|power|mu|nu")->required();
  sweep->add_option("--values", sweep_values, "Axis values")->required()->delimiter(',');
  sweep->add_option("--scheme", sweep_schemes, "Schemes (default: all six)")->delimiter(',');
  sweep->add_option("--trials", sweep_trials, "Scenarios per value")->check(CLI::PositiveNumber);
  sweep->add_option("--jsonl", sweep_jsonl, "Also write one JSON record per row");

  auto* conv = app.add_subcommand("convergence", "Improved vs original HO best fitness");
  add_common(conv, conv_c);

  std::string fri_scheme = "MA-NOMA";
  std::string fri_axis = "mu";
  std::vector<double> fri_values = {0.0, 0.1, 0.2};
  int fri_trials = 0;
  auto* fri = app.add_subcommand("fri", "Robustness to imperfect field-response information");
  add_common(fri, fri_c);
  fri->add_option("--scheme", fri_scheme, "Scheme name");
  fri->add_option("--axis", fri_axis, "mu|nu");
  fri->add_option("--values", fri_values, "Perturbation levels")->delimiter(',');
  fri->add_option("--trials", fri_trials, "Perturbations per level (default: fri_trials)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const manoma::SweepAxis axis = manoma::parse_axis(run_axis);
      const manoma::ScenarioConfig cfg = manoma::apply_axis(resolve(run_c), axis, run_value);
      manoma::SweepRow row = manoma::run_row(cfg, manoma::parse_scheme(run_scheme), run_c.seed);
      row.axis = axis;
      row.value = run_value;
      Output out(run_c.out);
      *out.stream << manoma::sweep_csv_header(run_c.timing) << '\n'
                  << manoma::sweep_csv_line(row, run_c.timing) << '\n';
      return row.status == "ok" ? 0 : 2;
    }
    if (sweep->parsed()) {
      const manoma::ScenarioConfig cfg = resolve(sweep_c);
      manoma::SweepSpec spec;
      spec.axis = manoma::parse_axis(sweep_axis);
      spec.values = sweep_values;
      spec.trials = sweep_trials;
      spec.schemes = parse_schemes(sweep_schemes);
      Output out(sweep_c.out);
      std::unique_ptr<std::ofstream> jsonl;
      manoma::SweepSinks sinks{out.stream, nullptr, sweep_c.timing};
      if (!sweep_jsonl.empty()) {
        jsonl = std::make_unique<std::ofstream>(sweep_jsonl);
        if (!*jsonl) throw std::runtime_error("cannot open " + sweep_jsonl);
        sinks.jsonl = jsonl.get();
      }
      manoma::run_sweep(cfg, spec, sweep_c.seed, sinks);
      return 0;
    }
    if (conv->parsed()) {
      const manoma::ScenarioConfig cfg = resolve(conv_c);
      Output out(conv_c.out);
      manoma::write_convergence_csv(*out.stream, manoma::convergence_run(cfg, conv_c.seed));
      return 0;
    }
    if (fri->parsed()) {
      const manoma::ScenarioConfig cfg = resolve(fri_c);
      const int trials = fri_trials > 0 ? fri_trials : cfg.fri_trials;
      Output out(fri_c.out);
      manoma::write_fri_csv(*out.stream,
                            manoma::fri_run(cfg, manoma::parse_scheme(fri_scheme),
                                            manoma::parse_axis(fri_axis), fri_values, trials,
                                            fri_c.seed));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
