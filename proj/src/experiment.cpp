#include "manoma/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "manoma/error.hpp"

#ifndef MANOMA_BUILD_ID
#define MANOMA_BUILD_ID "unknown"
#endif

namespace manoma {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string joined(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += num(v[i]);
  }
  return s;
}

std::string csv_safe(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ' ';
  }
  return s;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void emit(const SweepRow& row, const SweepSinks& sinks) {
  if (sinks.csv) *sinks.csv << sweep_csv_line(row, sinks.timing) << '\n' << std::flush;
  if (sinks.jsonl) *sinks.jsonl << sweep_json_line(row, sinks.timing) << '\n' << std::flush;
}

double degraded_mean(const ScenarioConfig& cfg, const SweepRow& design, SweepAxis axis,
                     double value) {
  const double mu = axis == SweepAxis::mu ? value : cfg.mu;
  const double nu = axis == SweepAxis::nu ? value : cfg.nu;
  const Scenario sc = scenario_for_seed(cfg, design.row_seed);
  const SchemeResult& r = design.result;
  return fri_experiment(sc, r.apv, r.precoder, r.decoding, r.order, mu, nu, cfg.fri_trials,
                        RngStream(design.row_seed, kFriStream))
      .mean;
}

}  // namespace

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::none: return "none";
    case SweepAxis::users: return "users";
    case SweepAxis::antennas: return "antennas";
    case SweepAxis::paths: return "paths";
    case SweepAxis::region: return "region";
    case SweepAxis::power: return "power";
    case SweepAxis::mu: return "mu";
    case SweepAxis::nu: return "nu";
  }
  return "none";
}

SweepAxis parse_axis(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (SweepAxis a : {SweepAxis::none, SweepAxis::users, SweepAxis::antennas, SweepAxis::paths,
                      SweepAxis::region, SweepAxis::power, SweepAxis::mu, SweepAxis::nu}) {
    if (to_string(a) == lower) return a;
  }
  throw InvalidParameter("unknown axis '" + name +
                         "' (users|antennas|paths|region|power|mu|nu)");
}

bool is_fri_axis(SweepAxis a) { return a == SweepAxis::mu || a == SweepAxis::nu; }

void SweepSpec::validate() const {
  if (axis == SweepAxis::none) throw InvalidParameter("SweepSpec: axis must be set");
  if (values.empty()) throw InvalidParameter("SweepSpec: values must be nonempty");
  if (trials < 1) throw InvalidParameter("SweepSpec: trials must be >= 1");
  if (schemes.empty()) throw InvalidParameter("SweepSpec: schemes must be nonempty");
}

ScenarioConfig apply_axis(ScenarioConfig cfg, SweepAxis axis, double value) {
  auto as_int = [&](const char* field) {
    if (value != static_cast<double>(static_cast<int>(value))) {
      throw ConfigRangeError(field, "must be an integer, got " + num(value));
    }
    return static_cast<int>(value);
  };
  switch (axis) {
    case SweepAxis::none: break;
    case SweepAxis::users: cfg.n_users = as_int("n_users"); break;
    case SweepAxis::antennas: cfg.n_antennas = as_int("n_antennas"); break;
    case SweepAxis::paths: cfg.n_paths = as_int("n_paths"); break;
    case SweepAxis::region: cfg.region_wavelengths = value; break;
    case SweepAxis::power: cfg.p_max_dbm = value; break;
    case SweepAxis::mu: cfg.mu = value; break;
    case SweepAxis::nu: cfg.nu = value; break;
  }
  cfg.finalize();
  return cfg;
}

Scenario scenario_for_seed(const ScenarioConfig& cfg, std::uint64_t row_seed) {
  RngStream rng(row_seed, kScenarioStream);
  return sample_scenario(cfg.scenario_params(), rng);
}

std::string build_id() { return MANOMA_BUILD_ID; }

std::uint64_t sweep_row_seed(std::uint64_t seed, SweepAxis axis, std::size_t value_index,
                             int trial) {
  const std::size_t idx = is_fri_axis(axis) ? 0 : value_index;
  return derive_key(seed, idx, static_cast<std::uint64_t>(trial));
}

SweepRow run_row(const ScenarioConfig& cfg, Scheme scheme, std::uint64_t row_seed) {
  SweepRow row;
  row.scheme = scheme;
  row.seed = row_seed;
  row.row_seed = row_seed;
  row.result.scheme = scheme;
  row.result.seed = row_seed;
  try {
    const Scenario sc = scenario_for_seed(cfg, row_seed);
    SchemeOptions opts;
    opts.mcp_step_wavelengths = cfg.mcp_step_wavelengths;
    row.result = run_scheme(scheme, sc, cfg.ho_params(), cfg.ao_params(), row_seed, opts);
    row.min_rate = row.result.min_rate;
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, const SweepSpec& spec,
                                std::uint64_t seed, const SweepSinks& sinks) {
  spec.validate();
  const int n_schemes = static_cast<int>(spec.schemes.size());
  const int n_values = static_cast<int>(spec.values.size());
  const int per_value = n_schemes * spec.trials;
  const int n_rows = n_values * per_value;
  std::vector<SweepRow> rows(static_cast<std::size_t>(n_rows));
  if (sinks.csv) *sinks.csv << sweep_csv_header(sinks.timing) << '\n' << std::flush;

  // Row r = (value v, scheme s, trial t), value-major.
  auto cell = [&](int r, int& v, int& s, int& t) {
    v = r / per_value;
    s = (r % per_value) / spec.trials;
    t = r % spec.trials;
  };

  const bool fri = is_fri_axis(spec.axis);
  std::vector<SweepRow> designs;
  if (fri) {
    // The design does not depend on the perturbation level.
    designs.resize(static_cast<std::size_t>(per_value));
#pragma omp parallel for schedule(dynamic, 1)
    for (int d = 0; d < per_value; ++d) {
      const int s = d / spec.trials;
      const int t = d % spec.trials;
      designs[static_cast<std::size_t>(d)] =
          run_row(cfg, spec.schemes[static_cast<std::size_t>(s)],
                  sweep_row_seed(seed, spec.axis, 0, t));
    }
  }

#pragma omp parallel for ordered schedule(dynamic, 1)
  for (int r = 0; r < n_rows; ++r) {
    int v = 0, s = 0, t = 0;
    cell(r, v, s, t);
    const double value = spec.values[static_cast<std::size_t>(v)];
    SweepRow row;
    if (fri) {
      row = designs[static_cast<std::size_t>(s * spec.trials + t)];
      if (row.status == "ok") {
        try {
          row.min_rate = degraded_mean(cfg, row, spec.axis, value);
        } catch (const std::exception& e) {
          row.status = std::string("error: ") + e.what();
        }
      }
    } else {
      const std::uint64_t rs = sweep_row_seed(seed, spec.axis, static_cast<std::size_t>(v), t);
      try {
        row = run_row(apply_axis(cfg, spec.axis, value), spec.schemes[static_cast<std::size_t>(s)],
                      rs);
      } catch (const std::exception& e) {
        row.scheme = spec.schemes[static_cast<std::size_t>(s)];
        row.row_seed = rs;
        row.status = std::string("error: ") + e.what();
      }
    }
    row.axis = spec.axis;
    row.value = value;
    row.trial = t;
    row.seed = seed;
    rows[static_cast<std::size_t>(r)] = row;
#pragma omp ordered
    emit(rows[static_cast<std::size_t>(r)], sinks);
  }
  return rows;
}

std::string sweep_csv_header(bool timing) {
  std::string h =
      "build_id,seed,row_seed,axis,value,scheme,trial,status,precoder,min_rate,per_user_rates,apv";
  if (timing) h += ",wallclock";
  return h;
}

std::string sweep_csv_line(const SweepRow& row, bool timing) {
  std::ostringstream os;
  os << build_id() << ',' << row.seed << ',' << row.row_seed << ',' << to_string(row.axis) << ','
     << num(row.value) << ',' << to_string(row.scheme) << ',' << row.trial << ','
     << csv_safe(row.status) << ',' << (uses_zf_baseline(row.scheme) ? "zf-baseline" : "sca")
     << ',' << num(row.min_rate) << ',' << joined(row.result.per_user_rates) << ','
     << joined(row.result.apv.stacked());
  if (timing) os << ',' << num(row.result.wallclock);
  return os.str();
}

std::string sweep_json_line(const SweepRow& row, bool timing) {
  nlohmann::json j = {
      {"build_id", build_id()},
      {"seed", row.seed},
      {"row_seed", row.row_seed},
      {"axis", to_string(row.axis)},
      {"value", row.value},
      {"scheme", to_string(row.scheme)},
      {"trial", row.trial},
      {"status", row.status},
      {"precoder", uses_zf_baseline(row.scheme) ? "zf-baseline" : "sca"},
      {"min_rate", row.min_rate},
      {"per_user_rates", to_std(row.result.per_user_rates)},
      {"apv", to_std(row.result.apv.stacked())},
  };
  if (timing) j["wallclock"] = row.result.wallclock;
  return j.dump();
}

ConvergenceResult convergence_run(const ScenarioConfig& cfg, std::uint64_t seed) {
  const Scenario sc = scenario_for_seed(cfg, seed);
  HoParams ho = cfg.ho_params();
  const AoParams ao = cfg.ao_params();
  ConvergenceResult out;
  ho.split = SplitRule::fitness;
  out.improved = optimize(sc, ho, ao, seed).history;
  ho.split = SplitRule::index;
  out.original = optimize(sc, ho, ao, seed).history;
  return out;
}

void write_convergence_csv(std::ostream& out, const ConvergenceResult& r) {
  out << "iteration,improved_ho,original_ho\n";
  const std::size_t n =
      std::min(r.improved.best_fitness_per_iter.size(), r.original.best_fitness_per_iter.size());
  for (std::size_t i = 0; i < n; ++i) {
    out << i + 1 << ',' << num(r.improved.best_fitness_per_iter[i]) << ','
        << num(r.original.best_fitness_per_iter[i]) << '\n';
  }
}

FriRun fri_run(const ScenarioConfig& cfg, Scheme scheme, SweepAxis axis,
               const std::vector<double>& values, int trials, std::uint64_t seed) {
  if (!is_fri_axis(axis)) throw InvalidParameter("fri_run: axis must be mu or nu");
  if (values.empty()) throw InvalidParameter("fri_run: values must be nonempty");
  FriRun out;
  out.axis = axis;
  out.values = values;
  out.design = run_row(cfg, scheme, seed);
  if (out.design.status != "ok") throw InvalidParameter("fri_run: " + out.design.status);
  const Scenario sc = scenario_for_seed(cfg, seed);
  const SchemeResult& r = out.design.result;
  for (double v : values) {
    const double mu = axis == SweepAxis::mu ? v : cfg.mu;
    const double nu = axis == SweepAxis::nu ? v : cfg.nu;
    out.stats.push_back(fri_experiment(sc, r.apv, r.precoder, r.decoding, r.order, mu, nu, trials,
                                       RngStream(seed, kFriStream)));
  }
  return out;
}

void write_fri_csv(std::ostream& out, const FriRun& r) {
  out << "build_id,seed,scheme,axis,value,trials,perfect_rate,mean,median,q10,q90,min,max\n";
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    const FriStats& s = r.stats[i];
    out << build_id() << ',' << r.design.row_seed << ',' << to_string(r.design.scheme) << ','
        << to_string(r.axis) << ',' << num(r.values[i]) << ',' << s.rates.size() << ','
        << num(r.design.min_rate) << ',' << num(s.mean) << ',' << num(s.median) << ','
        << num(s.q10) << ',' << num(s.q90) << ',' << num(s.min) << ',' << num(s.max) << '\n';
  }
}

}  // namespace manoma
