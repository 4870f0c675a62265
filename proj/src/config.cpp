#include "manoma/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

namespace manoma {

using nlohmann::json;

namespace {

void require(bool ok, const char* field, const std::string& msg) {
  if (!ok) throw ConfigRangeError(field, msg);
}

template <typename T>
std::function<void(const json&)> setter(ScenarioConfig& cfg, T ScenarioConfig::*member,
                                        const std::string& name) {
  return [&cfg, member, name](const json& v) {
    try {
      cfg.*member = v.get<T>();
    } catch (const json::exception&) {
      throw ConfigParseError(name + ": wrong type");
    }
  };
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

void ScenarioConfig::finalize() {
  require(n_antennas >= 1, "n_antennas", "must be >= 1");
  require(n_users >= 1, "n_users", "must be >= 1");
  require(n_paths >= 1, "n_paths", "must be >= 1");
  require(wavelength > 0.0, "wavelength", "must be > 0");
  require(std::isfinite(g0_db), "g0_db", "must be finite");
  require(zeta > 0.0, "zeta", "must be > 0");
  require(std::isfinite(noise_dbm), "noise_dbm", "must be finite");
  require(region_wavelengths >= 0.0, "region_wavelengths", "must be >= 0");
  require(std::isfinite(p_max_dbm), "p_max_dbm", "must be finite");
  require(xi >= 0.0, "xi", "must be >= 0");
  require(alpha > 0.0 && alpha < 1.0, "alpha", "must be in (0, 1)");
  require(eps1 > 0.0, "eps1", "must be > 0");
  require(t0 > eps1, "t0", "must exceed eps1");
  require(eps2 > 0.0, "eps2", "must be > 0");
  require(n_hippos >= 2, "n_hippos", "must be >= 2");
  require(beta > 0.0 && beta <= 2.0, "beta", "must be in (0, 2]");
  require(i_max >= 1, "i_max", "must be >= 1");
  require(min_distance > 0.0, "min_distance", "must be > 0");
  require(max_distance >= min_distance, "max_distance", "must be >= min_distance");
  require(mcp_step_wavelengths > 0.0, "mcp_step_wavelengths", "must be > 0");
  require(fri_trials >= 1, "fri_trials", "must be >= 1");
  require(mu >= 0.0, "mu", "must be >= 0");
  require(nu >= 0.0, "nu", "must be >= 0");
  g0 = db_to_linear(g0_db);
  noise_power = dbm_to_watts(noise_dbm);
  p_max = dbm_to_watts(p_max_dbm);
  region = region_wavelengths * wavelength;
}

ScenarioParams ScenarioConfig::scenario_params() const {
  ScenarioParams p;
  p.n_antennas = n_antennas;
  p.n_users = n_users;
  p.n_paths = n_paths;
  p.wavelength = wavelength;
  p.g0 = g0;
  p.path_loss_exp = zeta;
  p.noise_power = noise_power;
  p.region_half = region / 2.0;
  p.min_distance = min_distance;
  p.max_distance = max_distance;
  return p;
}

AoParams ScenarioConfig::ao_params() const {
  AoParams p;
  p.t0 = t0;
  p.alpha = alpha;
  p.eps1 = eps1;
  p.eps2 = eps2;
  p.xi = xi;
  p.p_max = p_max;
  return p;
}

HoParams ScenarioConfig::ho_params() const {
  HoParams p = HoParams::for_region(region / 2.0);
  p.n_hippos = n_hippos;
  p.max_iters = i_max;
  p.beta = beta;
  p.seed_origin = seed_origin;
  p.predator_surrogate = predator_surrogate;
  return p;
}

ScenarioConfig profile_config(const std::string& name) {
  ScenarioConfig cfg;
  if (name == "desk") {
    cfg.n_antennas = 2;
    cfg.n_users = 3;
    cfg.n_paths = 4;
    cfg.n_hippos = 8;
    cfg.i_max = 25;
  } else if (name != "full") {
    throw ConfigRangeError("profile", "unknown profile '" + name + "' (desk|full)");
  }
  cfg.finalize();
  return cfg;
}

ScenarioConfig config_from_string(const std::string& text, ScenarioConfig base) {
  ScenarioConfig cfg = base;
  if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigParseError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigParseError("config: top level must be an object");

    std::map<std::string, std::function<void(const json&)>> fields = {
        {"n_antennas", setter(cfg, &ScenarioConfig::n_antennas, "n_antennas")},
        {"n_users", setter(cfg, &ScenarioConfig::n_users, "n_users")},
        {"n_paths", setter(cfg, &ScenarioConfig::n_paths, "n_paths")},
        {"wavelength", setter(cfg, &ScenarioConfig::wavelength, "wavelength")},
        {"g0_db", setter(cfg, &ScenarioConfig::g0_db, "g0_db")},
        {"zeta", setter(cfg, &ScenarioConfig::zeta, "zeta")},
        {"noise_dbm", setter(cfg, &ScenarioConfig::noise_dbm, "noise_dbm")},
        {"region_wavelengths",
         setter(cfg, &ScenarioConfig::region_wavelengths, "region_wavelengths")},
        {"p_max_dbm", setter(cfg, &ScenarioConfig::p_max_dbm, "p_max_dbm")},
        {"xi", setter(cfg, &ScenarioConfig::xi, "xi")},
        {"alpha", setter(cfg, &ScenarioConfig::alpha, "alpha")},
        {"t0", setter(cfg, &ScenarioConfig::t0, "t0")},
        {"eps1", setter(cfg, &ScenarioConfig::eps1, "eps1")},
        {"eps2", setter(cfg, &ScenarioConfig::eps2, "eps2")},
        {"n_hippos", setter(cfg, &ScenarioConfig::n_hippos, "n_hippos")},
        {"beta", setter(cfg, &ScenarioConfig::beta, "beta")},
        {"i_max", setter(cfg, &ScenarioConfig::i_max, "i_max")},
        {"min_distance", setter(cfg, &ScenarioConfig::min_distance, "min_distance")},
        {"max_distance", setter(cfg, &ScenarioConfig::max_distance, "max_distance")},
        {"mcp_step_wavelengths",
         setter(cfg, &ScenarioConfig::mcp_step_wavelengths, "mcp_step_wavelengths")},
        {"seed_origin", setter(cfg, &ScenarioConfig::seed_origin, "seed_origin")},
        {"predator_surrogate",
         setter(cfg, &ScenarioConfig::predator_surrogate, "predator_surrogate")},
        {"fri_trials", setter(cfg, &ScenarioConfig::fri_trials, "fri_trials")},
        {"mu", setter(cfg, &ScenarioConfig::mu, "mu")},
        {"nu", setter(cfg, &ScenarioConfig::nu, "nu")},
    };
    for (const auto& [key, value] : j.items()) {
      const auto it = fields.find(key);
      if (it == fields.end()) throw ConfigParseError("config: unknown field '" + key + "'");
      it->second(value);
    }
  }
  cfg.finalize();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_string(ss.str(), std::move(base));
}

std::string config_to_json(const ScenarioConfig& c) {
  const json j = {
      {"n_antennas", c.n_antennas},
      {"n_users", c.n_users},
      {"n_paths", c.n_paths},
      {"wavelength", c.wavelength},
      {"g0_db", c.g0_db},
      {"zeta", c.zeta},
      {"noise_dbm", c.noise_dbm},
      {"region_wavelengths", c.region_wavelengths},
      {"p_max_dbm", c.p_max_dbm},
      {"xi", c.xi},
      {"alpha", c.alpha},
      {"t0", c.t0},
      {"eps1", c.eps1},
      {"eps2", c.eps2},
      {"n_hippos", c.n_hippos},
      {"beta", c.beta},
      {"i_max", c.i_max},
      {"min_distance", c.min_distance},
      {"max_distance", c.max_distance},
      {"mcp_step_wavelengths", c.mcp_step_wavelengths},
      {"seed_origin", c.seed_origin},
      {"predator_surrogate", c.predator_surrogate},
      {"fri_trials", c.fri_trials},
      {"mu", c.mu},
      {"nu", c.nu},
  };
  return j.dump(2);
}

}  // namespace manoma
