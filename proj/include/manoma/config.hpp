#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "manoma/ao.hpp"
#include "manoma/channel.hpp"
#include "manoma/error.hpp"
#include "manoma/ho.hpp"

namespace manoma {

/// Malformed configuration text.
class ConfigParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field holds a value outside its allowed range. what() names the field.
class ConfigRangeError : public InvalidParameter {
 public:
  ConfigRangeError(const std::string& field, const std::string& msg)
      : InvalidParameter(field + ": " + msg), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Simulation parameters. dB quantities are converted to linear units once,
/// at load time; the linear members are what the rest of the code reads.
struct ScenarioConfig {
  int n_antennas = 4;
  int n_users = 6;
  int n_paths = 10;
  double wavelength = 0.01;          // m
  double g0_db = -40.0;
  double zeta = 2.8;
  double noise_dbm = -80.0;
  double region_wavelengths = 2.0;   // A / lambda
  double p_max_dbm = 30.0;
  double xi = 0.1;
  double alpha = 0.8;
  double t0 = 5.0;
  double eps1 = 1e-3;
  double eps2 = 1e-3;
  int n_hippos = 50;
  double beta = 1.5;
  int i_max = 100;
  double min_distance = 20.0;
  double max_distance = 100.0;
  double mcp_step_wavelengths = 1.0 / 20.0;
  bool seed_origin = true;
  bool predator_surrogate = false;
  int fri_trials = 50;
  double mu = 0.0;
  double nu = 0.0;

  // Linear values derived by finalize().
  double g0 = 1e-4;
  double noise_power = 1e-11;  // W
  double p_max = 1.0;          // W
  double region = 0.02;        // A, m

  /// Range checks then unit conversion. Throws ConfigRangeError.
  void finalize();

  ScenarioParams scenario_params() const;
  AoParams ao_params() const;
  HoParams ho_params() const;
};

double db_to_linear(double db);
double dbm_to_watts(double dbm);

/// "full" (default parameters) or "desk" (N=2, K=3, L=4, N_H=8, I_max=25).
ScenarioConfig profile_config(const std::string& name);

/// Applies the JSON object in `text` on top of `base`. Empty or
/// whitespace-only text leaves `base` unchanged. Unknown keys are rejected.
ScenarioConfig config_from_string(const std::string& text, ScenarioConfig base = {});

/// Reads `path` and applies it on top of `base`.
ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base = {});

/// JSON dump of the raw (pre-conversion) fields.
std::string config_to_json(const ScenarioConfig& cfg);

}  // namespace manoma
