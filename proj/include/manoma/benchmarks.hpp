#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "manoma/ao.hpp"
#include "manoma/channel.hpp"
#include "manoma/ho.hpp"
#include "manoma/rates.hpp"

namespace manoma {

enum class Scheme { ma_noma, ma_noma_fixed_sic, mcp_noma, fpa_noma, ma_sdma, fpa_sdma };

inline constexpr std::array<Scheme, 6> kAllSchemes = {
    Scheme::ma_noma, Scheme::ma_noma_fixed_sic, Scheme::mcp_noma,
    Scheme::fpa_noma, Scheme::ma_sdma,          Scheme::fpa_sdma};

/// "MA-NOMA", "MA-NOMA-fixed-SIC", "MCP-NOMA", "FPA-NOMA", "MA-SDMA", "FPA-SDMA".
std::string to_string(Scheme s);
/// Case-insensitive; throws InvalidParameter on unknown names.
Scheme parse_scheme(const std::string& name);
/// SDMA schemes use the zero-forcing baseline rather than the SCA precoder.
bool uses_zf_baseline(Scheme s);

struct SchemeResult {
  Scheme scheme = Scheme::ma_noma;
  double min_rate = 0.0;
  Eigen::VectorXd per_user_rates;  // natural user order
  Apv apv;
  Precoder precoder;
  DecodingMatrix decoding;
  UserOrder order;
  double wallclock = 0.0;  // seconds
  std::uint64_t seed = 0;
};

/// Per-user maximizer of ||h_k(u)||^2 over the grid {i * step : |i * step| <= A/2}^3.
/// Scan order is x outer, then y, then z; ties keep the first point.
Apv mcp_positions(const Scenario& sc, double grid_step);
/// Reference implementation of mcp_positions without OpenMP.
Apv mcp_positions_serial(const Scenario& sc, double grid_step);

/// Min rate with zero forcing and M = I at `apv` (noise-normalized channel).
RateResult zf_rates(const Scenario& sc, const Apv& apv, double p_max);

struct SchemeOptions {
  /// MCP grid step as a fraction of the wavelength.
  double mcp_step_wavelengths = 1.0 / 20.0;
};

SchemeResult run_scheme(Scheme scheme, const Scenario& sc, const HoParams& ho, const AoParams& ao,
                        std::uint64_t seed, const SchemeOptions& opts = {});

struct FriStats {
  std::vector<double> rates;  // one min rate per trial
  double mean = 0.0;
  double median = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Keeps (apv, W, M, pi) fixed and re-evaluates the min rate on `trials`
/// perturbed copies of the scenario. Trial t draws from rng.fork(t).
FriStats fri_experiment(const Scenario& sc, const Apv& apv, const Precoder& w,
                        const DecodingMatrix& m, const UserOrder& order, double mu, double nu,
                        int trials, const RngStream& rng);

}  // namespace manoma
