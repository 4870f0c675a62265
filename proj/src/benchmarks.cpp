#include "manoma/benchmarks.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>

#include "manoma/error.hpp"
#include "manoma/precoding.hpp"

namespace manoma {

namespace {

struct Grid {
  std::vector<double> axis;
  std::size_t size() const { return axis.size() * axis.size() * axis.size(); }
  Eigen::Vector3d point(std::size_t idx) const {
    const std::size_t n = axis.size();
    return {axis[idx / (n * n)], axis[(idx / n) % n], axis[idx % n]};
  }
};

Grid make_grid(double half, double step) {
  if (!(step > 0.0)) throw InvalidParameter("mcp_positions: grid_step must be > 0");
  const auto m = static_cast<long>(std::floor(half / step + 1e-9));
  Grid g;
  for (long i = -m; i <= m; ++i) g.axis.push_back(static_cast<double>(i) * step);
  return g;
}

// ||h(u)||^2 = ||(Sigma G)^T conj(f(u))||^2 with Sigma G precomputed.
double channel_power(const CMatrix& sg_t, const Eigen::Vector3d& u, const FieldResponse& fr,
                     double wavelength) {
  return (sg_t * receive_frv(u, fr, wavelength).conjugate()).squaredNorm();
}

// Values within a relative 1e-12 of the incumbent count as ties, so a
// position-independent norm (single path) resolves to the first grid point
// rather than to whichever point rounding favours.
std::size_t first_argmax(const std::vector<double>& v) {
  constexpr double kTie = 1e-12;
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best] * (1.0 + kTie)) best = i;
  }
  return best;
}

Apv mcp_impl(const Scenario& sc, double grid_step, bool parallel) {
  const Grid grid = make_grid(sc.region_half, grid_step);
  const auto users = sc.num_users();
  Apv apv = Apv::zeros(users, sc.region_half);
  std::vector<double> power(grid.size());
  const auto n = static_cast<long>(grid.size());
  for (Eigen::Index k = 0; k < users; ++k) {
    const FieldResponse& fr = sc.users[static_cast<std::size_t>(k)];
    const CMatrix sg_t = (fr.prm * fr.tx_frm).transpose();
#pragma omp parallel for schedule(static) if (parallel)
    for (long i = 0; i < n; ++i) {
      power[static_cast<std::size_t>(i)] =
          channel_power(sg_t, grid.point(static_cast<std::size_t>(i)), fr, sc.wavelength());
    }
    apv.positions.row(k) = grid.point(first_argmax(power)).transpose();
  }
  return apv;
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::ma_noma:
      return "MA-NOMA";
    case Scheme::ma_noma_fixed_sic:
      return "MA-NOMA-fixed-SIC";
    case Scheme::mcp_noma:
      return "MCP-NOMA";
    case Scheme::fpa_noma:
      return "FPA-NOMA";
    case Scheme::ma_sdma:
      return "MA-SDMA";
    case Scheme::fpa_sdma:
      return "FPA-SDMA";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
  };
  const std::string key = lower(name);
  for (Scheme s : kAllSchemes) {
    if (lower(to_string(s)) == key) return s;
  }
  throw InvalidParameter("unknown scheme '" + name + "'");
}

bool uses_zf_baseline(Scheme s) { return s == Scheme::ma_sdma || s == Scheme::fpa_sdma; }

Apv mcp_positions(const Scenario& sc, double grid_step) { return mcp_impl(sc, grid_step, true); }

Apv mcp_positions_serial(const Scenario& sc, double grid_step) {
  return mcp_impl(sc, grid_step, false);
}

RateResult zf_rates(const Scenario& sc, const Apv& apv, double p_max) {
  const CMatrix h = normalized_channel_matrix(apv, sc);
  const UserOrder order = order_users(h);
  const Precoder w = zf_precoder(h, p_max, 1.0);
  return achievable_rates(h, w, DecodingMatrix::identity(static_cast<int>(h.cols())), order, 1.0);
}

namespace {

void fill_from_ao(SchemeResult& r, const Scenario& sc, const Apv& apv, const AoResult& ao) {
  r.apv = apv;
  r.min_rate = ao.rate;
  r.precoder = ao.precoder;
  r.decoding = ao.decoding;
  r.order = ao.order;
  const CMatrix h = normalized_channel_matrix(apv, sc);
  r.per_user_rates =
      achievable_rates(h, ao.precoder, ao.decoding, ao.order, 1.0).natural_rates(ao.order);
}

void fill_from_zf(SchemeResult& r, const Scenario& sc, const Apv& apv, double p_max) {
  const CMatrix h = normalized_channel_matrix(apv, sc);
  r.apv = apv;
  r.order = order_users(h);
  r.precoder = zf_precoder(h, p_max, 1.0);
  r.decoding = DecodingMatrix::identity(static_cast<int>(h.cols()));
  const RateResult rr = achievable_rates(h, r.precoder, r.decoding, r.order, 1.0);
  r.min_rate = rr.min_rate;
  r.per_user_rates = rr.natural_rates(r.order);
}

}  // namespace

SchemeResult run_scheme(Scheme scheme, const Scenario& sc, const HoParams& ho, const AoParams& ao,
                        std::uint64_t seed, const SchemeOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  SchemeResult r;
  r.scheme = scheme;
  r.seed = seed;
  const FitnessKey origin_key{0, 0, 0};
  const Apv origin = Apv::zeros(sc.num_users(), sc.region_half);

  switch (scheme) {
    case Scheme::ma_noma:
    case Scheme::ma_noma_fixed_sic: {
      AoParams inner = ao;
      inner.decoding =
          scheme == Scheme::ma_noma ? DecodingMode::adaptive : DecodingMode::fixed_sic;
      const HoResult res = optimize(sc, ho, inner, seed);
      fill_from_ao(r, sc, res.apv, res.ao);
      break;
    }
    case Scheme::mcp_noma: {
      const Apv apv = mcp_positions(sc, opts.mcp_step_wavelengths * sc.wavelength());
      fill_from_ao(r, sc, apv, ao_solve_keyed(sc, apv, ao, seed, origin_key));
      break;
    }
    case Scheme::fpa_noma:
      fill_from_ao(r, sc, origin, ao_solve_keyed(sc, origin, ao, seed, origin_key));
      break;
    case Scheme::ma_sdma: {
      const double half = sc.region_half;
      const double p_max = ao.p_max;
      const FitnessFn fn = [&](const Eigen::VectorXd& x, const FitnessKey&) {
        return zf_rates(sc, Apv::from_stacked(x, half), p_max).min_rate;
      };
      const HoRun run = ho_search(3 * sc.num_users(), ho, fn, seed,
                                  [&](const Eigen::VectorXd& x) {
                                    return channel_power_surrogate(sc, x);
                                  });
      fill_from_zf(r, sc, Apv::from_stacked(run.best.position, half), p_max);
      break;
    }
    case Scheme::fpa_sdma:
      fill_from_zf(r, sc, origin, ao.p_max);
      break;
  }
  r.wallclock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

FriStats fri_experiment(const Scenario& sc, const Apv& apv, const Precoder& w,
                        const DecodingMatrix& m, const UserOrder& order, double mu, double nu,
                        int trials, const RngStream& rng) {
  if (trials < 1) throw InvalidParameter("fri_experiment: trials must be >= 1");
  FriStats st;
  st.rates.resize(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < trials; ++t) {
    RngStream local = rng.fork(static_cast<std::uint64_t>(t));
    const Scenario perturbed = perturb_fri(sc, mu, nu, local);
    const CMatrix h = normalized_channel_matrix(apv, perturbed);
    st.rates[static_cast<std::size_t>(t)] = min_rate(h, w, m, order, 1.0);
  }
  std::vector<double> sorted = st.rates;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  double sum = 0.0;
  for (double v : st.rates) sum += v;
  st.mean = sum / static_cast<double>(trials);
  st.median = quantile(0.5);
  st.q10 = quantile(0.1);
  st.q90 = quantile(0.9);
  st.min = sorted.front();
  st.max = sorted.back();
  return st;
}

}  // namespace manoma
