#include <doctest.h>

#include <cmath>
#include <set>

#include "manoma/benchmarks.hpp"
#include "manoma/error.hpp"

using namespace manoma;

namespace {

Scenario draw(int n, int k, int l, std::uint64_t seed) {
  ScenarioParams p;
  p.n_antennas = n;
  p.n_users = k;
  p.n_paths = l;
  p.region_half = 0.01;
  RngStream rng(seed);
  return sample_scenario(p, rng);
}

double power_at(const Scenario& sc, const Apv& apv, int k) {
  return channel_vector(apv.positions.row(k).transpose(), sc.users[static_cast<std::size_t>(k)],
                        sc.wavelength())
      .squaredNorm();
}

HoParams small_ho(const Scenario& sc) {
  HoParams p = HoParams::for_region(sc.region_half);
  p.n_hippos = 4;
  p.max_iters = 3;
  return p;
}

}  // namespace

TEST_CASE("six schemes with round-trip names") {
  std::set<std::string> names;
  for (Scheme s : kAllSchemes) {
    names.insert(to_string(s));
    CHECK(parse_scheme(to_string(s)) == s);
  }
  CHECK(names.size() == 6);
  CHECK(parse_scheme("ma-noma") == Scheme::ma_noma);
  CHECK_THROWS_AS(parse_scheme("PSO"), InvalidParameter);
  CHECK(uses_zf_baseline(Scheme::ma_sdma));
  CHECK(uses_zf_baseline(Scheme::fpa_sdma));
  CHECK_FALSE(uses_zf_baseline(Scheme::mcp_noma));
}

TEST_CASE("single path MCP returns the first grid point") {
  const Scenario sc = draw(2, 3, 1, 1);
  const Apv apv = mcp_positions(sc, 0.001);
  for (int k = 0; k < 3; ++k) {
    CHECK(apv.positions.row(k) == Eigen::RowVector3d::Constant(-0.01));
  }
}

TEST_CASE("MCP is never worse than the origin and refines monotonically") {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const Scenario sc = draw(4, 2, 6, 10 + s);
    const Apv apv = mcp_positions(sc, 0.0005);
    const Apv origin = Apv::zeros(2, sc.region_half);
    for (int k = 0; k < 2; ++k) CHECK(power_at(sc, apv, k) >= power_at(sc, origin, k));
    CHECK(apv.within_region());

    const Scenario one = draw(3, 1, 2, 20 + s);
    const double coarse = power_at(one, mcp_positions(one, 0.005), 0);
    const double fine = power_at(one, mcp_positions(one, 0.0005), 0);
    CHECK(fine >= coarse * (1 - 1e-12));
  }
  CHECK_THROWS_AS(mcp_positions(draw(2, 1, 2, 1), 0.0), InvalidParameter);
}

TEST_CASE("serial and OpenMP MCP agree") {
  const Scenario sc = draw(4, 4, 8, 30);
  CHECK(mcp_positions(sc, 0.0005).positions == mcp_positions_serial(sc, 0.0005).positions);
}

TEST_CASE("FPA-NOMA with one user reaches capacity") {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const Scenario sc = draw(3, 1, 4, 40 + s);
    AoParams ao;
    const SchemeResult r = run_scheme(Scheme::fpa_noma, sc, small_ho(sc), ao, s);
    const double g = normalized_channel_matrix(Apv::zeros(1, sc.region_half), sc).squaredNorm();
    CHECK(std::abs(r.min_rate - std::log2(1 + ao.p_max * g)) < 1e-4);
  }
}

TEST_CASE("scheme structure") {
  const Scenario sc = draw(2, 3, 4, 50);
  const HoParams ho = small_ho(sc);
  const AoParams ao;
  for (Scheme s : kAllSchemes) {
    const SchemeResult r = run_scheme(s, sc, ho, ao, 7);
    CHECK(r.scheme == s);
    CHECK(r.seed == 7);
    CHECK(r.min_rate == doctest::Approx(r.per_user_rates.minCoeff()).epsilon(1e-12));
    CHECK(r.apv.within_region());
    if (uses_zf_baseline(s)) CHECK(r.decoding == DecodingMatrix::identity(3));
    if (s == Scheme::fpa_noma || s == Scheme::fpa_sdma) CHECK(r.apv.positions.isZero(0.0));
    if (s == Scheme::ma_noma_fixed_sic) CHECK(r.decoding == DecodingMatrix::fixed_sic(3));
  }
}

TEST_CASE("MA-NOMA contains the FPA point for a matched seed") {
  for (std::uint64_t s = 1; s <= 4; ++s) {
    const Scenario sc = draw(2, 3, 4, 60 + s);
    const HoParams ho = small_ho(sc);
    const AoParams ao;
    const double ma = run_scheme(Scheme::ma_noma, sc, ho, ao, s).min_rate;
    const double fpa = run_scheme(Scheme::fpa_noma, sc, ho, ao, s).min_rate;
    CHECK(ma >= fpa - 1e-6);
  }
}

TEST_CASE("FRI experiment without error reproduces the design rate") {
  const Scenario sc = draw(2, 3, 4, 70);
  const SchemeResult r = run_scheme(Scheme::mcp_noma, sc, small_ho(sc), AoParams{}, 3);
  const FriStats st =
      fri_experiment(sc, r.apv, r.precoder, r.decoding, r.order, 0.0, 0.0, 5, RngStream(1));
  for (double v : st.rates) CHECK(v == r.min_rate);
  CHECK(st.mean == r.min_rate);
  CHECK_THROWS_AS(
      fri_experiment(sc, r.apv, r.precoder, r.decoding, r.order, 0.1, 0.0, 0, RngStream(1)),
      InvalidParameter);
}

TEST_CASE("FRI degradation grows with the angle error") {
  const Scenario sc = draw(2, 3, 4, 71);
  const SchemeResult r = run_scheme(Scheme::mcp_noma, sc, small_ho(sc), AoParams{}, 4);
  double prev = r.min_rate;
  for (double mu : {0.0, 0.05, 0.1}) {
    const FriStats st =
        fri_experiment(sc, r.apv, r.precoder, r.decoding, r.order, mu, 0.0, 50, RngStream(9));
    for (double v : st.rates) CHECK(v >= 0.0);
    CHECK(st.min <= st.q10);
    CHECK(st.q10 <= st.median);
    CHECK(st.median <= st.q90);
    CHECK(st.q90 <= st.max);
    CHECK(st.mean <= prev * 1.02);
    prev = st.mean;
  }
}

TEST_CASE("FRI statistics do not depend on the thread count") {
  const Scenario sc = draw(2, 3, 4, 72);
  const SchemeResult r = run_scheme(Scheme::fpa_noma, sc, small_ho(sc), AoParams{}, 4);
  const FriStats a =
      fri_experiment(sc, r.apv, r.precoder, r.decoding, r.order, 0.1, 0.05, 20, RngStream(3));
  const FriStats b =
      fri_experiment(sc, r.apv, r.precoder, r.decoding, r.order, 0.1, 0.05, 20, RngStream(3));
  CHECK(a.rates == b.rates);
}
