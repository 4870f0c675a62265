#include <doctest.h>

#include <cmath>
#include <numbers>

#include "manoma/channel.hpp"
#include "manoma/error.hpp"
#include "manoma/scenario_io.hpp"
#include "oracles.hpp"

using namespace manoma;

namespace {

constexpr double kLambda = 0.01;

FieldResponse single_path(const VirtualAngle& rx, int n_ant) {
  FieldResponse fr;
  fr.rx_angles = {rx};
  fr.tx_angles = {VirtualAngle{1.0, 0.0, 0.0}};
  fr.rx_physical = {PhysicalAngle{}};
  fr.tx_physical = {PhysicalAngle{}};
  fr.prm = CMatrix::Identity(1, 1);
  fr.tx_frm = CMatrix::Ones(1, n_ant);
  fr.distance = 50.0;
  return fr;
}

Scenario draw(int n, int k, int l, std::uint64_t seed) {
  ScenarioParams p;
  p.n_antennas = n;
  p.n_users = k;
  p.n_paths = l;
  p.region_half = kLambda;
  RngStream rng(seed);
  return sample_scenario(p, rng);
}

}  // namespace

TEST_CASE("virtual angles at the axis, zenith and diagonal") {
  auto v = virtual_angles(0.0, 0.0);
  CHECK(v.vtheta == doctest::Approx(1.0));
  CHECK(v.vphi == doctest::Approx(0.0));
  CHECK(v.vomega == doctest::Approx(0.0));
  v = virtual_angles(std::numbers::pi / 2, 0.0);
  CHECK(v.vtheta == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(v.vomega == doctest::Approx(1.0));
  v = virtual_angles(std::numbers::pi / 4, std::numbers::pi / 4);
  CHECK(v.vtheta == doctest::Approx(0.5));
  CHECK(v.vphi == doctest::Approx(0.5));
  CHECK(v.vomega == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("virtual angles lie on the unit sphere") {
  RngStream rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto v = virtual_angles(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
    CHECK(std::abs(v.vtheta * v.vtheta + v.vphi * v.vphi + v.vomega * v.vomega - 1.0) < 1e-9);
  }
}

TEST_CASE("propagation delta is the dot product") {
  CHECK(propagation_delta(Eigen::Vector3d::Zero(), VirtualAngle{0.3, 0.4, 0.5}) == 0.0);
  CHECK(propagation_delta({0, 0, kLambda / 2}, VirtualAngle{0, 0, 1}) ==
        doctest::Approx(kLambda / 2));
  RngStream rng(2);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d p = rng.uniform_vector(3, -1, 1);
    const VirtualAngle a{rng.uniform(), rng.uniform(), rng.uniform()};
    const double expected = p[0] * a.vtheta + p[1] * a.vphi + p[2] * a.vomega;
    CHECK(propagation_delta(p, a) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("receive FRV at the origin and at half a wavelength") {
  const FieldResponse fr = single_path(VirtualAngle{0, 0, 1}, 2);
  const CVector f0 = receive_frv(Eigen::Vector3d::Zero(), fr, kLambda);
  CHECK(std::abs(f0[0] - 1.0) < 1e-15);
  const CVector f1 = receive_frv({0, 0, kLambda / 2}, fr, kLambda);
  CHECK(std::abs(f1[0] + 1.0) < 1e-12);
}

TEST_CASE("receive FRV matches the per-path scalar exponential") {
  const Scenario sc = draw(4, 2, 5, 7);
  RngStream rng(8);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Vector3d u = rng.uniform_vector(3, -kLambda, kLambda);
    const auto& fr = sc.users[0];
    const CVector f = receive_frv(u, fr, kLambda);
    for (std::size_t j = 0; j < fr.rx_angles.size(); ++j) {
      const auto& a = fr.rx_angles[j];
      const double rho = u[0] * a.vtheta + u[1] * a.vphi + u[2] * a.vomega;
      const std::complex<double> e = std::polar(1.0, 2 * std::numbers::pi / kLambda * rho);
      CHECK(std::abs(f[static_cast<Eigen::Index>(j)] - e) < 1e-12);
      CHECK(std::abs(std::abs(f[static_cast<Eigen::Index>(j)]) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("transmit FRM entries have unit modulus") {
  const Scenario sc = draw(6, 3, 4, 3);
  for (const auto& u : sc.users) {
    CHECK((u.tx_frm.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("coherent sum at the origin") {
  const int l = 3, n = 4;
  FieldResponse fr;
  for (int i = 0; i < l; ++i) {
    fr.rx_angles.push_back(virtual_angles(0.1 * i, 0.2 * i));
    fr.tx_angles.push_back(virtual_angles(0.0, 0.0));
  }
  fr.prm = CMatrix::Identity(l, l);
  fr.tx_frm = CMatrix::Ones(l, n);
  const CVector h = channel_vector(Eigen::Vector3d::Zero(), fr, kLambda);
  CHECK((h - CVector::Constant(n, static_cast<double>(l))).norm() < 1e-12);
}

TEST_CASE("single path channel norm does not depend on position") {
  const Scenario sc = draw(4, 1, 1, 5);
  const double n0 = channel_vector(Eigen::Vector3d::Zero(), sc.users[0], kLambda).norm();
  RngStream rng(6);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d u = rng.uniform_vector(3, -kLambda, kLambda);
    CHECK(channel_vector(u, sc.users[0], kLambda).norm() == doctest::Approx(n0).epsilon(1e-12));
  }
}

TEST_CASE("channel vector matches a triple-loop product") {
  const Scenario sc = draw(4, 2, 5, 9);
  RngStream rng(10);
  for (int t = 0; t < 10; ++t) {
    const Eigen::Vector3d u = rng.uniform_vector(3, -kLambda, kLambda);
    const auto& fr = sc.users[1];
    const CVector f = receive_frv(u, fr, kLambda);
    const CVector h = channel_vector(u, fr, kLambda);
    for (Eigen::Index n = 0; n < sc.num_antennas(); ++n) {
      std::complex<double> s = 0.0;
      for (Eigen::Index i = 0; i < fr.prm.rows(); ++i) {
        for (Eigen::Index j = 0; j < fr.prm.cols(); ++j) {
          s += std::conj(f[i]) * fr.prm(i, j) * fr.tx_frm(j, n);
        }
      }
      CHECK(std::abs(h[n] - s) < 1e-12 * (1.0 + std::abs(s)));
    }
  }
}

TEST_CASE("channel vector is Lipschitz in the antenna position") {
  const Scenario sc = draw(4, 1, 6, 13);
  const auto& fr = sc.users[0];
  const double smax = fr.prm.cwiseAbs().maxCoeff();
  const double l = static_cast<double>(fr.prm.rows());
  RngStream rng(14);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Vector3d u = rng.uniform_vector(3, -kLambda, kLambda);
    const Eigen::Vector3d du = rng.uniform_vector(3, -1e-4, 1e-4);
    const CVector d = channel_vector(u + du, fr, kLambda) - channel_vector(u, fr, kLambda);
    const double bound = l * smax * 2 * std::numbers::pi * du.norm() / kLambda;
    CHECK(d.cwiseAbs().maxCoeff() <= bound * (1 + 1e-9));
  }
}

TEST_CASE("channel matrix columns, permutation and region check") {
  Scenario sc = draw(3, 3, 4, 15);
  Apv apv = Apv::zeros(3, sc.region_half);
  apv.positions.row(1) << 0.001, -0.002, 0.003;
  const CMatrix h = channel_matrix(apv, sc);
  for (Eigen::Index k = 0; k < 3; ++k) {
    const CVector col = channel_vector(apv.positions.row(k).transpose(), sc.users[k], kLambda);
    CHECK((h.col(k) - col).norm() == 0.0);
  }
  Scenario swapped = sc;
  std::swap(swapped.users[0], swapped.users[2]);
  Apv apv2 = apv;
  apv2.positions.row(0) = apv.positions.row(2);
  apv2.positions.row(2) = apv.positions.row(0);
  const CMatrix h2 = channel_matrix(apv2, swapped);
  CHECK((h2.col(0) - h.col(2)).norm() == 0.0);
  CHECK((h2.col(2) - h.col(0)).norm() == 0.0);

  apv.positions(0, 0) = sc.region_half * 1.5;
  CHECK_THROWS_AS(channel_matrix(apv, sc), RegionError);
}

TEST_CASE("normalized channel scales by one over sigma") {
  const Scenario sc = draw(2, 2, 3, 16);
  const Apv apv = Apv::zeros(2, sc.region_half);
  const CMatrix raw = channel_matrix(apv, sc);
  const CMatrix nrm = normalized_channel_matrix(apv, sc);
  CHECK((nrm * std::sqrt(sc.noise_power) - raw).norm() < 1e-12 * raw.norm());
}

TEST_CASE("sampled distances and diagonal path responses") {
  ScenarioParams p;
  p.n_users = 200;
  RngStream rng(17);
  const Scenario sc = sample_scenario(p, rng);
  for (const auto& u : sc.users) {
    CHECK(u.distance >= 20.0);
    CHECK(u.distance <= 100.0);
    CHECK(u.prm.rows() == p.n_paths);
    const CMatrix off = u.prm - CMatrix(u.prm.diagonal().asDiagonal());
    CHECK(off.norm() == 0.0);
  }
}

TEST_CASE("path response power matches the path loss") {
  ScenarioParams p;
  p.n_users = 1;
  RngStream rng(18);
  double ratio = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const Scenario sc = sample_scenario(p, rng);
    const auto& u = sc.users[0];
    const double c2 = p.g0 * std::pow(u.distance, -p.path_loss_exp);
    ratio += u.prm.diagonal().squaredNorm() / c2;
  }
  CHECK(std::abs(ratio / draws - 1.0) < 0.03);
}

TEST_CASE("average channel gain does not depend on the path count") {
  auto mean_gain = [](int l) {
    ScenarioParams p;
    p.n_users = 1;
    p.n_paths = l;
    p.min_distance = p.max_distance = 50.0;
    RngStream rng(19);
    double g = 0.0;
    for (int i = 0; i < 4000; ++i) {
      const Scenario sc = sample_scenario(p, rng);
      g += sc.users[0].prm.diagonal().squaredNorm();
    }
    return g / 4000;
  };
  CHECK(mean_gain(2) == doctest::Approx(mean_gain(12)).epsilon(0.06));
}

TEST_CASE("elevation samples follow the cosine density") {
  ScenarioParams p;
  p.n_users = 1;
  p.n_paths = 1;
  RngStream rng(20);
  // Equal-probability bins under CDF (1 + sin t) / 2.
  const int bins = 10, draws = 20000;
  std::vector<int> count(bins, 0);
  for (int i = 0; i < draws; ++i) {
    const Scenario sc = sample_scenario(p, rng);
    const double t = sc.users[0].rx_physical[0].theta;
    const int b = std::min(bins - 1, static_cast<int>((1 + std::sin(t)) / 2 * bins));
    ++count[static_cast<std::size_t>(b)];
  }
  double chi2 = 0.0;
  const double e = static_cast<double>(draws) / bins;
  for (int c : count) chi2 += (c - e) * (c - e) / e;
  CHECK(chi2 < 21.67);  // chi-square, 9 dof, 1% level
}

TEST_CASE("perturbation with zero error leaves the scenario unchanged") {
  const Scenario sc = draw(4, 3, 5, 21);
  RngStream rng(22);
  const Scenario p = perturb_fri(sc, 0.0, 0.0, rng);
  for (std::size_t k = 0; k < sc.users.size(); ++k) {
    CHECK((p.users[k].prm - sc.users[k].prm).norm() == 0.0);
    for (std::size_t j = 0; j < sc.users[k].rx_angles.size(); ++j) {
      CHECK(p.users[k].rx_angles[j].vtheta == sc.users[k].rx_angles[j].vtheta);
      CHECK(p.users[k].rx_angles[j].vomega == sc.users[k].rx_angles[j].vomega);
    }
  }
}

TEST_CASE("angle perturbation is bounded by half of mu") {
  const Scenario sc = draw(4, 3, 5, 23);
  RngStream rng(24);
  const Scenario p = perturb_fri(sc, 0.2, 0.0, rng);
  for (std::size_t k = 0; k < sc.users.size(); ++k) {
    for (std::size_t j = 0; j < sc.users[k].rx_angles.size(); ++j) {
      const auto& a = sc.users[k].rx_angles[j];
      const auto& b = p.users[k].rx_angles[j];
      CHECK(std::abs(a.vtheta - b.vtheta) <= 0.1);
      CHECK(std::abs(a.vphi - b.vphi) <= 0.1);
      CHECK(std::abs(a.vomega - b.vomega) <= 0.1);
    }
    CHECK((p.users[k].tx_frm - sc.users[k].tx_frm).norm() == 0.0);
  }
}

TEST_CASE("normalized path coefficient error has variance nu") {
  ScenarioParams sp;
  sp.n_users = 1000;
  sp.n_paths = 10;
  RngStream rng(25);
  const Scenario sc = sample_scenario(sp, rng);
  const Scenario p = perturb_fri(sc, 0.0, 0.1, rng);
  double v = 0.0;
  int n = 0;
  for (std::size_t k = 0; k < sc.users.size(); ++k) {
    for (Eigen::Index i = 0; i < sc.users[k].prm.rows(); ++i) {
      const auto s = sc.users[k].prm(i, i);
      v += std::norm((p.users[k].prm(i, i) - s) / std::abs(s));
      ++n;
    }
  }
  CHECK(std::abs(v / n - 0.1) < 0.005);
}

TEST_CASE("scenario JSON round trip is exact") {
  const Scenario sc = draw(4, 3, 5, 26);
  const Scenario back = scenario_from_json(scenario_to_json(sc));
  const Apv apv = Apv::zeros(3, sc.region_half);
  CHECK((channel_matrix(apv, back) - channel_matrix(apv, sc)).norm() == 0.0);
  CHECK(back.noise_power == sc.noise_power);
  CHECK(scenario_to_json(back) == scenario_to_json(sc));
}
