#include "manoma/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "manoma/error.hpp"

namespace manoma {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> unit_phase(double path_delta, double wavelength) {
  return std::polar(1.0, kTwoPi / wavelength * path_delta);
}

PhysicalAngle sample_half_space_angle(RngStream& rng) {
  // Inverse CDF of cos(theta)/2 on [-pi/2, pi/2] is asin(2r - 1).
  const double r = rng.uniform();
  const double theta = std::asin(std::clamp(2.0 * r - 1.0, -1.0, 1.0));
  const double phi = rng.uniform(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
  return {theta, phi};
}

}  // namespace

VirtualAngle virtual_angles(double theta, double phi) {
  const double ct = std::cos(theta);
  return {ct * std::cos(phi), ct * std::sin(phi), std::sin(theta)};
}

double propagation_delta(const Eigen::Vector3d& pos, const VirtualAngle& a) {
  return pos.x() * a.vtheta + pos.y() * a.vphi + pos.z() * a.vomega;
}

ArrayGeometry ArrayGeometry::upa(int n_antennas, double wavelength) {
  if (n_antennas < 1) throw InvalidParameter("upa: need at least one antenna");
  if (!(wavelength > 0.0)) throw InvalidParameter("upa: wavelength must be positive");
  const int n1 = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_antennas))));
  const int n2 = (n_antennas + n1 - 1) / n1;
  const double spacing = wavelength / 2.0;
  ArrayGeometry g;
  g.wavelength = wavelength;
  g.fpa_positions.resize(n_antennas, 3);
  for (int n = 0; n < n_antennas; ++n) {
    const int col = n % n1;
    const int row = n / n1;
    g.fpa_positions(n, 0) = 0.0;
    g.fpa_positions(n, 1) = (col - (n1 - 1) / 2.0) * spacing;
    g.fpa_positions(n, 2) = (row - (n2 - 1) / 2.0) * spacing;
  }
  return g;
}

CMatrix transmit_frm(const std::vector<VirtualAngle>& tx_angles, const ArrayGeometry& geometry) {
  const auto paths = static_cast<Eigen::Index>(tx_angles.size());
  CMatrix g(paths, geometry.size());
  for (Eigen::Index n = 0; n < geometry.size(); ++n) {
    const Eigen::Vector3d v = geometry.fpa_positions.row(n).transpose();
    for (Eigen::Index l = 0; l < paths; ++l) {
      g(l, n) = unit_phase(propagation_delta(v, tx_angles[l]), geometry.wavelength);
    }
  }
  return g;
}

FieldResponse make_field_response(std::vector<PhysicalAngle> rx, std::vector<PhysicalAngle> tx,
                                  CMatrix prm, const ArrayGeometry& geometry, double distance) {
  if (prm.rows() != static_cast<Eigen::Index>(rx.size()) ||
      prm.cols() != static_cast<Eigen::Index>(tx.size())) {
    throw DimensionError("field response: PRM must be L_r x L_t");
  }
  FieldResponse fr;
  fr.rx_physical = std::move(rx);
  fr.tx_physical = std::move(tx);
  for (const auto& a : fr.rx_physical) fr.rx_angles.push_back(virtual_angles(a));
  for (const auto& a : fr.tx_physical) fr.tx_angles.push_back(virtual_angles(a));
  fr.prm = std::move(prm);
  fr.tx_frm = transmit_frm(fr.tx_angles, geometry);
  fr.distance = distance;
  return fr;
}

Apv Apv::zeros(Eigen::Index users, double region_half) {
  Apv a;
  a.positions = Eigen::MatrixX3d::Zero(users, 3);
  a.region_half = region_half;
  return a;
}

Apv Apv::from_stacked(const Eigen::VectorXd& stacked, double region_half) {
  if (stacked.size() % 3 != 0) throw DimensionError("apv: stacked length must be 3K");
  Apv a;
  const Eigen::Index k = stacked.size() / 3;
  a.positions.resize(k, 3);
  for (Eigen::Index i = 0; i < k; ++i) {
    a.positions.row(i) = stacked.segment<3>(3 * i).transpose();
  }
  a.region_half = region_half;
  return a;
}

Eigen::VectorXd Apv::stacked() const {
  Eigen::VectorXd s(3 * positions.rows());
  for (Eigen::Index i = 0; i < positions.rows(); ++i) {
    s.segment<3>(3 * i) = positions.row(i).transpose();
  }
  return s;
}

bool Apv::within_region(double tol) const {
  return positions.size() == 0 || positions.cwiseAbs().maxCoeff() <= region_half + tol;
}

void ScenarioParams::validate() const {
  if (n_antennas < 1) throw InvalidParameter("n_antennas must be >= 1");
  if (n_users < 1) throw InvalidParameter("n_users must be >= 1");
  if (n_paths < 1) throw InvalidParameter("n_paths must be >= 1");
  if (!(wavelength > 0.0)) throw InvalidParameter("wavelength must be positive");
  if (!(g0 > 0.0)) throw InvalidParameter("g0 must be positive");
  if (!(path_loss_exp > 0.0)) throw InvalidParameter("path_loss_exp must be positive");
  if (!(noise_power > 0.0)) throw InvalidParameter("noise_power must be positive");
  if (!(region_half >= 0.0)) throw InvalidParameter("region must be non-negative");
  if (!(min_distance > 0.0 && min_distance <= max_distance)) {
    throw InvalidParameter("distance range must satisfy 0 < min <= max");
  }
}

CVector receive_frv(const Eigen::Vector3d& u, const FieldResponse& fr, double wavelength) {
  CVector f(fr.rx_paths());
  for (Eigen::Index j = 0; j < fr.rx_paths(); ++j) {
    f[j] = unit_phase(propagation_delta(u, fr.rx_angles[j]), wavelength);
  }
  return f;
}

CVector channel_vector(const Eigen::Vector3d& u, const FieldResponse& fr, double wavelength) {
  const CVector f = receive_frv(u, fr, wavelength);
  // (f^H Sigma G)^T = G^T Sigma^T conj(f)
  return fr.tx_frm.transpose() * (fr.prm.transpose() * f.conjugate());
}

CMatrix channel_matrix(const Apv& apv, const Scenario& sc) {
  if (apv.users() != sc.num_users()) {
    throw DimensionError("channel_matrix: APV has " + std::to_string(apv.users()) +
                         " users, scenario has " + std::to_string(sc.num_users()));
  }
  if (!apv.within_region()) throw RegionError("channel_matrix: APV outside movable region");
  CMatrix h(sc.num_antennas(), sc.num_users());
  for (Eigen::Index k = 0; k < sc.num_users(); ++k) {
    h.col(k) = channel_vector(apv.positions.row(k).transpose(), sc.users[k], sc.wavelength());
  }
  return h;
}

CMatrix normalized_channel_matrix(const Apv& apv, const Scenario& sc) {
  return channel_matrix(apv, sc) / std::sqrt(sc.noise_power);
}

Scenario sample_scenario(const ScenarioParams& p, RngStream& rng) {
  p.validate();
  Scenario sc;
  sc.geometry = ArrayGeometry::upa(p.n_antennas, p.wavelength);
  sc.noise_power = p.noise_power;
  sc.g0 = p.g0;
  sc.path_loss_exp = p.path_loss_exp;
  sc.region_half = p.region_half;
  sc.users.reserve(p.n_users);
  for (int k = 0; k < p.n_users; ++k) {
    const double d = rng.uniform(p.min_distance, p.max_distance);
    const double gain = p.g0 * std::pow(d, -p.path_loss_exp);
    std::vector<PhysicalAngle> rx, tx;
    for (int l = 0; l < p.n_paths; ++l) rx.push_back(sample_half_space_angle(rng));
    for (int l = 0; l < p.n_paths; ++l) tx.push_back(sample_half_space_angle(rng));
    CMatrix prm = CMatrix::Zero(p.n_paths, p.n_paths);
    for (int l = 0; l < p.n_paths; ++l) prm(l, l) = rng.cscg(gain / p.n_paths);
    sc.users.push_back(
        make_field_response(std::move(rx), std::move(tx), std::move(prm), sc.geometry, d));
  }
  return sc;
}

Scenario perturb_fri(const Scenario& sc, double mu, double nu, RngStream& rng) {
  if (mu < 0.0 || nu < 0.0) throw InvalidParameter("perturb_fri: mu and nu must be >= 0");
  Scenario out = sc;
  for (auto& user : out.users) {
    for (auto& a : user.rx_angles) {
      a.vtheta += rng.uniform(-mu / 2.0, mu / 2.0);
      a.vphi += rng.uniform(-mu / 2.0, mu / 2.0);
      a.vomega += rng.uniform(-mu / 2.0, mu / 2.0);
    }
    for (Eigen::Index i = 0; i < user.prm.rows(); ++i) {
      for (Eigen::Index j = 0; j < user.prm.cols(); ++j) {
        const std::complex<double> s = user.prm(i, j);
        if (s == std::complex<double>(0.0, 0.0)) continue;
        user.prm(i, j) = s + std::abs(s) * rng.cscg(nu);
      }
    }
  }
  return out;
}

}  // namespace manoma
