#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "manoma/stochastic.hpp"

namespace manoma {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Direction cosines of a propagation path (x, y, z components).
struct VirtualAngle {
  double vtheta = 0.0;
  double vphi = 0.0;
  double vomega = 0.0;
};

/// Elevation / azimuth pair in radians.
struct PhysicalAngle {
  double theta = 0.0;
  double phi = 0.0;
};

/// (cos t cos p, cos t sin p, sin t).
VirtualAngle virtual_angles(double theta, double phi);
inline VirtualAngle virtual_angles(const PhysicalAngle& a) {
  return virtual_angles(a.theta, a.phi);
}

/// Path-length difference of a path at `pos` relative to the local origin.
double propagation_delta(const Eigen::Vector3d& pos, const VirtualAngle& angle);

/// Fixed-position array at the base station.
struct ArrayGeometry {
  Eigen::MatrixX3d fpa_positions;  // N x 3, meters
  double wavelength = 0.01;

  Eigen::Index size() const { return fpa_positions.rows(); }

  /// Uniform planar array in the y-z plane, half-wavelength spacing,
  /// ceil(sqrt(N)) columns, centered on the origin. For N that is not a
  /// rectangle the first N slots in row-major order are used.
  static ArrayGeometry upa(int n_antennas, double wavelength);
};

/// Multi-path descriptor of one user's channel.
struct FieldResponse {
  // Physical angles as sampled; the virtual forms below are authoritative and
  // may deviate from them after FRI perturbation.
  std::vector<PhysicalAngle> rx_physical;
  std::vector<PhysicalAngle> tx_physical;
  std::vector<VirtualAngle> rx_angles;
  std::vector<VirtualAngle> tx_angles;
  CMatrix prm;     // L_r x L_t path-response matrix
  CMatrix tx_frm;  // L_t x N transmit field-response matrix
  double distance = 0.0;

  Eigen::Index rx_paths() const { return prm.rows(); }
  Eigen::Index tx_paths() const { return prm.cols(); }
};

/// Transmit field-response matrix: entry (l, n) = exp(j 2 pi / lambda * rho_l(v_n)).
CMatrix transmit_frm(const std::vector<VirtualAngle>& tx_angles, const ArrayGeometry& geometry);

/// Builds a FieldResponse, deriving virtual angles and the transmit FRM.
FieldResponse make_field_response(std::vector<PhysicalAngle> rx, std::vector<PhysicalAngle> tx,
                                  CMatrix prm, const ArrayGeometry& geometry, double distance);

/// Stacked antenna positions of all K users.
struct Apv {
  Eigen::MatrixX3d positions;  // K x 3, meters
  double region_half = 0.0;    // A / 2

  static Apv zeros(Eigen::Index users, double region_half);
  static Apv from_stacked(const Eigen::VectorXd& stacked, double region_half);
  /// [x1 y1 z1 x2 y2 z2 ...]
  Eigen::VectorXd stacked() const;
  Eigen::Index users() const { return positions.rows(); }
  bool within_region(double tol = 1e-12) const;
};

struct Scenario {
  ArrayGeometry geometry;
  std::vector<FieldResponse> users;
  double noise_power = 1e-11;  // Watts
  double g0 = 1e-4;            // linear reference gain at 1 m
  double path_loss_exp = 2.8;
  double region_half = 0.01;   // A / 2, meters

  Eigen::Index num_users() const { return static_cast<Eigen::Index>(users.size()); }
  Eigen::Index num_antennas() const { return geometry.size(); }
  double wavelength() const { return geometry.wavelength; }
};

/// Parameters for drawing a random scenario.
struct ScenarioParams {
  int n_antennas = 4;
  int n_users = 6;
  int n_paths = 10;
  double wavelength = 0.01;
  double g0 = 1e-4;  // linear
  double path_loss_exp = 2.8;
  double noise_power = 1e-11;  // Watts
  double region_half = 0.01;   // meters
  double min_distance = 20.0;
  double max_distance = 100.0;

  void validate() const;
};

/// Receive FRV: entry j = exp(j 2 pi / lambda * rho_j(u)).
CVector receive_frv(const Eigen::Vector3d& u, const FieldResponse& fr, double wavelength);

/// h = (f^H Sigma G)^T.
CVector channel_vector(const Eigen::Vector3d& u, const FieldResponse& fr, double wavelength);

/// N x K matrix whose column k is user k's channel at apv row k.
/// Throws RegionError if any coordinate leaves [-A/2, A/2].
CMatrix channel_matrix(const Apv& apv, const Scenario& sc);

/// channel_matrix scaled by 1/sigma so every SINR formula runs with unit noise.
CMatrix normalized_channel_matrix(const Apv& apv, const Scenario& sc);

/// Draws a geometric multi-path scenario. Distances uniform on
/// [min_distance, max_distance]; diagonal PRM with CN(0, g0 d^-zeta / L)
/// entries; elevation via sin(theta) = 2r - 1 and azimuth uniform, so the
/// joint density is cos(theta) / (2 pi) on the front half-space.
Scenario sample_scenario(const ScenarioParams& params, RngStream& rng);

/// Imperfect field-response information: every receive virtual-angle
/// component is shifted by U[-mu/2, mu/2]; every nonzero path coefficient s
/// becomes s + |s| e with e ~ CN(0, nu). Transmit side is untouched.
Scenario perturb_fri(const Scenario& sc, double mu, double nu, RngStream& rng);

}  // namespace manoma
