#pragma once

#include <complex>

#include <Eigen/Dense>

#include "manoma/channel.hpp"
#include "manoma/rates.hpp"
#include "manoma/socp.hpp"

namespace manoma {

/// Expansion point of one SCA step. q_bar is in pi-order.
struct ScaState {
  Precoder w_bar;
  Eigen::VectorXd q_bar;

  /// Throws InvalidParameter unless every q_bar entry is positive.
  void validate() const;
};

/// q_bar_j = max(effective SINR of pi_j at (w_bar, m), 1e-8).
ScaState make_sca_state(const CMatrix& h, const Precoder& w_bar, const DecodingMatrix& m,
                        const UserOrder& order, double sigma2);

/// First-order lower bound of |h^H w|^2 / q around (w_bar, q_bar):
///   2 Re(w_bar^H h h^H w) / q_bar - |h^H w_bar|^2 q / q_bar^2.
double taylor_lower_bound(const CVector& h, const CVector& w, double q, const CVector& w_bar,
                          double q_bar);

/// Index helpers for the decision vector [Re vec W; Im vec W; q (pi-order); t].
/// vec W is column-major over natural user columns.
struct ScaLayout {
  int n_antennas = 0;
  int n_users = 0;

  int re(int n, int k) const { return k * n_antennas + n; }
  int im(int n, int k) const { return n_antennas * n_users + k * n_antennas + n; }
  int q(int j) const { return 2 * n_antennas * n_users + j; }
  int t() const { return 2 * n_antennas * n_users + n_users; }
  int nvars() const { return t() + 1; }
};

/// Convex surrogate of the max-min problem at the expansion point `sca`.
SocpProblem build_sca_socp(const CMatrix& h, const DecodingMatrix& m, const UserOrder& order,
                           const ScaState& sca, double sigma2, double p_max);

struct ScaResult {
  Precoder w;
  Eigen::VectorXd q;  // pi-order SINR targets certified at w
  SolveReport report;
};

/// One convex solve. A non-optimal report is passed through together with
/// the solver's best iterate.
ScaResult sca_step(const CMatrix& h, const DecodingMatrix& m, const UserOrder& order,
                   const ScaState& sca, double sigma2, double p_max,
                   const SolverSettings& cfg = {});

/// Regularized zero forcing with SNR-equalizing power loading.
Precoder zf_precoder(const CMatrix& h, double p_max, double sigma2);

}  // namespace manoma
