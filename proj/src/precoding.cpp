#include "manoma/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "manoma/error.hpp"

namespace manoma {

namespace {

constexpr double kMinQ = 1e-8;

// Adds the two real rows of h^H w_k (column k of W) scaled by `scale`.
void add_inner_rows(Eigen::MatrixXd& a, int row, const CVector& h, int k, double scale,
                    const ScaLayout& lay) {
  for (int n = 0; n < lay.n_antennas; ++n) {
    const double hr = h[n].real();
    const double hi = h[n].imag();
    a(row, lay.re(n, k)) += scale * hr;
    a(row, lay.im(n, k)) += scale * hi;
    a(row + 1, lay.re(n, k)) -= scale * hi;
    a(row + 1, lay.im(n, k)) += scale * hr;
  }
}

// Linear form of the Taylor bound in the decision vector:
// T = (2/q_bar) Re(g^H w_k) - |a|^2 q_j / q_bar^2 with a = h^H w_bar_k, g = a h.
Eigen::VectorXd taylor_row(const CVector& h, const CVector& w_bar_k, int k, int j, double q_bar,
                           const ScaLayout& lay) {
  Eigen::VectorXd row = Eigen::VectorXd::Zero(lay.nvars());
  const std::complex<double> a = h.dot(w_bar_k);
  for (int n = 0; n < lay.n_antennas; ++n) {
    const std::complex<double> g = a * h[n];
    row[lay.re(n, k)] = 2.0 * g.real() / q_bar;
    row[lay.im(n, k)] = 2.0 * g.imag() / q_bar;
  }
  row[lay.q(j)] = -std::norm(a) / (q_bar * q_bar);
  return row;
}

// ||[2 sqrt(weight_i) h^H w_i ...; 2 sigma; T - 1]|| <= T + 1, i.e. the
// interference-plus-noise power is at most T. Rows are divided by
// c = sqrt(T at the expansion point) and the T entries by c^2, which leaves
// the feasible set unchanged but keeps every entry O(1) at high SINR.
SocConstraint interference_cone(const CVector& h, const Eigen::VectorXd& weights,
                                Eigen::VectorXd t_row, double t_bar, double sigma,
                                const ScaLayout& lay, const UserOrder& order) {
  const double c2 = t_bar > 1e-300 ? t_bar : 1.0;
  const double root = std::sqrt(c2);
  t_row /= c2;
  const int users = lay.n_users;
  const int rows = 2 * users + 2;
  SocConstraint c;
  c.a = Eigen::MatrixXd::Zero(rows, lay.nvars());
  c.b = Eigen::VectorXd::Zero(rows);
  for (int i = 0; i < users; ++i) {
    if (weights[i] > 0.0) {
      add_inner_rows(c.a, 2 * i, h, order.pi[i], 2.0 * std::sqrt(weights[i]) / root, lay);
    }
  }
  c.b[2 * users] = 2.0 * sigma / root;
  c.a.row(2 * users + 1) = t_row.transpose();
  c.b[2 * users + 1] = -1.0;
  c.c = t_row;
  c.d = 1.0;
  return c;
}

}  // namespace

void ScaState::validate() const {
  for (Eigen::Index j = 0; j < q_bar.size(); ++j) {
    if (!(q_bar[j] > 0.0)) {
      throw InvalidParameter("ScaState: q_bar[" + std::to_string(j) + "] must be > 0");
    }
  }
}

ScaState make_sca_state(const CMatrix& h, const Precoder& w_bar, const DecodingMatrix& m,
                        const UserOrder& order, double sigma2) {
  const RateEvaluator eval(h, w_bar.w, order, sigma2);
  ScaState s;
  s.w_bar = w_bar;
  s.q_bar.resize(eval.users());
  for (int j = 0; j < eval.users(); ++j) s.q_bar[j] = std::max(eval.effective_sinr(m, j), kMinQ);
  return s;
}

double taylor_lower_bound(const CVector& h, const CVector& w, double q, const CVector& w_bar,
                          double q_bar) {
  if (!(q_bar > 0.0)) throw InvalidParameter("taylor_lower_bound: q_bar must be > 0");
  if (h.size() != w.size() || h.size() != w_bar.size()) {
    throw DimensionError("taylor_lower_bound: vector lengths differ");
  }
  const std::complex<double> a = h.dot(w_bar);  // h^H w_bar
  const std::complex<double> b = h.dot(w);      // h^H w
  return 2.0 * (std::conj(a) * b).real() / q_bar - std::norm(a) * q / (q_bar * q_bar);
}

SocpProblem build_sca_socp(const CMatrix& h, const DecodingMatrix& m, const UserOrder& order,
                           const ScaState& sca, double sigma2, double p_max) {
  const int n_ant = static_cast<int>(h.rows());
  const int users = static_cast<int>(h.cols());
  if (m.size() != users || order.size() != users || sca.q_bar.size() != users ||
      sca.w_bar.w.rows() != n_ant || sca.w_bar.w.cols() != users) {
    throw DimensionError("build_sca_socp: inconsistent K or N");
  }
  sca.validate();
  const ScaLayout lay{n_ant, users};
  const double sigma = std::sqrt(sigma2);

  SocpProblem p;
  p.nvars = lay.nvars();
  p.objective = Eigen::VectorXd::Zero(p.nvars);
  p.objective[lay.t()] = 1.0;

  for (int j = 0; j < users; ++j) {
    const CVector hj = h.col(order.pi[j]);
    const CVector wbar = sca.w_bar.w.col(order.pi[j]);
    Eigen::VectorXd weights(users);
    for (int i = 0; i < users; ++i) weights[i] = 1.0 - m.m(j, i);
    p.cones.push_back(interference_cone(hj, weights,
                                        taylor_row(hj, wbar, order.pi[j], j, sca.q_bar[j], lay),
                                        std::norm(hj.dot(wbar)) / sca.q_bar[j], sigma, lay, order));
  }

  for (int k = 0; k < users; ++k) {
    const CVector hk = h.col(order.pi[k]);
    for (int j = k + 1; j < users; ++j) {
      if (m.m(k, j) != 1) continue;
      const CVector wbar = sca.w_bar.w.col(order.pi[j]);
      Eigen::VectorXd weights(users);
      for (int i = 0; i < users; ++i) weights[i] = i < j ? 1.0 : 1.0 - m.m(k, i);
      p.cones.push_back(interference_cone(
          hk, weights, taylor_row(hk, wbar, order.pi[j], j, sca.q_bar[j], lay),
          std::norm(hk.dot(wbar)) / sca.q_bar[j], sigma, lay, order));
    }
  }

  SocConstraint power;
  power.a = Eigen::MatrixXd::Zero(2 * n_ant * users, p.nvars);
  power.a.leftCols(2 * n_ant * users).setIdentity();
  power.b = Eigen::VectorXd::Zero(2 * n_ant * users);
  power.c = Eigen::VectorXd::Zero(p.nvars);
  power.d = std::sqrt(p_max);
  p.cones.push_back(std::move(power));

  for (int j = 0; j < users; ++j) {
    SocConstraint epi;
    epi.a.resize(0, p.nvars);
    epi.c = Eigen::VectorXd::Zero(p.nvars);
    epi.c[lay.q(j)] = 1.0;
    epi.c[lay.t()] = -1.0;
    p.cones.push_back(std::move(epi));
  }
  return p;
}

ScaResult sca_step(const CMatrix& h, const DecodingMatrix& m, const UserOrder& order,
                   const ScaState& sca, double sigma2, double p_max, const SolverSettings& cfg) {
  const SocpProblem p = build_sca_socp(h, m, order, sca, sigma2, p_max);
  const ScaLayout lay{static_cast<int>(h.rows()), static_cast<int>(h.cols())};
  ScaResult out;
  out.report = solve(p, cfg);
  const Eigen::VectorXd& x = out.report.x;
  out.w.power_budget = p_max;
  out.w.w.resize(lay.n_antennas, lay.n_users);
  for (int k = 0; k < lay.n_users; ++k) {
    for (int n = 0; n < lay.n_antennas; ++n) out.w.w(n, k) = {x[lay.re(n, k)], x[lay.im(n, k)]};
  }
  out.q = x.segment(lay.q(0), lay.n_users);
  return out;
}

Precoder zf_precoder(const CMatrix& h, double p_max, double sigma2) {
  const auto n = h.rows();
  const auto users = h.cols();
  if (users < 1) throw DimensionError("zf_precoder: K must be >= 1");
  if (!(p_max > 0.0)) throw InvalidParameter("zf_precoder: p_max must be > 0");

  const Eigen::ColPivHouseholderQR<CMatrix> qr(h);
  const bool full_rank = users <= n && qr.rank() == users;
  const double delta = full_rank ? 0.0 : sigma2 * static_cast<double>(users) / p_max;

  CMatrix gram = h.adjoint() * h;
  gram.diagonal().array() += delta;
  CMatrix d = h * gram.ldlt().solve(CMatrix::Identity(users, users));

  Eigen::VectorXd inv_gain(users);
  for (Eigen::Index k = 0; k < users; ++k) {
    const double nrm = d.col(k).norm();
    if (nrm > 0.0) {
      d.col(k) /= nrm;
    } else {
      d.col(k) = h.col(k).norm() > 0.0 ? CVector(h.col(k).normalized())
                                       : CVector(CVector::Unit(n, 0));
    }
    const double gain = std::norm(h.col(k).dot(d.col(k)));
    inv_gain[k] = 1.0 / std::max(gain, 1e-300);
  }
  // Equal received SNR: p_k proportional to 1/|h_k^H d_k|^2.
  const Eigen::VectorXd powers = p_max * inv_gain / inv_gain.sum();

  Precoder w;
  w.power_budget = p_max;
  w.w = d * powers.cwiseSqrt().asDiagonal();
  return w;
}

}  // namespace manoma
