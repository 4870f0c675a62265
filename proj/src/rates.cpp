#include "manoma/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "manoma/error.hpp"

namespace manoma {

UserOrder UserOrder::identity(int users) {
  UserOrder o;
  o.pi.resize(users);
  std::iota(o.pi.begin(), o.pi.end(), 0);
  return o;
}

bool UserOrder::valid() const {
  std::vector<int> sorted = pi;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < size(); ++i) {
    if (sorted[i] != i) return false;
  }
  return true;
}

DecodingMatrix DecodingMatrix::identity(int users) {
  return {Eigen::MatrixXi::Identity(users, users)};
}

DecodingMatrix DecodingMatrix::fixed_sic(int users) {
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(users, users);
  m.triangularView<Eigen::Upper>().setOnes();
  return {m};
}

bool DecodingMatrix::valid() const {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const int v = m(k, j);
      if (v != 0 && v != 1) return false;
      if (k == j && v != 1) return false;
      if (k > j && v != 0) return false;
    }
  }
  return true;
}

Eigen::VectorXd RateResult::natural_rates(const UserOrder& order) const {
  Eigen::VectorXd out(per_user_rates.size());
  for (int k = 0; k < order.size(); ++k) out[order.pi[k]] = per_user_rates[k];
  return out;
}

UserOrder order_users(const CMatrix& h) {
  const int users = static_cast<int>(h.cols());
  UserOrder o = UserOrder::identity(users);
  const Eigen::VectorXd norms = h.colwise().squaredNorm().transpose();
  std::stable_sort(o.pi.begin(), o.pi.end(),
                   [&](int a, int b) { return norms[a] > norms[b]; });
  return o;
}

Eigen::MatrixXd cross_gains(const CMatrix& h, const CMatrix& w, const UserOrder& order) {
  if (h.cols() != w.cols() || h.rows() != w.rows()) {
    throw DimensionError("cross_gains: H and W must both be N x K");
  }
  if (order.size() != h.cols()) throw DimensionError("cross_gains: order size != K");
  // Natural-index table first, then permute into pi-order.
  const CMatrix hw = h.adjoint() * w;
  const int users = order.size();
  Eigen::MatrixXd g(users, users);
  for (int k = 0; k < users; ++k) {
    for (int i = 0; i < users; ++i) g(k, i) = std::norm(hw(order.pi[k], order.pi[i]));
  }
  return g;
}

RateEvaluator::RateEvaluator(const CMatrix& h, const CMatrix& w, const UserOrder& order,
                             double sigma2)
    : gains_(cross_gains(h, w, order)), sigma2_(sigma2) {}

double RateEvaluator::sinr_self(const DecodingMatrix& m, int k) const {
  const int users = this->users();
  if (k < 0 || k >= users) throw std::out_of_range("sinr_self: index out of range");
  double den = sigma2_;
  for (int i = 0; i < users; ++i) den += gains_(k, i) * (1 - m.m(k, i));
  return gains_(k, k) / den;
}

double RateEvaluator::sinr_cross(const DecodingMatrix& m, int k, int j) const {
  const int users = this->users();
  if (k < 0 || j >= users || k >= j) {
    throw std::out_of_range("sinr_cross: need 0 <= k < j < K, got k=" + std::to_string(k) +
                            " j=" + std::to_string(j));
  }
  double den = sigma2_;
  for (int i = 0; i < j; ++i) den += gains_(k, i);
  for (int i = j; i < users; ++i) den += gains_(k, i) * (1 - m.m(k, i));
  return gains_(k, j) / den;
}

double RateEvaluator::effective_sinr(const DecodingMatrix& m, int j) const {
  double best = sinr_self(m, j);
  for (int k = 0; k < j; ++k) {
    if (m.m(k, j) == 1) best = std::min(best, sinr_cross(m, k, j));
  }
  return best;
}

RateResult RateEvaluator::rates(const DecodingMatrix& m) const {
  const int users = this->users();
  if (m.size() != users) throw DimensionError("rates: decoding matrix size != K");
  RateResult r;
  r.per_user_rates.resize(users);
  r.sinr_table = Eigen::MatrixXd::Zero(users, users);
  for (int j = 0; j < users; ++j) {
    r.sinr_table(j, j) = sinr_self(m, j);
    double gamma = r.sinr_table(j, j);
    for (int k = 0; k < j; ++k) {
      r.sinr_table(k, j) = sinr_cross(m, k, j);
      if (m.m(k, j) == 1) gamma = std::min(gamma, r.sinr_table(k, j));
    }
    r.per_user_rates[j] = std::log2(1.0 + gamma);
  }
  r.min_rate = users > 0 ? r.per_user_rates.minCoeff() : 0.0;
  return r;
}

double RateEvaluator::min_rate(const DecodingMatrix& m) const {
  double worst = std::numeric_limits<double>::infinity();
  for (int j = 0; j < users(); ++j) worst = std::min(worst, effective_sinr(m, j));
  return std::log2(1.0 + worst);
}

double sinr_self(const CMatrix& h, const Precoder& w, const DecodingMatrix& m,
                 const UserOrder& order, double sigma2, int k) {
  return RateEvaluator(h, w.w, order, sigma2).sinr_self(m, k);
}

double sinr_cross(const CMatrix& h, const Precoder& w, const DecodingMatrix& m,
                  const UserOrder& order, double sigma2, int k, int j) {
  return RateEvaluator(h, w.w, order, sigma2).sinr_cross(m, k, j);
}

RateResult achievable_rates(const CMatrix& h, const Precoder& w, const DecodingMatrix& m,
                            const UserOrder& order, double sigma2) {
  return RateEvaluator(h, w.w, order, sigma2).rates(m);
}

double min_rate(const CMatrix& h, const Precoder& w, const DecodingMatrix& m,
                const UserOrder& order, double sigma2) {
  return RateEvaluator(h, w.w, order, sigma2).min_rate(m);
}

}  // namespace manoma
