#pragma once

#include <vector>

#include <Eigen/Dense>

#include "manoma/channel.hpp"

namespace manoma {

/// SIC order: pi[k] is the natural index of the user with the k-th largest
/// channel gain (0-based).
struct UserOrder {
  std::vector<int> pi;

  static UserOrder identity(int users);
  int size() const { return static_cast<int>(pi.size()); }
  bool valid() const;
};

/// Adaptive SIC indicator in pi-order. m(k, j) = 1 means user pi_k decodes
/// the message of user pi_j. Unit diagonal, zero strict lower triangle.
struct DecodingMatrix {
  Eigen::MatrixXi m;

  /// SDMA: every other user is interference.
  static DecodingMatrix identity(int users);
  /// Conventional NOMA: all-ones upper triangle.
  static DecodingMatrix fixed_sic(int users);

  int size() const { return static_cast<int>(m.rows()); }
  bool valid() const;
  void flip(int k, int j) { m(k, j) = 1 - m(k, j); }
  bool operator==(const DecodingMatrix& o) const { return m == o.m; }
};

struct Precoder {
  CMatrix w;  // N x K, column k serves natural user k
  double power_budget = 1.0;

  double power() const { return w.squaredNorm(); }
};

struct RateResult {
  Eigen::VectorXd per_user_rates;  // bits/s/Hz, pi-order
  double min_rate = 0.0;
  Eigen::MatrixXd sinr_table;  // (k, j) = SINR at pi_k for pi_j's message, k <= j; 0 below

  /// Rates re-indexed by natural user index.
  Eigen::VectorXd natural_rates(const UserOrder& order) const;
};

/// Descending squared column norm; ties keep the lower natural index first.
UserOrder order_users(const CMatrix& h);

/// Gain table g(k, i) = |h_{pi_k}^H w_{pi_i}|^2 in pi-order.
Eigen::MatrixXd cross_gains(const CMatrix& h, const CMatrix& w, const UserOrder& order);

/// SINR at pi_k for its own message (0-based k).
double sinr_self(const CMatrix& h, const Precoder& w, const DecodingMatrix& m,
                 const UserOrder& order, double sigma2, int k);

/// SINR at pi_k for the message of pi_j, k < j. Throws std::out_of_range otherwise.
double sinr_cross(const CMatrix& h, const Precoder& w, const DecodingMatrix& m,
                  const UserOrder& order, double sigma2, int k, int j);

RateResult achievable_rates(const CMatrix& h, const Precoder& w, const DecodingMatrix& m,
                            const UserOrder& order, double sigma2);

/// Minimum achievable rate over all users.
double min_rate(const CMatrix& h, const Precoder& w, const DecodingMatrix& m,
                const UserOrder& order, double sigma2);

/// Caches the gain table for a fixed (H, W) so the decoding matrix can be
/// varied cheaply.
class RateEvaluator {
 public:
  RateEvaluator(const CMatrix& h, const CMatrix& w, const UserOrder& order, double sigma2);

  int users() const { return static_cast<int>(gains_.rows()); }
  double sinr_self(const DecodingMatrix& m, int k) const;
  double sinr_cross(const DecodingMatrix& m, int k, int j) const;
  /// Effective SINR of pi_j: min over decoders with m(k, j) = 1.
  double effective_sinr(const DecodingMatrix& m, int j) const;
  RateResult rates(const DecodingMatrix& m) const;
  double min_rate(const DecodingMatrix& m) const;

  const Eigen::MatrixXd& gains() const { return gains_; }

 private:
  Eigen::MatrixXd gains_;
  double sigma2_;
};

}  // namespace manoma
