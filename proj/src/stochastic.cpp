#include "manoma/stochastic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "manoma/error.hpp"

namespace manoma {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_key(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(mix64(a) ^ (b + 0x632be59bd9b4e019ULL));
}

std::uint64_t derive_key(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
  return derive_key(derive_key(a, b), c);
}

std::uint64_t derive_key(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                         std::uint64_t d) noexcept {
  return derive_key(derive_key(a, b, c), d);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(derive_key(seed, stream_id)) {}

RngStream RngStream::fork(std::uint64_t child_id) const {
  return RngStream(seed_, derive_key(stream_id_, child_id));
}

double RngStream::uniform(double lo, double hi) {
  if (lo > hi) {
    throw InvalidParameter("uniform: lo (" + std::to_string(lo) + ") > hi (" +
                           std::to_string(hi) + ")");
  }
  if (lo == hi) return lo;
  // generate_canonical is in [0, 1); the affine map keeps the value in [lo, hi].
  const double r = std::generate_canonical<double, 64>(engine_);
  const double v = lo + r * (hi - lo);
  return v > hi ? hi : v;
}

int RngStream::uniform_int(int lo, int hi) {
  if (lo > hi) throw InvalidParameter("uniform_int: lo > hi");
  return std::uniform_int_distribution<int>(lo, hi)(engine_);
}

double RngStream::normal() { return normal_(engine_); }

std::complex<double> RngStream::cscg(double variance) {
  if (variance < 0.0) {
    throw InvalidParameter("cscg: negative variance " + std::to_string(variance));
  }
  const double s = std::sqrt(variance / 2.0);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

Eigen::VectorXd RngStream::uniform_vector(Eigen::Index n, double lo, double hi) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
  return v;
}

double levy_sigma_u(double beta) {
  if (!(beta > 0.0 && beta <= 2.0)) {
    throw InvalidParameter("levy: beta must lie in (0, 2], got " + std::to_string(beta));
  }
  // sin(pi) in double is 1.2e-16, which the 1/beta root would turn into 1e-8.
  const double s = beta == 2.0 ? 0.0 : std::sin(std::numbers::pi * beta / 2.0);
  const double num = std::tgamma(1.0 + beta) * s;
  const double den =
      std::tgamma((1.0 + beta) / 2.0) * beta * std::pow(2.0, (beta - 1.0) / 2.0);
  return std::pow(num / den, 1.0 / beta);
}

Eigen::MatrixXd levy_matrix(RngStream& rng, Eigen::Index rows, Eigen::Index cols,
                            double beta) {
  const double sigma_u = levy_sigma_u(beta);
  if (rows < 1 || cols < 1) throw InvalidParameter("levy: rows and cols must be >= 1");
  constexpr double kFloor = std::numeric_limits<double>::epsilon();
  Eigen::MatrixXd out(rows, cols);
  // Column-major fill: R_u entry then R_v entry for each element.
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double ru = rng.uniform();
      const double rv = rng.uniform();
      const double den = std::max(std::pow(std::abs(rv), 1.0 / beta), kFloor);
      out(r, c) = 0.05 * (ru * sigma_u) / den;
    }
  }
  return out;
}

}  // namespace manoma
