#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace manoma {

/// SplitMix64 finalizer. Used to turn (seed, stream-id) pairs and derived
/// keys into well-mixed 64-bit engine seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Combine several keys into one derived stream id.
std::uint64_t derive_key(std::uint64_t a, std::uint64_t b) noexcept;
std::uint64_t derive_key(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept;
std::uint64_t derive_key(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                         std::uint64_t d) noexcept;

/// Seeded random stream. A stream is single-owner; parallel tasks get their
/// own stream through `fork`, never by sharing one.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Independent sub-stream keyed by `child_id`. Does not advance this stream.
  RngStream fork(std::uint64_t child_id) const;

  /// Uniform real in [lo, hi]. Throws InvalidParameter when lo > hi.
  double uniform(double lo = 0.0, double hi = 1.0);
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  /// Standard normal draw.
  double normal();
  /// Circularly-symmetric complex Gaussian with E|x|^2 = variance.
  std::complex<double> cscg(double variance);

  Eigen::VectorXd uniform_vector(Eigen::Index n, double lo = 0.0, double hi = 1.0);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Scale factor of the Levy step model; depends only on beta in (0, 2].
double levy_sigma_u(double beta);

/// rows x cols matrix of Levy steps:
///   0.05 * (R_u * sigma_u) ./ |R_v|^(1/beta)
/// with R_u, R_v uniform on (0, 1). The denominator is floored at machine
/// epsilon since R_v may land arbitrarily close to zero.
Eigen::MatrixXd levy_matrix(RngStream& rng, Eigen::Index rows, Eigen::Index cols,
                            double beta);

}  // namespace manoma
