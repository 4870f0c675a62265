#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "manoma/channel.hpp"
#include "manoma/decoding_search.hpp"
#include "manoma/precoding.hpp"
#include "manoma/rates.hpp"
#include "manoma/socp.hpp"
#include "manoma/stochastic.hpp"

namespace manoma {

/// How the decoding matrix evolves inside the loop.
enum class DecodingMode {
  adaptive,   // greedy search every iteration
  fixed_sic,  // all-ones upper triangle, search skipped
  sdma,       // identity, search skipped
};

struct AoParams {
  double t0 = 5.0;
  double alpha = 0.8;
  double eps1 = 1e-3;
  double eps2 = 1e-3;
  double xi = 0.1;
  double p_max = 1.0;  // Watts
  int max_iterations = 100;
  DecodingMode decoding = DecodingMode::adaptive;
  /// Start from a caller-supplied precoder instead of a random draw.
  bool warm_start = false;
  SolverSettings solver;

  void validate() const;
  /// ceil(log_alpha(eps1 / t0)): upper bound on loop iterations.
  int iteration_bound() const;
};

struct AoResult {
  double rate = 0.0;
  Precoder precoder;
  DecodingMatrix decoding;
  UserOrder order;
  int iterations = 0;
  double initial_rate = 0.0;
  std::vector<double> trace;  // min rate after each iteration
  int solver_failures = 0;
};

/// Alternating optimization of W and M at a fixed APV. All rates use the
/// noise-normalized channel, so sigma^2 = 1 internally.
AoResult ao_solve(const Scenario& sc, const Apv& apv, const AoParams& params, RngStream& rng,
                  const Precoder* initial = nullptr);

/// Identifies one fitness evaluation inside a population search.
struct FitnessKey {
  std::uint64_t iteration = 0;
  std::uint64_t hippo = 0;
  std::uint64_t slot = 0;

  std::uint64_t stream() const { return derive_key(iteration, hippo, slot); }
};

/// R(u) = ao_solve(...).rate with W^(0) drawn from the stream
/// (global_seed, key.stream()).
double fitness(const Scenario& sc, const Apv& apv, const AoParams& params,
               std::uint64_t global_seed, const FitnessKey& key);

AoResult ao_solve_keyed(const Scenario& sc, const Apv& apv, const AoParams& params,
                        std::uint64_t global_seed, const FitnessKey& key);

/// CSV with header `iteration,min_rate`; row 0 is the initial point.
void write_ao_trace_csv(std::ostream& out, const AoResult& r);

}  // namespace manoma
