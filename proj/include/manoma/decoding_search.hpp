#pragma once

#include <vector>

#include "manoma/rates.hpp"
#include "manoma/stochastic.hpp"

namespace manoma {

struct AnnealParams {
  double xi = 0.1;
  double temperature = 5.0;

  void validate() const;
};

/// One visited entry of the greedy pass.
struct GreedyStep {
  enum class Outcome { improved, bad_recorded, bad_skipped, rejected };
  int k = 0;
  int j = 0;
  double rate = 0.0;
  Outcome outcome = Outcome::rejected;
};

struct GreedyTrace {
  enum class Final { best_good, best_bad, metropolis_accepted, kept_previous };
  std::vector<GreedyStep> steps;
  int evaluations = 0;
  double r_max = 0.0;
  Final final = Final::kept_previous;
};

/// Single greedy pass over the strict upper triangle (row-major) with
/// annealing-style acceptance of worse candidates. `r_prev` must equal the
/// min rate of `m_prev` under `eval`. One uniform draw is consumed for each
/// non-improving candidate and at most one more for the final Metropolis test.
DecodingMatrix greedy_search(const RateEvaluator& eval, const DecodingMatrix& m_prev,
                             double r_prev, const AnnealParams& params, RngStream& rng,
                             GreedyTrace* trace = nullptr);

DecodingMatrix greedy_search(const CMatrix& h, const Precoder& w, const DecodingMatrix& m_prev,
                             double r_prev, const AnnealParams& params, const UserOrder& order,
                             double sigma2, RngStream& rng, GreedyTrace* trace = nullptr);

/// Best decoding matrix by enumeration of all 2^(K(K-1)/2) candidates.
/// Throws InvalidParameter for K > 5. Ties keep the first candidate in
/// binary-counter order over the row-major upper triangle.
DecodingMatrix exhaustive_search(const RateEvaluator& eval);
DecodingMatrix exhaustive_search(const CMatrix& h, const Precoder& w, const UserOrder& order,
                                 double sigma2);

}  // namespace manoma
