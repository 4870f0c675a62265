#include "manoma/decoding_search.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "manoma/error.hpp"

namespace manoma {

void AnnealParams::validate() const {
  if (!(xi >= 0.0)) throw InvalidParameter("AnnealParams: xi must be >= 0");
  if (!(temperature > 0.0)) throw InvalidParameter("AnnealParams: temperature must be > 0");
}

DecodingMatrix greedy_search(const RateEvaluator& eval, const DecodingMatrix& m_prev,
                             double r_prev, const AnnealParams& params, RngStream& rng,
                             GreedyTrace* trace) {
  params.validate();
  const int users = eval.users();
  if (m_prev.size() != users) throw DimensionError("greedy_search: M size != K");
  const double p_bad = std::clamp(params.xi * params.temperature, 0.0, 1.0);

  DecodingMatrix bar = m_prev;
  double r_bar = r_prev;
  double r_good = 0.0;
  double r_bad = 0.0;
  std::optional<DecodingMatrix> m_good;
  std::optional<DecodingMatrix> m_bad;
  GreedyTrace local;
  GreedyTrace& tr = trace != nullptr ? *trace : local;
  tr = GreedyTrace{};

  for (int k = 0; k + 1 < users; ++k) {
    for (int j = k + 1; j < users; ++j) {
      bar.flip(k, j);
      const double r_temp = eval.min_rate(bar);
      ++tr.evaluations;
      GreedyStep step{k, j, r_temp, GreedyStep::Outcome::improved};
      if (r_temp > r_bar) {
        r_bar = r_temp;
        r_good = r_temp;
        m_good = bar;
      } else {
        if (rng.uniform() < p_bad) {
          step.outcome = GreedyStep::Outcome::bad_skipped;
          if (r_temp > r_bad) {
            r_bad = r_temp;
            m_bad = bar;
            step.outcome = GreedyStep::Outcome::bad_recorded;
          }
        } else {
          step.outcome = GreedyStep::Outcome::rejected;
        }
        bar.flip(k, j);
      }
      tr.steps.push_back(step);
    }
  }

  if (!m_good && !m_bad) return m_prev;
  const bool take_good = m_good && (!m_bad || r_good >= r_bad);
  const double r_max = take_good ? r_good : r_bad;
  const DecodingMatrix& m_max = take_good ? *m_good : *m_bad;
  tr.r_max = r_max;
  if (r_max > r_prev) {
    tr.final = take_good ? GreedyTrace::Final::best_good : GreedyTrace::Final::best_bad;
    return m_max;
  }
  if (rng.uniform() < std::exp((r_max - r_prev) / params.temperature)) {
    tr.final = GreedyTrace::Final::metropolis_accepted;
    return m_max;
  }
  tr.final = GreedyTrace::Final::kept_previous;
  return m_prev;
}

DecodingMatrix greedy_search(const CMatrix& h, const Precoder& w, const DecodingMatrix& m_prev,
                             double r_prev, const AnnealParams& params, const UserOrder& order,
                             double sigma2, RngStream& rng, GreedyTrace* trace) {
  return greedy_search(RateEvaluator(h, w.w, order, sigma2), m_prev, r_prev, params, rng, trace);
}

DecodingMatrix exhaustive_search(const RateEvaluator& eval) {
  const int users = eval.users();
  if (users > 5) throw InvalidParameter("exhaustive_search: K must be <= 5");
  std::vector<std::pair<int, int>> slots;
  for (int k = 0; k + 1 < users; ++k) {
    for (int j = k + 1; j < users; ++j) slots.emplace_back(k, j);
  }
  DecodingMatrix best = DecodingMatrix::identity(users);
  double best_rate = eval.min_rate(best);
  const unsigned count = 1u << slots.size();
  for (unsigned mask = 1; mask < count; ++mask) {
    DecodingMatrix m = DecodingMatrix::identity(users);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (mask & (1u << s)) m.m(slots[s].first, slots[s].second) = 1;
    }
    const double r = eval.min_rate(m);
    if (r > best_rate) {
      best_rate = r;
      best = m;
    }
  }
  return best;
}

DecodingMatrix exhaustive_search(const CMatrix& h, const Precoder& w, const UserOrder& order,
                                 double sigma2) {
  return exhaustive_search(RateEvaluator(h, w.w, order, sigma2));
}

}  // namespace manoma
