#include "manoma/ao.hpp"

#include <cmath>
#include <ostream>

#include "manoma/error.hpp"

namespace manoma {

void AoParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("AoParams: alpha must be in (0, 1)");
  if (!(eps1 > 0.0)) throw InvalidParameter("AoParams: eps1 must be > 0");
  if (!(t0 > eps1)) throw InvalidParameter("AoParams: t0 must exceed eps1");
  if (!(eps2 > 0.0)) throw InvalidParameter("AoParams: eps2 must be > 0");
  if (!(xi >= 0.0)) throw InvalidParameter("AoParams: xi must be >= 0");
  if (!(p_max > 0.0)) throw InvalidParameter("AoParams: p_max must be > 0");
  if (max_iterations < 1) throw InvalidParameter("AoParams: max_iterations must be >= 1");
}

int AoParams::iteration_bound() const {
  return static_cast<int>(std::ceil(std::log(eps1 / t0) / std::log(alpha)));
}

namespace {

DecodingMatrix initial_decoding(DecodingMode mode, int users) {
  return mode == DecodingMode::fixed_sic ? DecodingMatrix::fixed_sic(users)
                                         : DecodingMatrix::identity(users);
}

Precoder random_precoder(Eigen::Index n, Eigen::Index users, double p_max, RngStream& rng) {
  Precoder w;
  w.power_budget = p_max;
  w.w.resize(n, users);
  for (Eigen::Index k = 0; k < users; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) w.w(i, k) = rng.cscg(1.0);
  }
  w.w *= std::sqrt(p_max / w.w.squaredNorm());
  return w;
}

}  // namespace

AoResult ao_solve(const Scenario& sc, const Apv& apv, const AoParams& params, RngStream& rng,
                  const Precoder* initial) {
  params.validate();
  const CMatrix h = normalized_channel_matrix(apv, sc);
  const int users = static_cast<int>(h.cols());
  constexpr double sigma2 = 1.0;

  AoResult res;
  res.order = order_users(h);
  DecodingMatrix m = initial_decoding(params.decoding, users);
  Precoder w = random_precoder(h.rows(), users, params.p_max, rng);
  if (params.warm_start && initial != nullptr && initial->w.rows() == h.rows() &&
      initial->w.cols() == users && initial->w.squaredNorm() > 0.0) {
    w = *initial;
    w.w *= std::sqrt(params.p_max / w.w.squaredNorm());
    w.power_budget = params.p_max;
  }
  double f_prev = RateEvaluator(h, w.w, res.order, sigma2).min_rate(m);
  res.initial_rate = f_prev;

  double temperature = params.t0;
  int t = 1;
  while (temperature > params.eps1 && res.iterations < params.max_iterations) {
    const ScaState state = make_sca_state(h, w, m, res.order, sigma2);
    ScaResult step = sca_step(h, m, res.order, state, sigma2, params.p_max, params.solver);
    if (step.report.status == SolveStatus::optimal) {
      w = std::move(step.w);
    } else {
      ++res.solver_failures;
    }

    const RateEvaluator eval(h, w.w, res.order, sigma2);
    if (params.decoding == DecodingMode::adaptive) {
      m = greedy_search(eval, m, eval.min_rate(m), {params.xi, temperature}, rng);
    }
    const double f = eval.min_rate(m);
    res.trace.push_back(f);
    ++res.iterations;
    if (std::abs(f - f_prev) < params.eps2) break;
    f_prev = f;
    ++t;
    temperature = std::pow(params.alpha, t) * params.t0;
  }

  res.precoder = std::move(w);
  res.decoding = std::move(m);
  res.rate = RateEvaluator(h, res.precoder.w, res.order, sigma2).min_rate(res.decoding);
  return res;
}

AoResult ao_solve_keyed(const Scenario& sc, const Apv& apv, const AoParams& params,
                        std::uint64_t global_seed, const FitnessKey& key) {
  RngStream rng(global_seed, key.stream());
  return ao_solve(sc, apv, params, rng);
}

double fitness(const Scenario& sc, const Apv& apv, const AoParams& params,
               std::uint64_t global_seed, const FitnessKey& key) {
  return ao_solve_keyed(sc, apv, params, global_seed, key).rate;
}

void write_ao_trace_csv(std::ostream& out, const AoResult& r) {
  const auto old = out.precision(17);
  out << "iteration,min_rate\n0," << r.initial_rate << '\n';
  for (std::size_t i = 0; i < r.trace.size(); ++i) out << i + 1 << ',' << r.trace[i] << '\n';
  out.precision(old);
}

}  // namespace manoma
