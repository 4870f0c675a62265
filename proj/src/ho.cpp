#include "manoma/ho.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <numeric>
#include <ostream>

#include "manoma/error.hpp"

namespace manoma {

namespace {

constexpr double kMinDistance = 1e-12;
constexpr double kMinDenominator = 1e-12;

// Fitness slots within one iteration.
enum Slot : std::uint64_t { init = 0, male = 1, female = 2, predator = 3, weaker = 4, local = 5 };

// Stream tags so draw streams never collide with fitness streams.
constexpr std::uint64_t kDrawTag = 0x686970706fULL;

RngStream draw_stream(std::uint64_t seed, int iter, int id, int phase) {
  return RngStream(seed, derive_key(kDrawTag, static_cast<std::uint64_t>(iter),
                                    static_cast<std::uint64_t>(id),
                                    static_cast<std::uint64_t>(phase)));
}

void evaluate(std::vector<EvalTask>& tasks, const FitnessFn& fitness, bool parallel) {
  if (parallel) {
    evaluate_parallel(tasks, fitness);
  } else {
    evaluate_serial(tasks, fitness);
  }
}

Eigen::VectorXd group_mean(const std::vector<Eigen::VectorXd>& positions,
                           const std::vector<int>& group) {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(positions.front().size());
  for (int g : group) mean += positions[static_cast<std::size_t>(g)];
  return mean / static_cast<double>(group.size());
}

}  // namespace

void HoParams::validate() const {
  if (n_hippos < 2) throw InvalidParameter("HoParams: n_hippos must be >= 2");
  if (max_iters < 1) throw InvalidParameter("HoParams: max_iters must be >= 1");
  if (!(beta > 0.0 && beta <= 2.0)) throw InvalidParameter("HoParams: beta must be in (0, 2]");
  if (!(lower <= upper)) throw InvalidParameter("HoParams: lower bound exceeds upper bound");
}

HoParams HoParams::for_region(double region_half) {
  HoParams p;
  p.lower = -region_half;
  p.upper = region_half;
  return p;
}

Eigen::VectorXd clamp_region(const Eigen::VectorXd& x, double lower, double upper) {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out[i] = std::isnan(x[i]) ? 0.5 * (lower + upper) : std::clamp(x[i], lower, upper);
  }
  return out;
}

std::vector<Hippo> init_population(const HoParams& params, Eigen::Index dim, RngStream& rng) {
  params.validate();
  std::vector<Hippo> pop(static_cast<std::size_t>(params.n_hippos));
  for (int n = 0; n < params.n_hippos; ++n) {
    Hippo& h = pop[static_cast<std::size_t>(n)];
    h.id = n;
    h.key = {0, static_cast<std::uint64_t>(n), Slot::init};
    h.position.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      h.position[i] = params.lower + rng.uniform() * (params.upper - params.lower);
    }
  }
  return pop;
}

PopulationSplit split_population(const std::vector<Hippo>& pop, SplitRule rule) {
  if (pop.size() < 2) throw InvalidParameter("split_population: need at least two hippos");
  std::vector<int> idx(pop.size());
  std::iota(idx.begin(), idx.end(), 0);
  if (rule == SplitRule::fitness) {
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      const Hippo& x = pop[static_cast<std::size_t>(a)];
      const Hippo& y = pop[static_cast<std::size_t>(b)];
      return x.fitness != y.fitness ? x.fitness > y.fitness : x.id < y.id;
    });
  } else {
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      return pop[static_cast<std::size_t>(a)].id < pop[static_cast<std::size_t>(b)].id;
    });
  }
  const std::size_t n_strong = (pop.size() + 1) / 2;
  PopulationSplit s;
  s.stronger.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_strong));
  s.weaker.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_strong), idx.end());
  return s;
}

int best_index(const std::vector<Hippo>& pop) {
  int best = 0;
  for (std::size_t n = 1; n < pop.size(); ++n) {
    const Hippo& h = pop[n];
    const Hippo& b = pop[static_cast<std::size_t>(best)];
    if (h.fitness > b.fitness || (h.fitness == b.fitness && h.id < b.id)) {
      best = static_cast<int>(n);
    }
  }
  return best;
}

Phase1Draws Phase1Draws::draw(RngStream& rng, Eigen::Index dim, int n_hippos) {
  Phase1Draws d;
  d.i1 = rng.uniform_int(1, 2);
  d.r1 = rng.uniform();
  d.i2 = rng.uniform_int(1, 2);
  d.varrho = rng.uniform_int(0, 1);
  d.r2 = rng.uniform_vector(dim);
  d.r3 = rng.uniform_vector(dim);
  d.r4 = rng.uniform_vector(dim);
  d.r5 = rng.uniform();
  d.event1 = rng.uniform_int(0, 3);
  d.event2 = rng.uniform_int(0, 3);
  const int size = rng.uniform_int(1, n_hippos);
  std::vector<int> all(static_cast<std::size_t>(n_hippos));
  std::iota(all.begin(), all.end(), 0);
  // Partial Fisher-Yates: the first `size` entries are a uniform sample.
  for (int i = 0; i < size; ++i) {
    const int j = rng.uniform_int(i, n_hippos - 1);
    std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
  }
  d.group.assign(all.begin(), all.begin() + size);
  d.r6 = rng.uniform();
  d.r7 = rng.uniform();
  return d;
}

namespace {

Eigen::VectorXd female_event(const Phase1Draws& d, int which) {
  const auto dim = d.r2.size();
  switch (which) {
    case 0:
      return (d.i2 * d.r2).array() + static_cast<double>(d.varrho);
    case 1:
      return 2.0 * d.r3.array() - 1.0;
    case 2:
      return d.r4;
    default:
      return Eigen::VectorXd::Constant(dim, d.r5);
  }
}

}  // namespace

Phase1Candidates phase1_candidates(const Eigen::VectorXd& current, const Eigen::VectorXd& gbest,
                                   const std::vector<Eigen::VectorXd>& positions, int iter,
                                   const HoParams& params, const Phase1Draws& d) {
  Phase1Candidates c;
  c.male = clamp_region(current + d.r1 * (gbest - d.i1 * current), params.lower, params.upper);

  const Eigen::VectorXd mg = group_mean(positions, d.group);
  const double p_i = std::exp(-static_cast<double>(iter) / params.max_iters);
  Eigen::VectorXd female;
  if (p_i > 0.6) {
    female = current + female_event(d, d.event1).cwiseProduct(gbest - d.i2 * mg);
  } else if (d.r6 > 0.5) {
    female = current + female_event(d, d.event2).cwiseProduct(mg - gbest);
  } else {
    female = Eigen::VectorXd::Constant(current.size(),
                                       params.lower + d.r7 * (params.upper - params.lower));
  }
  c.female = clamp_region(female, params.lower, params.upper);
  return c;
}

int phase1_choice(double r_current, double r_male, double r_female) {
  if (r_male > std::max(r_current, r_female)) return 1;
  if (r_female > std::max(r_current, r_male)) return 2;
  return 0;
}

Phase2Draws Phase2Draws::draw(RngStream& rng, Eigen::Index dim, double beta) {
  Phase2Draws d;
  d.r8 = rng.uniform_vector(dim);
  d.levy = levy_matrix(rng, dim, 1, beta).col(0);
  d.rb = rng.uniform(2.0, 4.0);
  d.rc = rng.uniform(1.0, 1.5);
  d.rd = rng.uniform(2.0, 3.0);
  d.rg = rng.uniform(-1.0, 1.0);
  d.r9 = rng.uniform_vector(dim);
  return d;
}

Eigen::VectorXd predator_position(const HoParams& params, const Phase2Draws& d) {
  return (params.lower + d.r8.array() * (params.upper - params.lower)).matrix();
}

Eigen::VectorXd phase2_candidate(const Eigen::VectorXd& current, const Eigen::VectorXd& predator,
                                 bool predator_better, const HoParams& params,
                                 const Phase2Draws& d) {
  double den = d.rc - d.rd * std::cos(2.0 * std::numbers::pi * d.rg);
  if (std::abs(den) < kMinDenominator) den = std::copysign(kMinDenominator, den);
  const double factor = d.rb / den;
  const Eigen::ArrayXd dist = (predator - current).array().abs().max(kMinDistance);
  const Eigen::ArrayXd recip = predator_better ? Eigen::ArrayXd(dist.inverse())
                                               : Eigen::ArrayXd((2.0 * dist + d.r9.array()).inverse());
  const Eigen::VectorXd cand = (d.levy.array() * predator.array() + factor * recip).matrix();
  return clamp_region(cand, params.lower, params.upper);
}

Phase3Draws Phase3Draws::draw(RngStream& rng, Eigen::Index dim) {
  Phase3Draws d;
  d.r10 = rng.uniform();
  d.r11 = rng.uniform_vector(dim);
  d.r12 = rng.uniform();
  d.r13 = rng.normal();
  d.event = rng.uniform_int(0, 2);
  return d;
}

Eigen::VectorXd phase3_candidate(const Eigen::VectorXd& current, int iter, const HoParams& params,
                                 const Phase3Draws& d) {
  if (iter < 1) throw InvalidParameter("phase3_candidate: iteration must be >= 1");
  const double lo = params.lower / iter;
  const double hi = params.upper / iter;
  Eigen::VectorXd ev;
  switch (d.event) {
    case 0:
      ev = 2.0 * d.r11.array() - 1.0;
      break;
    case 1:
      ev = Eigen::VectorXd::Constant(current.size(), d.r12);
      break;
    default:
      ev = Eigen::VectorXd::Constant(current.size(), d.r13);
      break;
  }
  const Eigen::VectorXd cand = current + d.r10 * (lo + ev.array() * (hi - lo)).matrix();
  return clamp_region(cand, params.lower, params.upper);
}

void evaluate_serial(std::vector<EvalTask>& tasks, const FitnessFn& fitness) {
  for (auto& t : tasks) t.value = fitness(t.position, t.key);
}

void evaluate_parallel(std::vector<EvalTask>& tasks, const FitnessFn& fitness) {
  const auto n = static_cast<long>(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      auto& t = tasks[static_cast<std::size_t>(i)];
      t.value = fitness(t.position, t.key);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

HoRun ho_search(Eigen::Index dim, const HoParams& params, const FitnessFn& fitness,
                std::uint64_t seed, const SurrogateFn& surrogate) {
  params.validate();
  if (dim < 1) throw DimensionError("ho_search: dimension must be >= 1");
  if (params.predator_surrogate && !surrogate) {
    throw InvalidParameter("ho_search: predator_surrogate set without a surrogate function");
  }
  const auto n_h = static_cast<std::size_t>(params.n_hippos);

  HoRun run;
  RngStream init_rng(seed, derive_key(kDrawTag, 0));
  run.population = init_population(params, dim, init_rng);
  auto& pop = run.population;
  if (params.seed_origin) {
    pop[0].position = clamp_region(Eigen::VectorXd::Zero(dim), params.lower, params.upper);
  }
  {
    std::vector<EvalTask> tasks(n_h);
    for (std::size_t n = 0; n < n_h; ++n) tasks[n] = {pop[n].position, pop[n].key, 0.0};
    evaluate(tasks, fitness, params.parallel);
    for (std::size_t n = 0; n < n_h; ++n) pop[n].fitness = tasks[n].value;
    run.history.evaluation_count = static_cast<long>(n_h);
  }
  {
    const Hippo& b = pop[static_cast<std::size_t>(best_index(pop))];
    run.history.initial_best = b.fitness;
    run.history.initial_position = b.position;
  }

  for (int iter = 1; iter <= params.max_iters; ++iter) {
    const auto it = static_cast<std::uint64_t>(iter);
    long evals = 0;
    const PopulationSplit split = split_population(pop, params.split);
    const Hippo gbest = pop[static_cast<std::size_t>(best_index(pop))];
    std::vector<Eigen::VectorXd> snapshot(n_h);
    for (std::size_t n = 0; n < n_h; ++n) snapshot[n] = pop[n].position;

    // Phase 1: male and female candidates for the stronger set.
    {
      std::vector<EvalTask> tasks;
      tasks.reserve(2 * split.stronger.size());
      for (int idx : split.stronger) {
        const Hippo& h = pop[static_cast<std::size_t>(idx)];
        RngStream rng = draw_stream(seed, iter, h.id, 1);
        const Phase1Draws d = Phase1Draws::draw(rng, dim, params.n_hippos);
        Phase1Candidates c = phase1_candidates(h.position, gbest.position, snapshot, iter, params, d);
        const auto id = static_cast<std::uint64_t>(h.id);
        tasks.push_back({std::move(c.male), {it, id, Slot::male}, 0.0});
        tasks.push_back({std::move(c.female), {it, id, Slot::female}, 0.0});
      }
      evaluate(tasks, fitness, params.parallel);
      evals += static_cast<long>(tasks.size());
      for (std::size_t s = 0; s < split.stronger.size(); ++s) {
        Hippo& h = pop[static_cast<std::size_t>(split.stronger[s])];
        const EvalTask& m = tasks[2 * s];
        const EvalTask& f = tasks[2 * s + 1];
        const int choice = phase1_choice(h.fitness, m.value, f.value);
        const EvalTask* pick = choice == 1 ? &m : choice == 2 ? &f : nullptr;
        if (pick != nullptr) {
          h.position = pick->position;
          h.fitness = pick->value;
          h.key = pick->key;
        }
      }
    }

    // Phase 2: predator defence for the weaker set.
    {
      std::vector<Phase2Draws> draws;
      std::vector<EvalTask> predators;
      for (int idx : split.weaker) {
        const Hippo& h = pop[static_cast<std::size_t>(idx)];
        RngStream rng = draw_stream(seed, iter, h.id, 2);
        draws.push_back(Phase2Draws::draw(rng, dim, params.beta));
        predators.push_back({predator_position(params, draws.back()),
                             {it, static_cast<std::uint64_t>(h.id), Slot::predator}, 0.0});
      }
      std::vector<bool> better(split.weaker.size());
      if (params.predator_surrogate) {
        for (std::size_t w = 0; w < split.weaker.size(); ++w) {
          const Hippo& h = pop[static_cast<std::size_t>(split.weaker[w])];
          better[w] = surrogate(predators[w].position) > surrogate(h.position);
        }
      } else {
        evaluate(predators, fitness, params.parallel);
        evals += static_cast<long>(predators.size());
        for (std::size_t w = 0; w < split.weaker.size(); ++w) {
          better[w] = predators[w].value > pop[static_cast<std::size_t>(split.weaker[w])].fitness;
        }
      }
      std::vector<EvalTask> tasks;
      for (std::size_t w = 0; w < split.weaker.size(); ++w) {
        const Hippo& h = pop[static_cast<std::size_t>(split.weaker[w])];
        tasks.push_back({phase2_candidate(h.position, predators[w].position, better[w], params,
                                          draws[w]),
                         {it, static_cast<std::uint64_t>(h.id), Slot::weaker},
                         0.0});
      }
      evaluate(tasks, fitness, params.parallel);
      evals += static_cast<long>(tasks.size());
      for (std::size_t w = 0; w < split.weaker.size(); ++w) {
        Hippo& h = pop[static_cast<std::size_t>(split.weaker[w])];
        if (tasks[w].value > h.fitness) {
          h.position = tasks[w].position;
          h.fitness = tasks[w].value;
          h.key = tasks[w].key;
        }
      }
    }

    // Phase 3: local search for everyone, window shrinking as 1/iter.
    {
      std::vector<EvalTask> tasks(n_h);
      for (std::size_t n = 0; n < n_h; ++n) {
        RngStream rng = draw_stream(seed, iter, pop[n].id, 3);
        const Phase3Draws d = Phase3Draws::draw(rng, dim);
        tasks[n] = {phase3_candidate(pop[n].position, iter, params, d),
                    {it, static_cast<std::uint64_t>(pop[n].id), Slot::local},
                    0.0};
      }
      evaluate(tasks, fitness, params.parallel);
      evals += static_cast<long>(tasks.size());
      for (std::size_t n = 0; n < n_h; ++n) {
        if (tasks[n].value > pop[n].fitness) {
          pop[n].position = tasks[n].position;
          pop[n].fitness = tasks[n].value;
          pop[n].key = tasks[n].key;
        }
      }
    }

    const Hippo& b = pop[static_cast<std::size_t>(best_index(pop))];
    run.history.best_fitness_per_iter.push_back(b.fitness);
    run.history.best_position_per_iter.push_back(b.position);
    run.history.evaluations_per_iter.push_back(evals);
    run.history.evaluation_count += evals;
  }
  run.best = pop[static_cast<std::size_t>(best_index(pop))];
  return run;
}

double channel_power_surrogate(const Scenario& sc, const Eigen::VectorXd& stacked) {
  const CMatrix h = normalized_channel_matrix(Apv::from_stacked(stacked, sc.region_half), sc);
  return h.colwise().squaredNorm().minCoeff();
}

HoResult optimize(const Scenario& sc, const HoParams& ho, const AoParams& ao, std::uint64_t seed) {
  const Eigen::Index dim = 3 * sc.num_users();
  const double half = sc.region_half;
  const FitnessFn fn = [&](const Eigen::VectorXd& x, const FitnessKey& key) {
    return fitness(sc, Apv::from_stacked(x, half), ao, seed, key);
  };
  const SurrogateFn proxy = [&](const Eigen::VectorXd& x) {
    return channel_power_surrogate(sc, x);
  };
  HoRun run = ho_search(dim, ho, fn, seed, proxy);

  HoResult res;
  res.best = run.best;
  res.apv = Apv::from_stacked(run.best.position, half);
  res.ao = ao_solve_keyed(sc, res.apv, ao, seed, run.best.key);
  res.history = std::move(run.history);
  return res;
}

void write_history_csv(std::ostream& out, const HoHistory& h) {
  const auto old = out.precision(17);
  out << "iteration,best_fitness\n";
  for (std::size_t i = 0; i < h.best_fitness_per_iter.size(); ++i) {
    out << i + 1 << ',' << h.best_fitness_per_iter[i] << '\n';
  }
  out.precision(old);
}

}  // namespace manoma
