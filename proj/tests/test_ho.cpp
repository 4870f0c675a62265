#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "manoma/error.hpp"
#include "manoma/ho.hpp"
#include "oracles.hpp"

using namespace manoma;

namespace {

HoParams box(double half) {
  HoParams p = HoParams::for_region(half);
  p.n_hippos = 10;
  p.max_iters = 20;
  return p;
}

std::vector<Hippo> with_fitness(const std::vector<double>& f) {
  std::vector<Hippo> pop(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    pop[i].id = static_cast<int>(i);
    pop[i].fitness = f[i];
    pop[i].position = Eigen::VectorXd::Zero(3);
  }
  return pop;
}

Phase1Draws scripted_phase1(int dim) {
  Phase1Draws d;
  d.i1 = 2;
  d.r1 = 0.4;
  d.i2 = 1;
  d.varrho = 1;
  d.r2 = Eigen::VectorXd::LinSpaced(dim, 0.1, 0.9);
  d.r3 = Eigen::VectorXd::LinSpaced(dim, 0.2, 0.3);
  d.r4 = Eigen::VectorXd::LinSpaced(dim, 0.7, 0.1);
  d.r5 = 0.35;
  d.event1 = 0;
  d.event2 = 1;
  d.group = {0, 2};
  d.r6 = 0.8;
  d.r7 = 0.25;
  return d;
}

}  // namespace

TEST_CASE("clamp to the region") {
  const double a2 = 0.01;
  Eigen::VectorXd x(3);
  x << -a2 - 0.1, 0.002, a2 + 1.0;
  const Eigen::VectorXd c = clamp_region(x, -a2, a2);
  CHECK(c[0] == -a2);
  CHECK(c[1] == 0.002);
  CHECK(c[2] == a2);
  RngStream rng(1);
  for (int t = 0; t < 100; ++t) {
    const Eigen::VectorXd v = rng.uniform_vector(6, -0.05, 0.05);
    const Eigen::VectorXd out = clamp_region(v, -a2, a2);
    for (Eigen::Index i = 0; i < 6; ++i) CHECK(out[i] == std::min(std::max(v[i], -a2), a2));
  }
}

TEST_CASE("initial population is uniform in the box") {
  HoParams p = box(0.01);
  p.n_hippos = 10000;
  RngStream rng(2);
  const auto pop = init_population(p, 3, rng);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& h : pop) {
    CHECK(h.position.cwiseAbs().maxCoeff() <= 0.01);
    mean += h.position;
  }
  mean /= static_cast<double>(pop.size());
  // 2% of the box width around the midpoint.
  CHECK(mean.cwiseAbs().maxCoeff() < 0.02 * 0.02);
}

TEST_CASE("degenerate box gives identical hippos") {
  HoParams p = box(0.0);
  RngStream rng(3);
  const auto pop = init_population(p, 6, rng);
  for (const auto& h : pop) CHECK(h.position == pop.front().position);
}

TEST_CASE("split by fitness with ties by id") {
  auto s = split_population(with_fitness({3, 1, 2, 4}));
  CHECK(s.stronger == std::vector<int>{3, 0});
  CHECK(s.weaker == std::vector<int>{2, 1});
  s = split_population(with_fitness({1, 1, 1, 1, 1}));
  CHECK(s.stronger == std::vector<int>{0, 1, 2});
  CHECK(s.weaker == std::vector<int>{3, 4});
  s = split_population(with_fitness({5, 9, 1}), SplitRule::index);
  CHECK(s.stronger == std::vector<int>{0, 1});
}

TEST_CASE("split agrees with a sort oracle") {
  RngStream rng(4);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> f(static_cast<std::size_t>(rng.uniform_int(2, 15)));
    for (double& v : f) v = std::round(rng.uniform(0, 5));
    const auto s = split_population(with_fitness(f));
    std::vector<int> ids(f.size());
    std::iota(ids.begin(), ids.end(), 0);
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
      return f[static_cast<std::size_t>(a)] > f[static_cast<std::size_t>(b)];
    });
    const std::size_t half = (f.size() + 1) / 2;
    CHECK(s.stronger == std::vector<int>(ids.begin(), ids.begin() + static_cast<long>(half)));
    CHECK(s.weaker == std::vector<int>(ids.begin() + static_cast<long>(half), ids.end()));
  }
}

TEST_CASE("best index prefers the lowest id on ties") {
  CHECK(best_index(with_fitness({1, 4, 4, 2})) == 1);
}

TEST_CASE("male candidate endpoints") {
  const HoParams p = box(1.0);
  const Eigen::Vector3d cur(0.1, -0.2, 0.3), gb(0.5, 0.5, -0.5);
  std::vector<Eigen::VectorXd> pos = {cur, gb, Eigen::VectorXd(Eigen::Vector3d::Zero())};
  Phase1Draws d = scripted_phase1(3);
  d.r1 = 0.0;
  CHECK(phase1_candidates(cur, gb, pos, 1, p, d).male == cur);
  d.r1 = 1.0;
  d.i1 = 1;
  CHECK((phase1_candidates(cur, gb, pos, 1, p, d).male - gb).norm() < 1e-15);
}

TEST_CASE("phase one candidates follow the update equations") {
  const HoParams p = box(1.0);
  const Eigen::Vector3d cur(0.1, -0.2, 0.3), gb(0.5, 0.5, -0.5);
  const std::vector<Eigen::VectorXd> pos = {Eigen::VectorXd(Eigen::Vector3d(0.2, 0.2, 0.2)), gb,
                                            Eigen::VectorXd(Eigen::Vector3d(-0.4, 0.0, 0.6))};
  const Phase1Draws d = scripted_phase1(3);
  const Eigen::Vector3d mg = (pos[0] + pos[2]) / 2.0;
  auto clip = [](Eigen::Vector3d v) { return v.cwiseMax(-1.0).cwiseMin(1.0).eval(); };

  // Early iteration: P_I = exp(-1/20) > 0.6, event 0 = i2 * r2 + varrho.
  auto c = phase1_candidates(cur, gb, pos, 1, p, d);
  Eigen::Vector3d male, female;
  for (int i = 0; i < 3; ++i) {
    male[i] = cur[i] + d.r1 * (gb[i] - d.i1 * cur[i]);
    const double ev = d.i2 * d.r2[i] + d.varrho;
    female[i] = cur[i] + ev * (gb[i] - d.i2 * mg[i]);
  }
  CHECK((c.male - clip(male)).norm() < 1e-15);
  CHECK((c.female - clip(female)).norm() < 1e-15);

  // Late iteration, r6 > 0.5: event 1 = 2 r3 - 1 against (mg - gbest).
  c = phase1_candidates(cur, gb, pos, 19, p, d);
  for (int i = 0; i < 3; ++i) female[i] = cur[i] + (2 * d.r3[i] - 1) * (mg[i] - gb[i]);
  CHECK((c.female - clip(female)).norm() < 1e-15);

  // Late iteration, r6 <= 0.5: uniform restart in the box.
  Phase1Draws d2 = d;
  d2.r6 = 0.2;
  c = phase1_candidates(cur, gb, pos, 19, p, d2);
  CHECK((c.female - Eigen::Vector3d::Constant(-1.0 + d2.r7 * 2.0)).norm() < 1e-15);
}

TEST_CASE("phase one choice keeps the strictly best") {
  CHECK(phase1_choice(1.0, 2.0, 1.5) == 1);
  CHECK(phase1_choice(1.0, 1.5, 2.0) == 2);
  CHECK(phase1_choice(2.0, 1.0, 1.5) == 0);
  CHECK(phase1_choice(1.0, 2.0, 2.0) == 0);
}

TEST_CASE("phase two candidate in both branches") {
  const HoParams p = box(1.0);
  Phase2Draws d;
  d.r8 = Eigen::Vector3d(0.1, 0.5, 0.9);
  d.levy = Eigen::Vector3d(0.02, -0.01, 0.03);
  d.rb = 3.0;
  d.rc = 1.2;
  d.rd = 2.4;
  d.rg = 0.3;
  d.r9 = Eigen::Vector3d(0.3, 0.6, 0.9);
  const Eigen::Vector3d pred = predator_position(p, d);
  CHECK((pred - Eigen::Vector3d(-0.8, 0.0, 0.8)).norm() < 1e-15);
  const Eigen::Vector3d cur(0.2, -0.1, 0.5);
  const double factor = d.rb / (d.rc - d.rd * std::cos(2 * std::numbers::pi * d.rg));
  Eigen::Vector3d near, far;
  for (int i = 0; i < 3; ++i) {
    const double dist = std::abs(pred[i] - cur[i]);
    near[i] = d.levy[i] * pred[i] + factor / dist;
    far[i] = d.levy[i] * pred[i] + factor / (2 * dist + d.r9[i]);
  }
  auto clip = [](Eigen::Vector3d v) { return v.cwiseMax(-1.0).cwiseMin(1.0).eval(); };
  CHECK((phase2_candidate(cur, pred, true, p, d) - clip(near)).norm() < 1e-14);
  CHECK((phase2_candidate(cur, pred, false, p, d) - clip(far)).norm() < 1e-14);
}

TEST_CASE("phase two tolerates a predator on top of the hippo") {
  const HoParams p = box(1.0);
  Phase2Draws d;
  d.r8 = Eigen::Vector3d::Constant(0.5);
  d.levy = Eigen::Vector3d::Zero();
  d.r9 = Eigen::Vector3d::Constant(0.5);
  const Eigen::Vector3d pred = predator_position(p, d);
  const Eigen::VectorXd c = phase2_candidate(pred, pred, true, p, d);
  CHECK(c.allFinite());
  CHECK(c.cwiseAbs().maxCoeff() <= 1.0);
}

TEST_CASE("phase three candidate and its shrinking window") {
  const HoParams p = box(0.5);
  Phase3Draws d;
  d.r10 = 0.7;
  d.r11 = Eigen::Vector3d(0.1, 0.5, 0.9);
  d.r12 = 0.4;
  d.r13 = -1.3;
  const Eigen::Vector3d cur(0.1, 0.2, -0.3);
  for (int event = 0; event < 3; ++event) {
    d.event = event;
    const int iter = 3;
    const double lo = -0.5 / iter, hi = 0.5 / iter;
    Eigen::Vector3d e;
    for (int i = 0; i < 3; ++i) {
      e[i] = event == 0 ? 2 * d.r11[i] - 1 : event == 1 ? d.r12 : d.r13;
    }
    Eigen::Vector3d expected;
    for (int i = 0; i < 3; ++i) expected[i] = cur[i] + d.r10 * (lo + e[i] * (hi - lo));
    CHECK((phase3_candidate(cur, iter, p, d) - expected.cwiseMax(-0.5).cwiseMin(0.5)).norm() <
          1e-15);
  }
  d.r10 = 0.0;
  CHECK(phase3_candidate(cur, 5, p, d) == cur);
  d.r10 = 1.0;
  d.event = 0;
  // window (hi - lo) = 1e-6; a step never leaves [lo - (hi - lo), hi]
  CHECK((phase3_candidate(cur, 1000000, p, d) - cur).cwiseAbs().maxCoeff() <= 1.5e-6 + 1e-18);
  CHECK_THROWS_AS(phase3_candidate(cur, 0, p, d), InvalidParameter);
}

TEST_CASE("serial and parallel batch evaluation agree") {
  RngStream rng(5);
  std::vector<EvalTask> a(40);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i].position = rng.uniform_vector(4, -1, 1);
    a[i].key = {1, i, 2};
  }
  auto b = a;
  const FitnessFn f = [](const Eigen::VectorXd& x, const FitnessKey& k) {
    return std::sin(x.sum()) + static_cast<double>(k.hippo);
  };
  evaluate_serial(a, f);
  evaluate_parallel(b, f);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].value == b[i].value);
}

TEST_CASE("parallel evaluation rethrows task errors") {
  std::vector<EvalTask> t(4);
  for (auto& e : t) e.position = Eigen::VectorXd::Zero(1);
  t[2].key.hippo = 7;
  const FitnessFn f = [](const Eigen::VectorXd&, const FitnessKey& k) -> double {
    if (k.hippo == 7) throw std::runtime_error("bad");
    return 0.0;
  };
  CHECK_THROWS_AS(evaluate_parallel(t, f), std::runtime_error);
}

TEST_CASE("search is elitist, bounded and within its evaluation budget") {
  const oracle::PlantedFitness target{Eigen::Vector3d(0.003, -0.007, 0.001)};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    HoParams p = box(0.01);
    p.n_hippos = 9;
    const FitnessFn fn = [&](const Eigen::VectorXd& x, const FitnessKey&) { return target(x); };
    const HoRun run = ho_search(3, p, fn, seed);
    const auto& h = run.history;
    REQUIRE(h.best_fitness_per_iter.size() == static_cast<std::size_t>(p.max_iters));
    double prev = h.initial_best;
    const long budget = 2 * 5 + 2 * 4 + 9 + 1;
    for (std::size_t i = 0; i < h.best_fitness_per_iter.size(); ++i) {
      CHECK(h.best_fitness_per_iter[i] >= prev);
      prev = h.best_fitness_per_iter[i];
      CHECK(h.evaluations_per_iter[i] <= budget);
      CHECK(h.best_position_per_iter[i].cwiseAbs().maxCoeff() <= 0.01);
    }
    for (const auto& hippo : run.population) CHECK(hippo.position.cwiseAbs().maxCoeff() <= 0.01);
    CHECK(run.best.fitness == h.best_fitness_per_iter.back());
  }
}

TEST_CASE("search output does not depend on the evaluator") {
  const oracle::PlantedFitness target{Eigen::VectorXd::Constant(6, 0.002)};
  const FitnessFn fn = [&](const Eigen::VectorXd& x, const FitnessKey&) { return target(x); };
  HoParams p = box(0.01);
  p.parallel = false;
  const HoRun a = ho_search(6, p, fn, 3);
  p.parallel = true;
  const HoRun b = ho_search(6, p, fn, 3);
  CHECK(a.history.best_fitness_per_iter == b.history.best_fitness_per_iter);
  CHECK(a.best.position == b.best.position);
}

TEST_CASE("origin seeding puts hippo zero at the origin") {
  HoParams p = box(0.01);
  p.max_iters = 1;
  const FitnessFn fn = [](const Eigen::VectorXd& x, const FitnessKey&) {
    return x.norm() == 0.0 ? 1.0 : 0.0;
  };
  const HoRun run = ho_search(3, p, fn, 1);
  CHECK(run.history.initial_best == 1.0);
  p.seed_origin = false;
  CHECK(ho_search(3, p, fn, 1).history.initial_best == 0.0);
}

TEST_CASE("planted optimum is recovered in three dimensions") {
  HoParams p = box(0.01);
  p.n_hippos = 20;
  p.max_iters = 50;
  std::vector<double> err;
  for (std::uint64_t seed = 1; seed <= 9; ++seed) {
    RngStream rng(seed, 77);
    const oracle::PlantedFitness target{rng.uniform_vector(3, -0.009, 0.009)};
    const FitnessFn fn = [&](const Eigen::VectorXd& x, const FitnessKey&) { return target(x); };
    err.push_back((ho_search(3, p, fn, seed).best.position - target.target).norm());
  }
  std::nth_element(err.begin(), err.begin() + 4, err.end());
  CHECK(err[4] <= 1e-2 * 0.02);
}

TEST_CASE("full optimize smoke test and history CSV") {
  ScenarioParams sp;
  sp.n_antennas = 2;
  sp.n_users = 1;
  sp.n_paths = 3;
  RngStream rng(6);
  const Scenario sc = sample_scenario(sp, rng);
  HoParams p = HoParams::for_region(sc.region_half);
  p.n_hippos = 2;
  p.max_iters = 1;
  const HoResult r = optimize(sc, p, AoParams{}, 5);
  CHECK(r.ao.rate >= r.history.initial_best - 1e-9);
  CHECK(r.apv.within_region());
  std::ostringstream os;
  write_history_csv(os, r.history);
  CHECK(os.str().rfind("iteration,best_fitness\n", 0) == 0);
}

TEST_CASE("parameter checks") {
  HoParams p;
  p.n_hippos = 1;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = HoParams{};
  p.max_iters = 0;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
}
