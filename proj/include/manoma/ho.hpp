#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "manoma/ao.hpp"
#include "manoma/channel.hpp"
#include "manoma/stochastic.hpp"

namespace manoma {

struct Hippo {
  Eigen::VectorXd position;
  double fitness = 0.0;
  int id = 0;
  FitnessKey key;  // evaluation that produced `fitness`
};

enum class SplitRule {
  fitness,  // top ceil(N_H / 2) by fitness are the stronger set
  index,    // first ceil(N_H / 2) ids, as in the original algorithm
};

struct HoParams {
  int n_hippos = 50;
  int max_iters = 100;
  double beta = 1.5;
  double lower = -0.01;  // b_l
  double upper = 0.01;   // b_u
  SplitRule split = SplitRule::fitness;
  /// Place hippo 0 at the origin before the first evaluation.
  bool seed_origin = true;
  /// Compare predator and hippo through the surrogate instead of two full
  /// fitness evaluations.
  bool predator_surrogate = false;
  /// Use the OpenMP batch evaluator; the serial one gives identical output.
  bool parallel = true;

  void validate() const;
  static HoParams for_region(double region_half);
};

struct HoHistory {
  double initial_best = 0.0;
  Eigen::VectorXd initial_position;
  std::vector<double> best_fitness_per_iter;
  std::vector<Eigen::VectorXd> best_position_per_iter;
  std::vector<long> evaluations_per_iter;
  long evaluation_count = 0;  // including the initial population
};

/// Fitness of a stacked position. Must be safe to call concurrently.
using FitnessFn = std::function<double(const Eigen::VectorXd&, const FitnessKey&)>;
/// Cheap position score used by the predator surrogate.
using SurrogateFn = std::function<double(const Eigen::VectorXd&)>;

/// Coordinatewise projection onto [lower, upper]. NaN maps to the midpoint.
Eigen::VectorXd clamp_region(const Eigen::VectorXd& x, double lower, double upper);

/// Positions only; fitness left at 0 and keys set to (0, id, 0).
std::vector<Hippo> init_population(const HoParams& params, Eigen::Index dim, RngStream& rng);

struct PopulationSplit {
  std::vector<int> stronger;  // indices into the population
  std::vector<int> weaker;
};

PopulationSplit split_population(const std::vector<Hippo>& pop, SplitRule rule = SplitRule::fitness);

/// Highest fitness, ties to the lowest id.
int best_index(const std::vector<Hippo>& pop);

// ---- phase 1: river / pond update of the stronger set ----------------------

struct Phase1Draws {
  int i1 = 1;      // in {1, 2}
  double r1 = 0.0;
  int i2 = 1;      // in {1, 2}
  int varrho = 0;  // in {0, 1}
  Eigen::VectorXd r2, r3, r4;
  double r5 = 0.0;
  int event1 = 0;  // index into the four female events
  int event2 = 0;
  std::vector<int> group;  // population indices averaged into the group mean
  double r6 = 0.0;
  double r7 = 0.0;

  static Phase1Draws draw(RngStream& rng, Eigen::Index dim, int n_hippos);
};

struct Phase1Candidates {
  Eigen::VectorXd male;
  Eigen::VectorXd female;
};

/// Male and female candidates, both clamped. `positions` is the population
/// snapshot used for the group mean.
Phase1Candidates phase1_candidates(const Eigen::VectorXd& current, const Eigen::VectorXd& gbest,
                                   const std::vector<Eigen::VectorXd>& positions, int iter,
                                   const HoParams& params, const Phase1Draws& d);

/// 0 keep current, 1 take male, 2 take female.
int phase1_choice(double r_current, double r_male, double r_female);

// ---- phase 2: predator defence of the weaker set ---------------------------

struct Phase2Draws {
  Eigen::VectorXd r8;    // predator position factors
  Eigen::VectorXd levy;  // this hippo's Levy column
  double rb = 3.0;
  double rc = 1.25;
  double rd = 2.5;
  double rg = 0.0;
  Eigen::VectorXd r9;

  static Phase2Draws draw(RngStream& rng, Eigen::Index dim, double beta);
};

Eigen::VectorXd predator_position(const HoParams& params, const Phase2Draws& d);

/// Clamped candidate. `predator_better` selects the 1/d branch.
Eigen::VectorXd phase2_candidate(const Eigen::VectorXd& current, const Eigen::VectorXd& predator,
                                 bool predator_better, const HoParams& params,
                                 const Phase2Draws& d);

// ---- phase 3: shrinking local search of every hippo ------------------------

struct Phase3Draws {
  double r10 = 0.0;
  Eigen::VectorXd r11;
  double r12 = 0.0;
  double r13 = 0.0;
  int event = 0;  // 0: 2 r11 - 1, 1: r12, 2: r13

  static Phase3Draws draw(RngStream& rng, Eigen::Index dim);
};

Eigen::VectorXd phase3_candidate(const Eigen::VectorXd& current, int iter, const HoParams& params,
                                 const Phase3Draws& d);

// ---- batch evaluation kernels ----------------------------------------------

struct EvalTask {
  Eigen::VectorXd position;
  FitnessKey key;
  double value = 0.0;
};

/// Reference loop.
void evaluate_serial(std::vector<EvalTask>& tasks, const FitnessFn& fitness);
/// OpenMP loop; bitwise identical to evaluate_serial.
void evaluate_parallel(std::vector<EvalTask>& tasks, const FitnessFn& fitness);

// ---- driver ----------------------------------------------------------------

struct HoRun {
  Hippo best;
  std::vector<Hippo> population;
  HoHistory history;
};

/// Generic population search over [lower, upper]^dim maximizing `fitness`.
HoRun ho_search(Eigen::Index dim, const HoParams& params, const FitnessFn& fitness,
                std::uint64_t seed, const SurrogateFn& surrogate = {});

struct HoResult {
  Apv apv;
  AoResult ao;  // final (W, M) at the best APV
  HoHistory history;
  Hippo best;
};

/// Joint APV / precoder / decoding optimization.
HoResult optimize(const Scenario& sc, const HoParams& ho, const AoParams& ao, std::uint64_t seed);

/// Weakest-user channel power min_k ||h_k||^2 of a stacked APV (noise-normalized).
double channel_power_surrogate(const Scenario& sc, const Eigen::VectorXd& stacked);

/// CSV with header `iteration,best_fitness`, one row per iteration.
void write_history_csv(std::ostream& out, const HoHistory& h);

}  // namespace manoma
