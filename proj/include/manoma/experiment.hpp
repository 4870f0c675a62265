#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "manoma/benchmarks.hpp"
#include "manoma/config.hpp"

namespace manoma {

enum class SweepAxis { none, users, antennas, paths, region, power, mu, nu };

std::string to_string(SweepAxis a);
/// Case-insensitive. Throws InvalidParameter on unknown names.
SweepAxis parse_axis(const std::string& name);
/// mu and nu perturb the field response after optimization.
bool is_fri_axis(SweepAxis a);

struct SweepSpec {
  SweepAxis axis = SweepAxis::users;
  std::vector<double> values;
  int trials = 20;
  std::vector<Scheme> schemes;

  void validate() const;
};

/// Copy of `cfg` with the axis parameter set. region is in wavelengths and
/// power in dBm; the result is finalized.
ScenarioConfig apply_axis(ScenarioConfig cfg, SweepAxis axis, double value);

inline constexpr std::uint64_t kScenarioStream = 1;
inline constexpr std::uint64_t kFriStream = 2;

/// Scenario drawn from RngStream(row_seed, kScenarioStream).
Scenario scenario_for_seed(const ScenarioConfig& cfg, std::uint64_t row_seed);

/// Build identifier compiled into the library.
std::string build_id();

struct SweepRow {
  SweepAxis axis = SweepAxis::none;
  double value = 0.0;
  Scheme scheme = Scheme::ma_noma;
  int trial = 0;
  std::uint64_t seed = 0;      // sweep seed
  std::uint64_t row_seed = 0;  // scenario and scheme seed of this row
  std::string status = "ok";   // "ok" or "error: ..."
  SchemeResult result;
  /// Mean degraded rate on mu / nu axes, the scheme's min rate otherwise.
  double min_rate = 0.0;
};

struct SweepSinks {
  std::ostream* csv = nullptr;    // header written first, rows as they finish
  std::ostream* jsonl = nullptr;  // one JSON record per row
  bool timing = false;            // add the (non-deterministic) wallclock column
};

/// Seed of the (value, trial) cell. FRI axes reuse value index 0 so every
/// perturbation level sees the same optimized design.
std::uint64_t sweep_row_seed(std::uint64_t seed, SweepAxis axis, std::size_t value_index,
                             int trial);

/// One scheme on the scenario of `row_seed`. Exceptions become the status.
SweepRow run_row(const ScenarioConfig& cfg, Scheme scheme, std::uint64_t row_seed);

/// Rows in (value, scheme, trial) order. Rows run in parallel and are
/// written in order by one writer, so output does not depend on threads.
std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, const SweepSpec& spec,
                                std::uint64_t seed, const SweepSinks& sinks = {});

std::string sweep_csv_header(bool timing);
std::string sweep_csv_line(const SweepRow& row, bool timing);
std::string sweep_json_line(const SweepRow& row, bool timing);

struct ConvergenceResult {
  HoHistory improved;  // fitness-based split
  HoHistory original;  // index-based split
};

/// Improved and original HO on the scenario of `seed`.
ConvergenceResult convergence_run(const ScenarioConfig& cfg, std::uint64_t seed);

/// Header `iteration,improved_ho,original_ho`, one row per iteration.
void write_convergence_csv(std::ostream& out, const ConvergenceResult& r);

struct FriRun {
  SweepRow design;  // perfect-information optimization
  SweepAxis axis = SweepAxis::mu;
  std::vector<double> values;
  std::vector<FriStats> stats;  // one per value
};

/// Optimizes once, then degrades the design at each mu (or nu) value.
/// Every value reuses the perturbation stream (row_seed, kFriStream).
FriRun fri_run(const ScenarioConfig& cfg, Scheme scheme, SweepAxis axis,
               const std::vector<double>& values, int trials, std::uint64_t seed);

void write_fri_csv(std::ostream& out, const FriRun& r);

}  // namespace manoma
