#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace manoma {

/// ||A x + b||_2 <= c^T x + d. A cone with zero rows in A is a plain linear
/// inequality 0 <= c^T x + d.
struct SocConstraint {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  double d = 0.0;
};

/// Optional per-variable box; infinite entries mean unbounded.
struct BoxBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

/// maximize objective^T x subject to every cone and the optional box.
struct SocpProblem {
  int nvars = 0;
  Eigen::VectorXd objective;
  std::vector<SocConstraint> cones;
  std::optional<BoxBounds> bounds;

  /// Throws DimensionError on inconsistent shapes or an empty constraint set.
  void validate() const;
};

enum class SolveStatus { optimal, infeasible, max_iterations };

std::string to_string(SolveStatus s);

struct SolveReport {
  Eigen::VectorXd x;
  double objective_value = 0.0;
  SolveStatus status = SolveStatus::max_iterations;
  double primal_residual = 0.0;    // max cone violation at x, absolute
  double dual_gap_estimate = 0.0;  // min(absolute gap, relative gap)
  int iterations = 0;
};

struct SolverSettings {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iters = 200;
  /// Optional primal starting point. Changes the path, not the optimum.
  std::optional<Eigen::VectorXd> warm_start;
};

struct Residuals {
  double primal_violation = 0.0;   // max(0, max over constraints of lhs - rhs)
  Eigen::VectorXd per_cone_slacks;  // (c^T x + d) - ||A x + b|| per cone, then box slacks
};

Residuals residuals(const SocpProblem& p, const Eigen::VectorXd& x);

SolveReport solve(const SocpProblem& p, const SolverSettings& settings = {});

/// Plain-text dump for cross-checking against an external conic solver.
/// Format: header line `socp nvars ncones`, the objective, then one block
/// per cone (`cone rows`, c, d, then rows of [A | b]) and an optional box.
void write_socp_text(std::ostream& out, const SocpProblem& p);

}  // namespace manoma
