#include <doctest.h>

#include <cmath>
#include <sstream>

#include "manoma/error.hpp"
#include "manoma/socp.hpp"
#include "oracles.hpp"

using namespace manoma;

namespace {

SocConstraint norm_ball(int n, double radius) {
  SocConstraint c;
  c.a = Eigen::MatrixXd::Identity(n, n);
  c.b = Eigen::VectorXd::Zero(n);
  c.c = Eigen::VectorXd::Zero(n);
  c.d = radius;
  return c;
}

}  // namespace

TEST_CASE("unit ball extreme point") {
  SocpProblem p;
  p.nvars = 2;
  p.objective = Eigen::Vector2d(-1.0, 0.0);
  p.cones.push_back(norm_ball(2, 1.0));
  const SolveReport r = solve(p);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.x[0] == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(std::abs(r.x[1]) < 1e-6);
  CHECK(r.objective_value == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("maximize x with norm of (x, 1) at most 2") {
  SocpProblem p;
  p.nvars = 1;
  p.objective = Eigen::VectorXd::Ones(1);
  SocConstraint c;
  c.a = Eigen::MatrixXd::Zero(2, 1);
  c.a(0, 0) = 1.0;
  c.b = Eigen::Vector2d(0.0, 1.0);
  c.c = Eigen::VectorXd::Zero(1);
  c.d = 2.0;
  p.cones.push_back(c);
  const SolveReport r = solve(p);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.x[0] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-7));
}

TEST_CASE("box bounds are honoured") {
  SocpProblem p;
  p.nvars = 2;
  p.objective = Eigen::Vector2d(1.0, 1.0);
  p.cones.push_back(norm_ball(2, 10.0));
  p.bounds = BoxBounds{Eigen::Vector2d(-1.0, -1.0), Eigen::Vector2d(0.5, 2.0)};
  const SolveReport r = solve(p);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.x[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("infeasible problem is reported") {
  SocpProblem p;
  p.nvars = 1;
  p.objective = Eigen::VectorXd::Ones(1);
  // x <= -1 and -x <= -1.
  SocConstraint a, b;
  a.a.resize(0, 1);
  a.c = -Eigen::VectorXd::Ones(1);
  a.d = -1.0;
  b.a.resize(0, 1);
  b.c = Eigen::VectorXd::Ones(1);
  b.d = -1.0;
  p.cones = {a, b};
  CHECK(solve(p).status == SolveStatus::infeasible);
}

TEST_CASE("dimension errors") {
  SocpProblem p;
  p.nvars = 2;
  p.objective = Eigen::VectorXd::Ones(3);
  p.cones.push_back(norm_ball(2, 1.0));
  CHECK_THROWS_AS(solve(p), DimensionError);
  p.objective = Eigen::VectorXd::Ones(2);
  p.cones.clear();
  CHECK_THROWS_AS(solve(p), DimensionError);
  p.cones.push_back(norm_ball(2, 1.0));
  CHECK_THROWS_AS(residuals(p, Eigen::VectorXd::Zero(3)), DimensionError);
}

TEST_CASE("residuals at interior, boundary and infeasible points") {
  SocpProblem p;
  p.nvars = 2;
  p.objective = Eigen::Vector2d::Zero();
  p.cones.push_back(norm_ball(2, 1.0));
  CHECK(residuals(p, Eigen::Vector2d(0.1, 0.2)).primal_violation == 0.0);
  CHECK(residuals(p, Eigen::Vector2d(0.6, 0.8)).primal_violation <= 1e-12);
  RngStream rng(1);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Vector2d x = rng.uniform_vector(2, 1.0, 3.0);
    const double expected = std::hypot(x[0], x[1]) - 1.0;
    const Residuals r = residuals(p, x);
    CHECK(r.primal_violation == doctest::Approx(expected).epsilon(1e-14));
    CHECK(r.per_cone_slacks[0] == doctest::Approx(-expected).epsilon(1e-14));
  }
}

TEST_CASE("planted problems reach the planted optimum") {
  RngStream rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto planted = oracle::planted_socp(rng, rng.uniform_int(2, 8), rng.uniform_int(2, 6));
    const SolveReport r = solve(planted.problem);
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(std::abs(r.objective_value - planted.optimum) <=
          1e-6 * std::max(1.0, std::abs(planted.optimum)));
    CHECK(residuals(planted.problem, r.x).primal_violation <= 1e-8);
    // The planted point is feasible, so it is a witness lower bound.
    CHECK(r.objective_value >= planted.problem.objective.dot(planted.x_star) - 1e-6);
  }
}

TEST_CASE("warm start changes the path, not the optimum") {
  RngStream rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto planted = oracle::planted_socp(rng, 5, 4);
    const SolveReport cold = solve(planted.problem);
    SolverSettings s;
    s.warm_start = planted.x_star;
    const SolveReport warm = solve(planted.problem, s);
    REQUIRE(cold.status == SolveStatus::optimal);
    REQUIRE(warm.status == SolveStatus::optimal);
    CHECK(std::abs(cold.objective_value - warm.objective_value) <=
          1e-7 * std::max(1.0, std::abs(cold.objective_value)));
  }
}

TEST_CASE("solver is deterministic") {
  RngStream rng(4);
  const auto planted = oracle::planted_socp(rng, 6, 5);
  const SolveReport a = solve(planted.problem);
  const SolveReport b = solve(planted.problem);
  CHECK((a.x - b.x).norm() == 0.0);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("optimal reports satisfy the status contract") {
  RngStream rng(5);
  const SolverSettings s;
  for (int t = 0; t < 10; ++t) {
    const auto planted = oracle::planted_socp(rng, 4, 3);
    const SolveReport r = solve(planted.problem, s);
    if (r.status == SolveStatus::optimal) {
      CHECK(r.primal_residual <= s.feas_tol);
      CHECK(r.dual_gap_estimate <= s.gap_tol);
    }
  }
}

TEST_CASE("text dump header") {
  SocpProblem p;
  p.nvars = 2;
  p.objective = Eigen::Vector2d(1.0, 0.0);
  p.cones.push_back(norm_ball(2, 1.0));
  std::ostringstream os;
  write_socp_text(os, p);
  CHECK(os.str().rfind("socp 2 1", 0) == 0);
}
