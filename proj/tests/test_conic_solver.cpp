#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "optigon/conic_solver.hpp"

using namespace optigon;

namespace {

AffineForm var(int i, double c = 1.0) { return AffineForm::variable(i, c); }
AffineForm cst(double c) { return AffineForm::constant_form(c); }

SubproblemConstraint sos(std::vector<AffineForm> squares, AffineForm bound) {
  SubproblemConstraint s;
  s.squares = std::move(squares);
  s.bound = std::move(bound);
  return s;
}

SolverResult run(const Eigen::VectorXd& objective, const std::vector<SubproblemConstraint>& cons,
                 const SolverConfig& cfg = {}) {
  return solve(lift(objective, cons), cfg);
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

// Symmetric 6-gon slice: v1 = (a, b), v2 = (c, d), v3 = (0, 1), v4 = (-c, d), v5 = (-a, b).
// The u_i are set to their largest value allowed by the restriction. The optimum
// sits where several constraints are active, so each zoom round accepts points
// violating them by at most `margin`, which shrinks with the grid spacing.
struct SliceOracle {
  const ConvexSubproblem& sub;
  DecisionLayout L{6};

  std::optional<double> value(double a, double b, double c, double d, double margin = 0.0) const {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(L.dim());
    const double xs[] = {0, a, c, 0, -c, -a};
    const double ys[] = {0, b, d, 1, d, b};
    for (int i = 1; i <= 5; ++i) {
      z[L.x(i)] = xs[i];
      z[L.y(i)] = ys[i];
    }
    for (const auto& con : sub.constraints) {
      if (con.family != Family::TriangleArea) continue;
      // sum of squares <= bound(z) where bound contains -8 u_i
      z[L.u(con.i)] = 0.0;
      double sq = 0.0;
      for (const auto& l : con.squares) sq += l.eval(z) * l.eval(z);
      z[L.u(con.i)] = (con.bound.eval(z) - sq) / 8.0;
    }
    if (sub.slacks(z).minCoeff() < -margin) return std::nullopt;
    return z.tail(4).sum();
  }

  double maximize() const {
    std::array<double, 4> best{};
    double best_val = -1.0;
    const double h0 = 0.02;
    for (double a = 0.0; a <= 0.5 + 1e-12; a += h0)
      for (double b = 0.0; b <= 1.0 + 1e-12; b += h0)
        for (double c = 0.0; c <= 0.5 + 1e-12; c += h0)
          for (double d = 0.0; d <= 1.0 + 1e-12; d += h0) {
            const auto v = value(a, b, c, d);
            if (v && *v > best_val) {
              best_val = *v;
              best = {a, b, c, d};
            }
          }
    REQUIRE(best_val > 0.0);
    // Zoom: a 9^4 grid around the incumbent, halving the spacing each round.
    for (double h = h0 / 2.0; h > 1e-9; h /= 2.0) {
      const std::array<double, 4> centre = best;
      best_val = -1.0;
      for (int i = -4; i <= 4; ++i)
        for (int j = -4; j <= 4; ++j)
          for (int k = -4; k <= 4; ++k)
            for (int l = -4; l <= 4; ++l) {
              const double a = centre[0] + i * h, b = centre[1] + j * h, c = centre[2] + k * h,
                           d = centre[3] + l * h;
              const auto v = value(a, b, c, d, 4.0 * h);
              if (v && *v > best_val) {
                best_val = *v;
                best = {a, b, c, d};
              }
            }
      REQUIRE(best_val > 0.0);
    }
    return best_val;
  }
};

}  // namespace

TEST_CASE("maximize x + y over the unit disc") {
  const SolverResult r = run(vec({1, 1}), {sos({var(0), var(1)}, cst(1.0))});
  REQUIRE(r.status == SolverStatus::Optimal);
  CHECK(std::abs(r.objective - std::sqrt(2.0)) < 1e-8);
  CHECK(std::abs(r.x[0] - 1.0 / std::sqrt(2.0)) < 1e-8);
  CHECK(std::abs(r.x[1] - 1.0 / std::sqrt(2.0)) < 1e-8);
}

TEST_CASE("circle and ellipse family") {
  for (double p : {0.25, 1.0, 3.0}) {
    for (double q : {0.5, 2.0}) {
      for (double ang : {0.1, 0.9, 2.0, 4.0}) {
        CAPTURE(p);
        CAPTURE(q);
        CAPTURE(ang);
        const double a1 = std::cos(ang), a2 = std::sin(ang);
        // (x/p)^2 + (y/q)^2 <= 1
        const SolverResult r = run(vec({a1, a2}), {sos({var(0, 1.0 / p), var(1, 1.0 / q)}, cst(1.0))});
        REQUIRE(r.status == SolverStatus::Optimal);
        CHECK(std::abs(r.objective - std::hypot(a1 * p, a2 * q)) < 1e-8);
        // shifted circle of radius rho centred at (1, -2)
        const double rho = p;
        const SolverResult s =
            run(vec({a1, a2}), {sos({var(0) - cst(1.0), var(1) + cst(2.0)}, cst(rho * rho))});
        REQUIRE(s.status == SolverStatus::Optimal);
        CHECK(std::abs(s.objective - (a1 * 1.0 - a2 * 2.0 + rho)) < 1e-8);
      }
    }
  }
}

TEST_CASE("intersection of two discs") {
  const std::vector<SubproblemConstraint> cons = {sos({var(0), var(1)}, cst(1.0)),
                                                  sos({var(0) - cst(1.0), var(1)}, cst(1.0))};
  const SolverResult r = run(vec({0, 1}), cons);
  REQUIRE(r.status == SolverStatus::Optimal);
  CHECK(std::abs(r.objective - std::sqrt(3.0) / 2.0) < 1e-8);
  CHECK(std::abs(r.x[0] - 0.5) < 1e-7);
  const SolverResult s = run(vec({1, 0}), cons);
  REQUIRE(s.status == SolverStatus::Optimal);
  CHECK(std::abs(s.objective - 1.0) < 1e-8);
}

TEST_CASE("rotated cone from a variable bound") {
  // maximize 2x - t subject to x^2 <= t: optimum 1 at x = 1
  const SolverResult r = run(vec({2, -1}), {sos({var(0)}, var(1))});
  REQUIRE(r.status == SolverStatus::Optimal);
  CHECK(std::abs(r.objective - 1.0) < 1e-8);
  // the objective is quadratic around x = 1, so x is only accurate to sqrt(tol)
  CHECK(std::abs(r.x[0] - 1.0) < 1e-4);
  // maximize x + y - u subject to x^2 + y^2 <= u: optimum 1/2
  const SolverResult s = run(vec({1, 1, -1}), {sos({var(0), var(1)}, var(2))});
  REQUIRE(s.status == SolverStatus::Optimal);
  CHECK(std::abs(s.objective - 0.5) < 1e-8);
}

TEST_CASE("linear program") {
  // maximize x + 2y s.t. x >= 0, y >= 0, x + y <= 1, y <= 0.25
  const std::vector<SubproblemConstraint> cons = {sos({}, var(0)), sos({}, var(1)),
                                                  sos({}, cst(1.0) - var(0) - var(1)),
                                                  sos({}, cst(0.25) - var(1))};
  const ConeProblem cone = lift(vec({1, 2}), cons);
  CHECK(cone.count(ConeKind::NonNegative) == 4);
  CHECK(cone.count(ConeKind::SecondOrder) == 0);
  const SolverResult r = solve(cone);
  REQUIRE(r.status == SolverStatus::Optimal);
  CHECK(std::abs(r.objective - 1.25) < 1e-8);
}

TEST_CASE("infeasible problems are reported") {
  // x >= 1 and x <= 0
  const SolverResult a = run(vec({1}), {sos({}, var(0) - cst(1.0)), sos({}, -1.0 * var(0))});
  CHECK(a.status == SolverStatus::Infeasible);
  // two disjoint discs
  const SolverResult b =
      run(vec({1, 0}), {sos({var(0), var(1)}, cst(1.0)), sos({var(0) - cst(3.0), var(1)}, cst(1.0))});
  CHECK(b.status == SolverStatus::Infeasible);
}

TEST_CASE("cone blocks for the six-gon restriction") {
  const DcProgram prog = build_program(6);
  const ConvexSubproblem sub = build_restriction(prog, polygon_to_vector(build_pendant_polygon(6)));
  const ConeProblem cone = lift(sub);
  CHECK(cone.num_vars == 14);
  CHECK(cone.count(ConeKind::SecondOrder) == 19);
  CHECK(cone.count(ConeKind::NonNegative) == 9);
  // 15 blocks of 3 rows, 4 rotated blocks of 4 rows, 9 scalar rows
  CHECK(cone.rows() == 15 * 3 + 4 * 4 + 9);
  CHECK(cone.c.tail(4).isApprox(-Eigen::VectorXd::Ones(4)));
}

TEST_CASE("six-gon restriction against a brute-force slice search") {
  const DcProgram prog = build_program(6);
  const ConvexSubproblem sub = build_restriction(prog, polygon_to_vector(build_pendant_polygon(6)));
  const SolverResult r = solve(lift(sub));
  REQUIRE(r.status == SolverStatus::Optimal);
  const double oracle = SliceOracle{sub}.maximize();
  CHECK(std::abs(r.objective - oracle) < 1e-5);
  CHECK(std::abs(area(vector_to_polygon(prog.layout, r.x)) - 0.6749414624) < 1e-6);
  CHECK(sub.slacks(r.x).minCoeff() >= -1e-8);
}

TEST_CASE("warm start reaches the same optimum") {
  const DcProgram prog = build_program(8);
  const Eigen::VectorXd c = polygon_to_vector(build_pendant_polygon(8));
  const ConeProblem cone = lift(build_restriction(prog, c));
  const SolverResult cold = solve(cone);
  const SolverResult warm = solve(cone, {}, c);
  REQUIRE(cold.status == SolverStatus::Optimal);
  REQUIRE(warm.status == SolverStatus::Optimal);
  CHECK(std::abs(cold.objective - warm.objective) < 1e-8);
  CHECK(warm.iterations <= cold.iterations);
}

TEST_CASE("solver output is deterministic") {
  const DcProgram prog = build_program(10);
  const ConeProblem cone = lift(build_restriction(prog, polygon_to_vector(build_pendant_polygon(10))));
  const SolverResult a = solve(cone);
  const SolverResult b = solve(cone);
  CHECK(a.iterations == b.iterations);
  CHECK(a.x == b.x);
  CHECK(a.objective == b.objective);
}

TEST_CASE("trace and configuration") {
  std::ostringstream trace;
  SolverConfig cfg;
  cfg.trace = &trace;
  const SolverResult r = run(vec({1, 1}), {sos({var(0), var(1)}, cst(1.0))}, cfg);
  REQUIRE(r.status == SolverStatus::Optimal);
  CHECK(trace.str().rfind("iter,pobj,dobj,gap,pres,dres,step", 0) == 0);

  SolverConfig few;
  few.max_iterations = 1;
  CHECK(run(vec({1, 1}), {sos({var(0), var(1)}, cst(1.0))}, few).status == SolverStatus::IterationLimit);

  SolverConfig bad;
  bad.tol_solver = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = SolverConfig{};
  bad.step_fraction = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);
}
