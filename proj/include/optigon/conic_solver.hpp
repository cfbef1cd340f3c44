#pragma once

#include <Eigen/Dense>

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "optigon/formulation.hpp"

namespace optigon {

enum class ConeKind { NonNegative, SecondOrder };

/// One cone membership s = h - G x_local in K, where x_local = x(vars).
/// SecondOrder blocks use the ordering s = (t, s_1, ..., s_q) with t >= ||s_1..q||.
struct ConeBlock {
  ConeKind kind = ConeKind::NonNegative;
  Family family = Family::Distance;
  int arity = 0;  // number of squared linear forms lifted into this block
  std::vector<int> vars;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;

  int rows() const { return static_cast<int>(h.size()); }
};

/// minimize c^T x subject to G x + s = h, s in K = product of the blocks.
/// The lifted maximization is stored negated: c = -objective.
struct ConeProblem {
  int num_vars = 0;
  Eigen::VectorXd c;
  std::vector<ConeBlock> blocks;

  int count(ConeKind kind) const;
  int rows() const;
};

enum class SolverStatus { Optimal, Infeasible, IterationLimit, NumericalFailure };

const char* to_string(SolverStatus s);

struct SolverConfig {
  double tol_solver = 1e-9;
  int max_iterations = 200;
  double step_fraction = 0.99;
  double regularization = 1e-12;
  // One CSV line per iteration when set: iter,pobj,dobj,gap,pres,dres,step
  std::ostream* trace = nullptr;

  void validate() const;
};

struct SolverResult {
  SolverStatus status = SolverStatus::NumericalFailure;
  Eigen::VectorXd x;
  double objective = 0.0;  // in the maximization sense of the original problem
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
};

ConeProblem lift(const Eigen::VectorXd& objective, std::span<const SubproblemConstraint> constraints);
ConeProblem lift(const ConvexSubproblem& sub);

/// Primal-dual interior-point method with Nesterov-Todd scaling and
/// Mehrotra predictor-corrector steps on a dense normal-equations system.
SolverResult solve(const ConeProblem& cone, const SolverConfig& cfg = {},
                   const std::optional<Eigen::VectorXd>& warm_start = std::nullopt);

}  // namespace optigon
