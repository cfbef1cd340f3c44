#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "optigon/conic_solver.hpp"
#include "optigon/formulation.hpp"
#include "optigon/geometry.hpp"
#include "optigon/verification.hpp"

namespace optigon {

enum class StepNorm { Euclidean, MaxAbs };

struct IterateRecord;

struct CcpConfig {
  double epsilon = 1e-5;
  int max_outer_iterations = 1000;
  SolverConfig solver;
  bool record_trace = true;
  StepNorm norm = StepNorm::Euclidean;
  bool warm_start = true;
  double tol_feas = kDefaultTolFeas;
  // Called after every accepted iterate (k >= 1) when trace recording is on.
  std::function<void(const IterateRecord&)> on_iterate;

  // Also enforces solver.tol_solver <= epsilon / 100.
  void validate() const;
};

enum class CcpStatus { Converged, OuterLimit, SubproblemFailure };

const char* to_string(CcpStatus s);

struct IterateRecord {
  int k = 0;
  Eigen::VectorXd z;
  double area = 0.0;       // polygon area of the (x, y) part of z
  double objective = 0.0;  // sum of u_i
  double rel_step = 0.0;   // ||z_k - z_{k-1}|| / ||z_k||; 0 for k = 0
  int solver_iterations = 0;
  SolverStatus solver_status = SolverStatus::Optimal;
  double solver_gap = 0.0;
  double max_violation = 0.0;  // max(0, -min_i (g_i - h_i)) at z_k
  std::optional<StructureReport> structure;
};

struct CcpTrace {
  std::vector<IterateRecord> iterates;
};

struct CcpResult {
  int n = 0;
  Polygond polygon;
  Eigen::VectorXd z;
  double area = 0.0;
  int iterations = 0;  // k at loop exit, i.e. number of subproblem solves
  CcpStatus status = CcpStatus::SubproblemFailure;
  std::string message;
  std::optional<CcpTrace> trace;
};

struct StepResult {
  Eigen::VectorXd z;
  SolverResult solver;
};

double relative_step(const Eigen::VectorXd& current, const Eigen::VectorXd& previous, StepNorm norm);

/// One iteration of the sequential convex scheme: solve the convex
/// restriction built at z_k.
StepResult step(const DcProgram& prog, const Eigen::VectorXd& z_k, const CcpConfig& cfg,
                const std::optional<Eigen::VectorXd>& warm_start = std::nullopt);

/// Maximize the area of a small n-gon starting from `initial` (default R+_{n-1}).
CcpResult maximize_area(int n, const CcpConfig& cfg = {}, const std::optional<Polygond>& initial = std::nullopt);

struct SweepEntry {
  int n = 0;
  std::optional<CcpResult> result;
  std::string error;  // set when the run threw before producing a result

  bool ok() const { return result && result->status == CcpStatus::Converged; }
};

/// Independent runs, results in input order. `jobs` > 1 runs entries on worker threads.
std::vector<SweepEntry> run_sweep(const std::vector<int>& n_values, const CcpConfig& cfg, int jobs = 1);

}  // namespace optigon
