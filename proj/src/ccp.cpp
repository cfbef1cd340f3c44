#include "optigon/ccp.hpp"

#include <atomic>
#include <thread>

namespace optigon {

const char* to_string(CcpStatus s) {
  switch (s) {
    case CcpStatus::Converged: return "Converged";
    case CcpStatus::OuterLimit: return "OuterLimit";
    case CcpStatus::SubproblemFailure: return "SubproblemFailure";
  }
  return "?";
}

void CcpConfig::validate() const {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidConfig, "epsilon must be positive");
  if (max_outer_iterations < 1) throw Error(ErrorCode::InvalidConfig, "max_outer_iterations must be >= 1");
  solver.validate();
  if (solver.tol_solver > epsilon / 100.0) {
    throw Error(ErrorCode::InvalidConfig, "solver tolerance must be at most epsilon / 100");
  }
}

double relative_step(const Eigen::VectorXd& current, const Eigen::VectorXd& previous, StepNorm norm) {
  if (norm == StepNorm::MaxAbs) {
    return (current - previous).lpNorm<Eigen::Infinity>() / current.lpNorm<Eigen::Infinity>();
  }
  return (current - previous).norm() / current.norm();
}

StepResult step(const DcProgram& prog, const Eigen::VectorXd& z_k, const CcpConfig& cfg,
                const std::optional<Eigen::VectorXd>& warm_start) {
  const ConvexSubproblem sub = build_restriction(prog, z_k);
  const ConeProblem cone = lift(sub);
  StepResult out;
  out.solver = solve(cone, cfg.solver, warm_start);
  out.z = out.solver.x;
  return out;
}

namespace {

IterateRecord make_record(const DcProgram& prog, int k, const Eigen::VectorXd& z, bool with_structure) {
  IterateRecord rec;
  rec.k = k;
  rec.z = z;
  const ResidualReport rep = evaluate(prog, z);
  rec.objective = rep.objective;
  rec.max_violation = rep.max_violation();
  const Polygond poly = vector_to_polygon(prog.layout, z);
  rec.area = area(poly);
  if (with_structure) {
    // Early iterates are held to the looser tolerance; the final one is re-checked by the caller.
    try {
      rec.structure = verify_structure(poly, kIntermediateVerifyTol);
    } catch (const Error&) {
      rec.structure = StructureReport{};
    }
  }
  return rec;
}

}  // namespace

CcpResult maximize_area(int n, const CcpConfig& cfg, const std::optional<Polygond>& initial) {
  cfg.validate();
  const DcProgram prog = build_program(n);
  const bool structural = n >= 6 && n % 2 == 0;

  Polygond start = initial ? *initial : build_pendant_polygon(n);
  if (start.n() != n) throw Error(ErrorCode::DimensionMismatch, "initial polygon has the wrong vertex count");
  Eigen::VectorXd z = polygon_to_vector(start);
  const ResidualReport rep0 = evaluate(prog, z);
  if (rep0.min_residual < -cfg.tol_feas || !validate(start, cfg.tol_feas).ok()) {
    throw Error(ErrorCode::InfeasibleInitial,
                "initial polygon violates the constraints by " + std::to_string(rep0.max_violation()));
  }

  CcpResult res;
  res.n = n;
  CcpTrace trace;
  if (cfg.record_trace) trace.iterates.push_back(make_record(prog, 0, z, structural));

  auto finish = [&](CcpStatus status, const Eigen::VectorXd& zf, int k) {
    res.status = status;
    res.z = zf;
    res.polygon = vector_to_polygon(prog.layout, zf);
    res.area = area(res.polygon);
    res.iterations = k;
    if (cfg.record_trace) res.trace = std::move(trace);
    return res;
  };

  int k = 0;
  Eigen::VectorXd prev = z;
  for (;;) {
    if (k >= cfg.max_outer_iterations) {
      res.message = "outer iteration limit reached";
      return finish(CcpStatus::OuterLimit, z, k);
    }
    const std::optional<Eigen::VectorXd> warm = cfg.warm_start ? std::optional<Eigen::VectorXd>(z) : std::nullopt;
    StepResult st = step(prog, z, cfg, warm);
    if (st.solver.status != SolverStatus::Optimal) {
      res.message = std::string("subproblem solver returned ") + to_string(st.solver.status) + " at k=" +
                    std::to_string(k + 1);
      return finish(CcpStatus::SubproblemFailure, z, k);
    }
    prev = z;
    z = st.z;
    ++k;
    const double rel = relative_step(z, prev, cfg.norm);
    if (cfg.record_trace) {
      IterateRecord rec = make_record(prog, k, z, structural);
      rec.rel_step = rel;
      rec.solver_iterations = st.solver.iterations;
      rec.solver_status = st.solver.status;
      rec.solver_gap = st.solver.gap;
      if (cfg.on_iterate) cfg.on_iterate(rec);
      trace.iterates.push_back(std::move(rec));
    }
    if (rel <= cfg.epsilon) return finish(CcpStatus::Converged, z, k);
  }
}

std::vector<SweepEntry> run_sweep(const std::vector<int>& n_values, const CcpConfig& cfg, int jobs) {
  std::vector<SweepEntry> out(n_values.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < n_values.size(); i = next++) {
      out[i].n = n_values[i];
      try {
        require_even_at_least_6(n_values[i]);
        out[i].result = maximize_area(n_values[i], cfg);
        if (out[i].result->status != CcpStatus::Converged) out[i].error = out[i].result->message;
      } catch (const std::exception& e) {
        out[i].error = e.what();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n_values.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace optigon
