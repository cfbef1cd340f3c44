// Command-line front end: solve, sweep, verify, render, bounds.
//
// Exit codes: 0 success, 1 solver failure, 2 usage error.
// OPTIGON_LOG=1 prints outer-iteration progress to stderr; OPTIGON_LOG=2 adds
// the interior-point trace (CSV) of every subproblem.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "optigon/ccp.hpp"
#include "optigon/geometry.hpp"
#include "optigon/polygon_io.hpp"
#include "optigon/reporting.hpp"
#include "optigon/verification.hpp"

namespace {

using namespace optigon;

constexpr int kExitOk = 0;
constexpr int kExitSolver = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int log_level() {
  const char* env = std::getenv("OPTIGON_LOG");
  if (!env || !*env) return 0;
  const std::string v = env;
  if (v == "debug") return 2;
  if (v == "info") return 1;
  if (v == "quiet") return 0;
  try {
    return std::stoi(v);
  } catch (...) {
    return 0;
  }
}

std::string fmt10(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

// "6", "6..128"
std::pair<int, int> parse_range(const std::string& text) {
  try {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
      size_t used = 0;
      const int v = std::stoi(text, &used);
      if (used != text.size()) throw UsageError("bad integer");
      return {v, v};
    }
    size_t u1 = 0, u2 = 0;
    const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
    const int lo = std::stoi(a, &u1), hi = std::stoi(b, &u2);
    if (u1 != a.size() || u2 != b.size()) throw UsageError("bad range");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("expected N or A..B, got \"" + text + "\"");
  }
}

struct CommonOptions {
  double eps = 1e-5;
  double solver_tol = 1e-9;
  std::string out = "optigon_runs";
  bool trace = false;
  std::string format = "text";
  int jobs = 1;
};

CcpConfig make_config(const CommonOptions& o, std::mutex& log_mutex) {
  CcpConfig cfg;
  cfg.epsilon = o.eps;
  cfg.solver.tol_solver = o.solver_tol;
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const int level = log_level();
  if (level >= 2) cfg.solver.trace = &std::cerr;
  if (level >= 1) {
    cfg.on_iterate = [&log_mutex](const IterateRecord& r) {
      std::lock_guard<std::mutex> lock(log_mutex);
      std::fprintf(stderr, "[optigon] k=%d area=%.10f rel_step=%.3e ipm_iterations=%d\n", r.k, r.area, r.rel_step,
                   r.solver_iterations);
    };
  }
  return cfg;
}

void require_headline_n(int n) {
  if (n < 6 || n % 2 != 0) throw UsageError("n must be even and >= 6, got " + std::to_string(n));
}

int cmd_solve(int n, const CommonOptions& o, const std::string& svg_path) {
  require_headline_n(n);
  std::mutex log_mutex;
  const CcpConfig cfg = make_config(o, log_mutex);
  const auto t0 = std::chrono::steady_clock::now();
  const CcpResult r = maximize_area(n, cfg);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  StructureReport rep;
  bool structure_ok = false;
  try {
    rep = verify_structure(r.polygon, kFinalVerifyTol);
    structure_ok = rep.passed();
  } catch (const Error&) {
  }

  ExportedFiles files;
  if (!o.out.empty()) files = export_run(r, o.out);
  if (!svg_path.empty()) {
    std::ofstream(svg_path, std::ios::binary) << render_svg(r.polygon, SvgOptions{.labels = true, .tol_diam = kFinalVerifyTol});
  }

  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["status"] = to_string(r.status);
    j["area"] = r.area;
    j["k"] = r.iterations;
    j["structure_pass"] = structure_ok;
    j["seconds"] = seconds;
    j["polygon"] = nlohmann::json::parse(polygon_to_json(r.polygon));
    if (!o.out.empty()) j["polygon_file"] = files.polygon.string();
    std::cout << j.dump(2) << "\n";
  } else if (o.format == "csv") {
    std::cout << "n,status,area,k,structure\n"
              << n << "," << to_string(r.status) << "," << fmt10(r.area) << "," << r.iterations << ","
              << (structure_ok ? "pass" : "fail") << "\n";
  } else {
    std::cout << "n=" << n << " status=" << to_string(r.status) << " area=" << fmt10(r.area) << " k=" << r.iterations
              << "\n";
    std::cout << "structure=" << (structure_ok ? "pass" : "fail") << " pendant_cycle=" << (rep.has_pendant_cycle ? "yes" : "no")
              << " symmetry_defect=" << rep.symmetry_defect << " max_defect=" << rep.max_defect << "\n";
    if (!o.out.empty()) std::cout << "artifacts: " << files.polygon.parent_path().string() << "\n";
  }
  if (o.trace && r.trace) std::cout << trace_to_csv(*r.trace);
  if (r.status != CcpStatus::Converged) {
    std::cerr << "optigon: " << r.message << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_sweep(int from, int to, int step_n, const CommonOptions& o) {
  if (step_n <= 0 || step_n % 2 != 0) throw UsageError("--step must be a positive even number");
  require_headline_n(from);
  if (to < from) throw UsageError("--to must be >= --from");
  if (o.jobs < 1) throw UsageError("--jobs must be >= 1");
  std::vector<int> ns;
  for (int n = from; n <= to; n += step_n) ns.push_back(n);

  std::mutex log_mutex;
  const CcpConfig cfg = make_config(o, log_mutex);
  const std::vector<SweepEntry> entries = run_sweep(ns, cfg, o.jobs);

  std::vector<SweepRow> rows;
  std::vector<std::string> failures;
  for (const auto& e : entries) {
    if (e.result) rows.push_back(make_row(*e.result));
    if (!e.ok()) failures.push_back("n=" + std::to_string(e.n) + ": " + e.error);
  }
  if (!o.out.empty()) export_sweep(entries, o.out);
  if (o.format == "csv") {
    std::cout << render_table_csv(rows);
  } else {
    std::cout << render_table_text(rows);
  }
  if (o.trace) {
    for (const auto& e : entries) {
      if (e.result && e.result->trace) std::cout << "# n=" << e.n << "\n" << trace_to_csv(*e.result->trace);
    }
  }
  if (!failures.empty()) {
    std::cerr << "optigon: " << failures.size() << " of " << entries.size() << " runs failed\n";
    for (const auto& f : failures) std::cerr << "  " << f << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_verify(const std::string& input, double tol, const std::string& format) {
  const Polygond p = read_polygon(input);
  StructureReport rep;
  try {
    rep = verify_structure(p, tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DiameterExceeded) throw;
    std::cerr << "optigon: " << e.what() << "\n";
    rep.n = p.n();
    rep.tol = tol;
    check_symmetry(p, tol, rep);
    check_unit_equalities(p, tol, rep);
  }
  if (format == "json") {
    std::cout << to_json(rep);
  } else {
    std::cout << "n=" << p.n() << " area=" << fmt10(area(p)) << " diameter=" << fmt10(diameter(p)) << "\n";
    std::cout << "pendant_cycle=" << (rep.has_pendant_cycle ? "yes" : "no") << " cycle_length=" << rep.cycle_length
              << " pendant_vertex=" << (rep.pendant_vertex ? std::to_string(*rep.pendant_vertex) : "--") << "\n";
    std::cout << "symmetric=" << (rep.symmetric ? "yes" : "no") << " symmetry_defect=" << rep.symmetry_defect
              << " apex_defect=" << rep.apex_defect << "\n";
    std::cout << "unit_equalities=" << (rep.unit_equalities ? "yes" : "no") << " max_defect=" << rep.max_defect
              << "\n";
    std::cout << "structure=" << (rep.passed() ? "pass" : "fail") << "\n";
  }
  return kExitOk;
}

int cmd_render(const std::string& input, const std::string& svg_path, double tol, bool labels) {
  const Polygond p = read_polygon(input);
  const std::string svg = render_svg(p, SvgOptions{.labels = labels, .tol_diam = tol});
  if (svg_path.empty() || svg_path == "-") {
    std::cout << svg;
  } else {
    std::ofstream out(svg_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + svg_path);
    out << svg;
  }
  return kExitOk;
}

int cmd_bounds(const std::string& range, int step_n, const std::string& format) {
  const auto [lo, hi] = parse_range(range);
  if (lo < 3 || hi < lo) throw UsageError("bounds needs 3 <= A <= B");
  if (step_n <= 0) throw UsageError("--step must be positive");
  const bool csv = format == "csv";
  if (csv) {
    std::cout << "n,area_regular,area_pendant,literature_lower_bound,upper_bound\n";
  } else {
    std::printf("%4s | %-12s | %-12s | %-12s | %-12s\n", "n", "A(R_n)", "A(R+_{n-1})", "lower bound", "upper bound");
  }
  for (int n = lo; n <= hi; n += step_n) {
    const BoundsRecord b = bounds(n);
    const auto lit = literature_lower_bound(n);
    const std::string pend = b.area_pendant ? fmt10(*b.area_pendant) : "--";
    const std::string litv = lit ? fmt10(*lit) : "--";
    if (csv) {
      std::cout << n << "," << fmt10(b.area_regular) << "," << pend << "," << litv << "," << fmt10(b.upper_bound)
                << "\n";
    } else {
      std::printf("%4d | %-12s | %-12s | %-12s | %-12s\n", n, fmt10(b.area_regular).c_str(), pend.c_str(),
                  litv.c_str(), fmt10(b.upper_bound).c_str());
    }
  }
  std::cout.flush();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Largest small polygons by sequential convex optimization"};
  app.require_subcommand(1);

  CommonOptions opts;
  auto add_common = [&opts](CLI::App* sub) {
    sub->add_option("--eps", opts.eps, "relative-step stopping threshold")->capture_default_str();
    sub->add_option("--solver-tol", opts.solver_tol, "interior-point tolerance")->capture_default_str();
    sub->add_option("--out", opts.out, "artifact directory (empty to skip)")->capture_default_str();
    sub->add_flag("--trace", opts.trace, "print the iterate trace as CSV");
    sub->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
  };

  int n = 0;
  std::string svg_path;
  auto* solve_cmd = app.add_subcommand("solve", "maximize the area of a small n-gon");
  solve_cmd->add_option("--n", n, "number of vertices (even, >= 6)")->required();
  solve_cmd->add_option("--svg", svg_path, "also write a labelled SVG of the result");
  add_common(solve_cmd);

  int from = 6, to = 128, step_n = 2;
  auto* sweep_cmd = app.add_subcommand("sweep", "solve a range of n and print the results table");
  sweep_cmd->add_option("--from", from)->capture_default_str();
  sweep_cmd->add_option("--to", to)->capture_default_str();
  sweep_cmd->add_option("--step", step_n)->capture_default_str();
  sweep_cmd->add_option("--jobs", opts.jobs, "parallel runs")->capture_default_str();
  add_common(sweep_cmd);

  std::string input;
  double tol = kFinalVerifyTol;
  auto* verify_cmd = app.add_subcommand("verify", "check diameter-graph, symmetry and unit-distance structure");
  verify_cmd->add_option("--input", input, "polygon JSON")->required();
  verify_cmd->add_option("--tol", tol)->capture_default_str();
  verify_cmd->add_option("--format", opts.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  bool labels = false;
  auto* render_cmd = app.add_subcommand("render", "draw a polygon and its diameter graph as SVG");
  render_cmd->add_option("--input", input, "polygon JSON")->required();
  render_cmd->add_option("--svg", svg_path, "output file (stdout if omitted)");
  render_cmd->add_option("--tol", tol, "unit-distance tolerance for chords")->capture_default_str();
  render_cmd->add_flag("--labels", labels, "label vertices");

  std::string range = "6..128";
  int bounds_step = 2;
  auto* bounds_cmd = app.add_subcommand("bounds", "print closed-form reference areas");
  bounds_cmd->add_option("--n", range, "N or A..B")->capture_default_str();
  bounds_cmd->add_option("--step", bounds_step)->capture_default_str();
  bounds_cmd->add_option("--format", opts.format)->check(CLI::IsMember({"text", "csv"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(n, opts, svg_path);
    if (sweep_cmd->parsed()) return cmd_sweep(from, to, step_n, opts);
    if (verify_cmd->parsed()) return cmd_verify(input, tol, opts.format);
    if (render_cmd->parsed()) return cmd_render(input, svg_path, tol, labels);
    if (bounds_cmd->parsed()) return cmd_bounds(range, bounds_step, opts.format);
  } catch (const UsageError& e) {
    std::cerr << "optigon: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "optigon: " << e.what() << "\n";
    const bool usage = e.code() == ErrorCode::ParseError || e.code() == ErrorCode::Io ||
                       e.code() == ErrorCode::TooSmallN || e.code() == ErrorCode::OddN ||
                       e.code() == ErrorCode::DimensionMismatch || e.code() == ErrorCode::NonFinite ||
                       e.code() == ErrorCode::InvalidConfig;
    return usage ? kExitUsage : kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "optigon: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}
