#include "optigon/reporting.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>

#include "optigon/polygon_io.hpp"
#include "optigon/verification.hpp"

namespace optigon {

namespace {

constexpr const char* kMossinghoff = "mossinghoff2006b";
constexpr const char* kPinter = "pinter2018";

// Lower-bound column of the published results table for 6 <= n <= 80.
constexpr std::array<LiteratureBound, 38> kLiterature{{
    {6, 0.6749814429, "bieri1961,graham1975,mossinghoff2006b"},
    {8, 0.7268684828, "audet2002,mossinghoff2006b"},
    {10, 0.7491373459, "henrion2013,mossinghoff2006b"},
    {12, 0.7607298734, "henrion2013,mossinghoff2006b"},
    {14, 0.7675310111, kMossinghoff},
    {16, 0.7718613220, kMossinghoff},
    {18, 0.7747881651, kMossinghoff},
    {20, 0.7768587560, kMossinghoff},
    {22, 0.7783773308, kPinter},
    {24, 0.7795240461, kPinter},
    {26, 0.7804111201, kPinter},
    {28, 0.7811114192, kPinter},
    {30, 0.7816739255, kPinter},
    {32, 0.7818946320, kPinter},
    {34, 0.7823103007, kPinter},
    {36, 0.7826513767, kPinter},
    {38, 0.7829526627, kPinter},
    {40, 0.7832011589, kPinter},
    {42, 0.7834135187, kPinter},
    {44, 0.7835966860, kPinter},
    {46, 0.7837554636, kPinter},
    {48, 0.7838942710, kPinter},
    {50, 0.7840161496, kPinter},
    {52, 0.7841233641, kPinter},
    {54, 0.7842192995, kPinter},
    {56, 0.7843044654, kPinter},
    {58, 0.7843807534, kPinter},
    {60, 0.7844492943, kPinter},
    {62, 0.7845111362, kPinter},
    {64, 0.7834620877, kPinter},
    {66, 0.7845910589, kPinter},
    {68, 0.7846139029, kPinter},
    {70, 0.7846403575, kPinter},
    {72, 0.7847454020, kPinter},
    {74, 0.7845564840, kPinter},
    {76, 0.7847585719, kPinter},
    {78, 0.7845160579, kPinter},
    {80, 0.7848252941, kPinter},
}};

std::string fixed10(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

std::string num(double v, const char* fmt = "%.6f") {
  char buf[32];
  std::snprintf(buf, sizeof buf, fmt, v);
  // Avoid "-0.000000" so mirrored output stays byte-stable.
  if (std::string(buf).find_first_not_of("-0.") == std::string::npos) return std::string(buf + (buf[0] == '-'));
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

}  // namespace

std::span<const LiteratureBound> literature_bounds() { return kLiterature; }

std::optional<double> literature_lower_bound(int n) {
  for (const auto& b : kLiterature) {
    if (b.n == n) return b.value;
  }
  return std::nullopt;
}

SweepRow make_row(const CcpResult& result) {
  SweepRow row;
  row.n = result.n;
  row.area_pendant = pendant_area(result.n);
  row.literature_lower_bound = literature_lower_bound(result.n);
  row.upper_bound = upper_bound(result.n);
  row.area_computed = result.area;
  row.outer_iterations = result.iterations;
  try {
    row.structure_pass = verify_structure(result.polygon, kFinalVerifyTol).passed();
  } catch (const Error&) {
    row.structure_pass = false;
  }
  return row;
}

std::string render_table_text(std::span<const SweepRow> rows) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%4s | %-12s | %-12s | %-12s | %-12s | %5s\n", "n", "A(R+_{n-1})", "lower bound",
                "upper bound", "A_n*", "k");
  out += buf;
  out += std::string(4, '-') + "-+-" + std::string(12, '-') + "-+-" + std::string(12, '-') + "-+-" +
         std::string(12, '-') + "-+-" + std::string(12, '-') + "-+-" + std::string(5, '-') + "\n";
  for (const auto& r : rows) {
    const std::string lb = r.literature_lower_bound ? fixed10(*r.literature_lower_bound) : "--";
    std::snprintf(buf, sizeof buf, "%4d | %-12s | %-12s | %-12s | %-12s | %5d\n", r.n, fixed10(r.area_pendant).c_str(),
                  lb.c_str(), fixed10(r.upper_bound).c_str(), fixed10(r.area_computed).c_str(), r.outer_iterations);
    out += buf;
  }
  return out;
}

std::string render_table_csv(std::span<const SweepRow> rows) {
  std::string out = "n,area_pendant,literature_lower_bound,upper_bound,area_computed,k,structure\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + fixed10(r.area_pendant) + "," +
           (r.literature_lower_bound ? fixed10(*r.literature_lower_bound) : "--") + "," + fixed10(r.upper_bound) + "," +
           fixed10(r.area_computed) + "," + std::to_string(r.outer_iterations) + "," +
           (r.structure_pass ? "pass" : "fail") + "\n";
  }
  return out;
}

std::string render_svg(const Polygond& p, const SvgOptions& options) {
  const DiameterGraph g = diameter_graph(p, options.tol_diam);
  const Eigen::Vector2d lo = p.vertices().rowwise().minCoeff();
  const Eigen::Vector2d hi = p.vertices().rowwise().maxCoeff();
  const double extent = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-9});
  const double margin = 0.05 * extent;
  const double w = hi.x() - lo.x() + 2 * margin;
  const double h = hi.y() - lo.y() + 2 * margin;
  const int px_w = std::max(1, static_cast<int>(options.size_px * w / std::max(w, h) + 0.5));
  const int px_h = std::max(1, static_cast<int>(options.size_px * h / std::max(w, h) + 0.5));
  const double stroke = 0.004 * extent;

  // SVG's y axis points down; emit (x, -y).
  auto pt = [&](int i, const char* xa, const char* ya) {
    return std::string(" ") + xa + "=\"" + num(p.x(i)) + "\" " + ya + "=\"" + num(-p.y(i)) + "\"";
  };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(px_w) +
         "\" height=\"" + std::to_string(px_h) + "\" viewBox=\"" + num(lo.x() - margin) + " " +
         num(-hi.y() - margin) + " " + num(w) + " " + num(h) + "\">\n";
  out += "<g fill=\"none\" stroke=\"black\" stroke-width=\"" + num(stroke) + "\">\n";
  for (int i = 0; i < p.n(); ++i) {
    const int j = (i + 1) % p.n();
    out += "<line class=\"boundary\"" + pt(i, "x1", "y1") + pt(j, "x2", "y2") + " stroke-dasharray=\"" +
           num(4 * stroke) + " " + num(3 * stroke) + "\"/>\n";
  }
  for (const auto& [i, j] : g.edges) {
    out += "<line class=\"chord\"" + pt(i, "x1", "y1") + pt(j, "x2", "y2") + "/>\n";
  }
  out += "</g>\n";
  if (options.labels) {
    out += "<g font-size=\"" + num(0.04 * extent) + "\" font-family=\"sans-serif\">\n";
    for (int i = 0; i < p.n(); ++i) {
      out += "<text class=\"label\"" + pt(i, "x", "y") + ">v" + std::to_string(i) + "</text>\n";
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string trace_to_csv(const CcpTrace& trace) {
  std::string out = "k,area,rel_step,solver_iterations,max_residual\n";
  char buf[160];
  for (const auto& it : trace.iterates) {
    std::snprintf(buf, sizeof buf, "%d,%.12f,%.6e,%d,%.3e\n", it.k, it.area, it.rel_step, it.solver_iterations,
                  it.max_violation);
    out += buf;
  }
  return out;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExportedFiles export_run(const CcpResult& result, const std::filesystem::path& dir, const SvgOptions& svg) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  const std::string poly_json = polygon_to_json(result.polygon);
  const std::string stem = "ngon" + std::to_string(result.n) + "-" + content_hash(poly_json).substr(0, 12);

  ExportedFiles files{dir / (stem + ".json"), dir / (stem + "-trace.csv"), dir / (stem + "-structure.json"),
                      dir / (stem + ".svg")};
  write_file(files.polygon, poly_json);

  CcpTrace trace;
  if (result.trace) {
    trace = *result.trace;
  } else {
    IterateRecord last;
    last.k = result.iterations;
    last.area = result.area;
    trace.iterates.push_back(last);
  }
  write_file(files.trace, trace_to_csv(trace));

  StructureReport report;
  try {
    report = verify_structure(result.polygon, kFinalVerifyTol);
  } catch (const Error&) {
    report.n = result.n;
    report.tol = kFinalVerifyTol;
  }
  write_file(files.structure, to_json(report));

  SvgOptions svg_opts = svg;
  svg_opts.tol_diam = std::max(svg_opts.tol_diam, kFinalVerifyTol);
  write_file(files.svg, render_svg(result.polygon, svg_opts));
  return files;
}

std::vector<ExportedFiles> export_sweep(std::span<const SweepEntry> entries, const std::filesystem::path& dir) {
  std::vector<ExportedFiles> out;
  for (const auto& e : entries) {
    if (!e.result) continue;
    out.push_back(export_run(*e.result, dir / ("n" + std::to_string(e.n))));
  }
  return out;
}

}  // namespace optigon
