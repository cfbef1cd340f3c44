#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optigon/ccp.hpp"
#include "optigon/geometry.hpp"

namespace optigon {

/// Best lower bound on A_n* reported before this solver, with its source tag.
struct LiteratureBound {
  int n;
  double value;
  const char* source;
};

std::span<const LiteratureBound> literature_bounds();
std::optional<double> literature_lower_bound(int n);

struct SweepRow {
  int n = 0;
  double area_pendant = 0.0;
  std::optional<double> literature_lower_bound;
  double upper_bound = 0.0;
  double area_computed = 0.0;
  int outer_iterations = 0;
  bool structure_pass = false;
};

SweepRow make_row(const CcpResult& result);

// Columns: n | A(R+_{n-1}) | lower bound | upper bound | A_n* | k, areas with 10 decimals.
std::string render_table_text(std::span<const SweepRow> rows);
std::string render_table_csv(std::span<const SweepRow> rows);

struct SvgOptions {
  bool labels = false;
  double tol_diam = kDefaultTolDiam;
  int size_px = 400;
};

/// Dashed boundary, solid unit-distance chords.
std::string render_svg(const Polygond& p, const SvgOptions& options = {});

// k,area,rel_step,solver_iterations,max_residual
std::string trace_to_csv(const CcpTrace& trace);

/// 64-bit FNV-1a of `bytes` as 16 hex digits.
std::string content_hash(const std::string& bytes);

struct ExportedFiles {
  std::filesystem::path polygon;
  std::filesystem::path trace;
  std::filesystem::path structure;
  std::filesystem::path svg;
};

ExportedFiles export_run(const CcpResult& result, const std::filesystem::path& dir, const SvgOptions& svg = {});

/// One subdirectory n<N> per converged entry.
std::vector<ExportedFiles> export_sweep(std::span<const SweepEntry> entries, const std::filesystem::path& dir);

}  // namespace optigon
