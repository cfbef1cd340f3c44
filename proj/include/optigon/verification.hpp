#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optigon/geometry.hpp"

namespace optigon {

inline constexpr double kFinalVerifyTol = 1e-6;
inline constexpr double kIntermediateVerifyTol = 1e-4;

struct UnitEdgeDefect {
  std::pair<int, int> pair;
  double defect = 0.0;  // | ||v_i - v_j|| - 1 |
};

/// Structural checks on an even small polygon: the diameter graph is an
/// (n-1)-cycle plus a pendant edge, the polygon is mirror symmetric about
/// x = 0, and the expected vertex pairs sit at unit distance.
struct StructureReport {
  int n = 0;
  double tol = 0.0;

  bool has_pendant_cycle = false;
  int cycle_length = 0;
  std::optional<int> pendant_vertex;
  int edge_count = 0;

  double symmetry_defect = 0.0;
  double apex_defect = 0.0;
  bool symmetric = false;

  std::vector<UnitEdgeDefect> unit_edge_defects;
  bool unit_equalities = false;

  double max_defect = 0.0;

  bool passed() const { return has_pendant_cycle && symmetric && unit_equalities; }
};

/// Vertex pairs expected at unit distance in the optimal even n-gon,
/// excluding the pendant edge {0, n/2}.
std::vector<std::pair<int, int>> expected_unit_pairs(int n);

// Throws DiameterExceeded when the polygon is not small within tol.
void check_theorem2(const Polygond& p, double tol, StructureReport& report);
void check_symmetry(const Polygond& p, double tol, StructureReport& report);
void check_unit_equalities(const Polygond& p, double tol, StructureReport& report);

StructureReport verify_structure(const Polygond& p, double tol = kFinalVerifyTol);

std::string to_json(const StructureReport& report);

}  // namespace optigon
