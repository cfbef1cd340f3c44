#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "optigon/geometry.hpp"

namespace optigon {

/// Flat positions of the decision variables z = (x_1..x_{n-1}, y_1..y_{n-1}, u_1..u_{n-2}).
/// x_0 = y_0 = 0 are fixed by convention and have no slot.
struct DecisionLayout {
  int n = 0;

  int dim() const { return 3 * n - 4; }
  int x(int i) const { return i - 1; }
  int y(int i) const { return n - 1 + i - 1; }
  int u(int i) const { return 2 * (n - 1) + i - 1; }
};

struct LinearTerm {
  int index = 0;
  double coeff = 0.0;
};

/// a(z) = sum_k coeff_k z_{index_k} + constant, with sorted unique indices.
struct AffineForm {
  std::vector<LinearTerm> terms;
  double constant = 0.0;

  static AffineForm constant_form(double c) { return AffineForm{{}, c}; }
  static AffineForm variable(int index, double coeff = 1.0) { return AffineForm{{{index, coeff}}, 0.0}; }

  double eval(const Eigen::VectorXd& z) const {
    double v = constant;
    for (const auto& t : terms) v += t.coeff * z[t.index];
    return v;
  }
  bool is_constant() const { return terms.empty(); }
};

AffineForm operator+(const AffineForm& a, const AffineForm& b);
AffineForm operator-(const AffineForm& a, const AffineForm& b);
AffineForm operator*(double s, const AffineForm& a);

/// q(z) = sum_k l_k(z)^2 + linear(z). Stored as squares of affine forms so
/// positive semidefiniteness of the quadratic part holds by construction.
struct ConvexQuadratic {
  std::vector<AffineForm> squares;
  AffineForm linear;

  double eval(const Eigen::VectorXd& z) const;
  void add_gradient(const Eigen::VectorXd& z, double scale, Eigen::VectorXd& grad) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& z) const;
  bool is_affine() const { return squares.empty(); }

  // Tangent plane g(c) + grad g(c)^T (z - c).
  AffineForm linearize(const Eigen::VectorXd& c) const;
};

enum class Family { Distance, Radius, HalfPlane, TriangleArea, NonnegU };

const char* to_string(Family f);

/// g(z) - h(z) >= 0 with g and h convex. Families other than TriangleArea
/// have affine g, so the restriction leaves them unchanged.
struct DcConstraint {
  Family family = Family::Distance;
  int i = 0;
  int j = 0;  // second vertex for Distance, unused otherwise
  ConvexQuadratic g;
  ConvexQuadratic h;

  double value(const Eigen::VectorXd& z) const { return g.eval(z) - h.eval(z); }
};

struct DcProgram {
  DecisionLayout layout;
  ConvexQuadratic objective_g;  // sum of u_i
  ConvexQuadratic objective_h;  // zero
  std::vector<DcConstraint> constraints;

  int count(Family f) const;
};

struct ResidualReport {
  double objective = 0.0;
  Eigen::VectorXd residuals;  // g_i(z) - h_i(z), one per constraint
  double min_residual = 0.0;

  // max(0, -min_residual)
  double max_violation() const { return min_residual < 0.0 ? -min_residual : 0.0; }
};

/// sum of squares <= bound(z).
struct SubproblemConstraint {
  Family family = Family::Distance;
  int i = 0;
  int j = 0;
  std::vector<AffineForm> squares;
  AffineForm bound;

  double slack(const Eigen::VectorXd& z) const;
};

/// Convex restriction of a DcProgram: maximize objective^T z subject to the
/// convex constraints, built around a reference point.
struct ConvexSubproblem {
  DecisionLayout layout;
  Eigen::VectorXd objective;
  std::vector<SubproblemConstraint> constraints;
  Eigen::VectorXd reference;

  Eigen::VectorXd slacks(const Eigen::VectorXd& z) const;
};

DcProgram build_program(int n);
ConvexSubproblem build_restriction(const DcProgram& prog, const Eigen::VectorXd& c);
ResidualReport evaluate(const DcProgram& prog, const Eigen::VectorXd& z);

/// u_i is set to the area of triangle v0 v_i v_{i+1}.
Eigen::VectorXd polygon_to_vector(const Polygond& p);
Polygond vector_to_polygon(const DecisionLayout& layout, const Eigen::VectorXd& z);

std::string dump(const DcProgram& prog);
std::string dump(const ConvexSubproblem& sub);

}  // namespace optigon
