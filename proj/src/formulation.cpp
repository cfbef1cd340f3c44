#include "optigon/formulation.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace optigon {

namespace {

AffineForm from_map(const std::map<int, double>& coeffs, double constant) {
  AffineForm out;
  out.constant = constant;
  for (const auto& [idx, c] : coeffs) {
    if (c != 0.0) out.terms.push_back({idx, c});
  }
  return out;
}

AffineForm combine(double sa, const AffineForm& a, double sb, const AffineForm& b) {
  std::map<int, double> m;
  for (const auto& t : a.terms) m[t.index] += sa * t.coeff;
  for (const auto& t : b.terms) m[t.index] += sb * t.coeff;
  return from_map(m, sa * a.constant + sb * b.constant);
}

void check_dim(const DecisionLayout& layout, const Eigen::VectorXd& z) {
  if (z.size() != layout.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "expected a vector of size " + std::to_string(layout.dim()) +
                                                  ", got " + std::to_string(z.size()));
  }
  if (!z.allFinite()) throw Error(ErrorCode::NonFinite, "decision vector has non-finite entries");
}

// l = ca * z_a + cb * z_b
AffineForm pair_form(int a, double ca, int b, double cb) {
  std::map<int, double> m;
  m[a] += ca;
  m[b] += cb;
  return from_map(m, 0.0);
}

void write_form(std::ostream& os, const AffineForm& f) {
  bool first = true;
  for (const auto& t : f.terms) {
    os << (first ? "" : " ") << (t.coeff < 0 ? "-" : "+") << std::abs(t.coeff) << "*z" << t.index;
    first = false;
  }
  if (f.constant != 0.0 || first) os << (first ? "" : " ") << (f.constant < 0 ? "-" : "+") << std::abs(f.constant);
}

}  // namespace

AffineForm operator+(const AffineForm& a, const AffineForm& b) { return combine(1.0, a, 1.0, b); }
AffineForm operator-(const AffineForm& a, const AffineForm& b) { return combine(1.0, a, -1.0, b); }
AffineForm operator*(double s, const AffineForm& a) { return combine(s, a, 0.0, AffineForm{}); }

double ConvexQuadratic::eval(const Eigen::VectorXd& z) const {
  double v = linear.eval(z);
  for (const auto& l : squares) {
    const double lv = l.eval(z);
    v += lv * lv;
  }
  return v;
}

void ConvexQuadratic::add_gradient(const Eigen::VectorXd& z, double scale, Eigen::VectorXd& grad) const {
  for (const auto& t : linear.terms) grad[t.index] += scale * t.coeff;
  for (const auto& l : squares) {
    const double lv = 2.0 * l.eval(z);
    for (const auto& t : l.terms) grad[t.index] += scale * lv * t.coeff;
  }
}

Eigen::VectorXd ConvexQuadratic::gradient(const Eigen::VectorXd& z) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(z.size());
  add_gradient(z, 1.0, g);
  return g;
}

AffineForm ConvexQuadratic::linearize(const Eigen::VectorXd& c) const {
  std::map<int, double> m;
  double constant = eval(c);
  for (const auto& t : linear.terms) m[t.index] += t.coeff;
  for (const auto& l : squares) {
    const double lv = 2.0 * l.eval(c);
    for (const auto& t : l.terms) m[t.index] += lv * t.coeff;
  }
  for (const auto& [idx, coeff] : m) constant -= coeff * c[idx];
  return from_map(m, constant);
}

const char* to_string(Family f) {
  switch (f) {
    case Family::Distance: return "Distance";
    case Family::Radius: return "Radius";
    case Family::HalfPlane: return "HalfPlane";
    case Family::TriangleArea: return "TriangleArea";
    case Family::NonnegU: return "NonnegU";
  }
  return "?";
}

int DcProgram::count(Family f) const {
  return static_cast<int>(
      std::count_if(constraints.begin(), constraints.end(), [f](const DcConstraint& c) { return c.family == f; }));
}

double SubproblemConstraint::slack(const Eigen::VectorXd& z) const {
  double s = bound.eval(z);
  for (const auto& l : squares) {
    const double lv = l.eval(z);
    s -= lv * lv;
  }
  return s;
}

Eigen::VectorXd ConvexSubproblem::slacks(const Eigen::VectorXd& z) const {
  check_dim(layout, z);
  Eigen::VectorXd s(static_cast<Eigen::Index>(constraints.size()));
  for (size_t k = 0; k < constraints.size(); ++k) s[static_cast<Eigen::Index>(k)] = constraints[k].slack(z);
  return s;
}

DcProgram build_program(int n) {
  if (n < 4) throw Error(ErrorCode::TooSmallN, "the area program needs n >= 4, got " + std::to_string(n));
  DcProgram prog;
  prog.layout = DecisionLayout{n};
  const DecisionLayout& L = prog.layout;

  for (int i = 1; i <= n - 2; ++i) prog.objective_g.linear = prog.objective_g.linear + AffineForm::variable(L.u(i));

  // (x_j - x_i)^2 + (y_j - y_i)^2 <= 1
  for (int i = 1; i <= n - 1; ++i) {
    for (int j = i + 1; j <= n - 1; ++j) {
      DcConstraint c{Family::Distance, i, j, {}, {}};
      c.g.linear = AffineForm::constant_form(1.0);
      c.h.squares = {pair_form(L.x(j), 1.0, L.x(i), -1.0), pair_form(L.y(j), 1.0, L.y(i), -1.0)};
      prog.constraints.push_back(std::move(c));
    }
  }
  // x_i^2 + y_i^2 <= 1
  for (int i = 1; i <= n - 1; ++i) {
    DcConstraint c{Family::Radius, i, 0, {}, {}};
    c.g.linear = AffineForm::constant_form(1.0);
    c.h.squares = {AffineForm::variable(L.x(i)), AffineForm::variable(L.y(i))};
    prog.constraints.push_back(std::move(c));
  }
  for (int i = 1; i <= n - 1; ++i) {
    DcConstraint c{Family::HalfPlane, i, 0, {}, {}};
    c.g.linear = AffineForm::variable(L.y(i));
    prog.constraints.push_back(std::move(c));
  }
  // 2u_i <= y_{i+1} x_i - x_{i+1} y_i written as
  // (y_{i+1} + x_i)^2 + (x_{i+1} - y_i)^2 - [(y_{i+1} - x_i)^2 + (x_{i+1} + y_i)^2 + 8u_i] >= 0
  for (int i = 1; i <= n - 2; ++i) {
    DcConstraint c{Family::TriangleArea, i, 0, {}, {}};
    c.g.squares = {pair_form(L.y(i + 1), 1.0, L.x(i), 1.0), pair_form(L.x(i + 1), 1.0, L.y(i), -1.0)};
    c.h.squares = {pair_form(L.y(i + 1), 1.0, L.x(i), -1.0), pair_form(L.x(i + 1), 1.0, L.y(i), 1.0)};
    c.h.linear = AffineForm::variable(L.u(i), 8.0);
    prog.constraints.push_back(std::move(c));
  }
  for (int i = 1; i <= n - 2; ++i) {
    DcConstraint c{Family::NonnegU, i, 0, {}, {}};
    c.g.linear = AffineForm::variable(L.u(i));
    prog.constraints.push_back(std::move(c));
  }
  return prog;
}

ConvexSubproblem build_restriction(const DcProgram& prog, const Eigen::VectorXd& c) {
  check_dim(prog.layout, c);
  ConvexSubproblem sub;
  sub.layout = prog.layout;
  sub.reference = c;
  // g_0 is linear and h_0 = 0, so the objective is its own linearization.
  sub.objective = prog.objective_g.gradient(c);
  sub.constraints.reserve(prog.constraints.size());
  for (const auto& con : prog.constraints) {
    SubproblemConstraint s;
    s.family = con.family;
    s.i = con.i;
    s.j = con.j;
    s.squares = con.h.squares;
    const AffineForm g_bar = con.g.is_affine() ? con.g.linear : con.g.linearize(c);
    s.bound = g_bar - con.h.linear;
    sub.constraints.push_back(std::move(s));
  }
  return sub;
}

ResidualReport evaluate(const DcProgram& prog, const Eigen::VectorXd& z) {
  check_dim(prog.layout, z);
  ResidualReport r;
  r.objective = prog.objective_g.eval(z) - prog.objective_h.eval(z);
  r.residuals.resize(static_cast<Eigen::Index>(prog.constraints.size()));
  for (size_t k = 0; k < prog.constraints.size(); ++k) {
    r.residuals[static_cast<Eigen::Index>(k)] = prog.constraints[k].value(z);
  }
  r.min_residual = r.residuals.size() ? r.residuals.minCoeff() : 0.0;
  return r;
}

Eigen::VectorXd polygon_to_vector(const Polygond& p) {
  const DecisionLayout L{p.n()};
  if (p.n() < 4) throw Error(ErrorCode::TooSmallN, "the area program needs n >= 4");
  Eigen::VectorXd z(L.dim());
  for (int i = 1; i <= p.n() - 1; ++i) {
    z[L.x(i)] = p.x(i) - p.x(0);
    z[L.y(i)] = p.y(i) - p.y(0);
  }
  for (int i = 1; i <= p.n() - 2; ++i) {
    z[L.u(i)] = (z[L.y(i + 1)] * z[L.x(i)] - z[L.x(i + 1)] * z[L.y(i)]) / 2.0;
  }
  return z;
}

Polygond vector_to_polygon(const DecisionLayout& layout, const Eigen::VectorXd& z) {
  check_dim(layout, z);
  Points2<double> v = Points2<double>::Zero(2, layout.n);
  for (int i = 1; i <= layout.n - 1; ++i) {
    v(0, i) = z[layout.x(i)];
    v(1, i) = z[layout.y(i)];
  }
  return Polygond(std::move(v));
}

std::string dump(const DcProgram& prog) {
  std::ostringstream os;
  os.precision(17);
  os << "# DC program n=" << prog.layout.n << " dim=" << prog.layout.dim() << "\n";
  os << "maximize ";
  write_form(os, prog.objective_g.linear);
  os << "\n";
  for (const auto& c : prog.constraints) {
    os << to_string(c.family) << "(" << c.i;
    if (c.family == Family::Distance) os << "," << c.j;
    os << "): g = [";
    for (const auto& l : c.g.squares) {
      os << " (";
      write_form(os, l);
      os << ")^2";
    }
    os << " ] + ";
    write_form(os, c.g.linear);
    os << " ; h = [";
    for (const auto& l : c.h.squares) {
      os << " (";
      write_form(os, l);
      os << ")^2";
    }
    os << " ] + ";
    write_form(os, c.h.linear);
    os << "\n";
  }
  return os.str();
}

std::string dump(const ConvexSubproblem& sub) {
  std::ostringstream os;
  os.precision(17);
  os << "# convex restriction n=" << sub.layout.n << " dim=" << sub.layout.dim() << "\n";
  for (const auto& c : sub.constraints) {
    os << to_string(c.family) << "(" << c.i;
    if (c.family == Family::Distance) os << "," << c.j;
    os << "):";
    for (const auto& l : c.squares) {
      os << " (";
      write_form(os, l);
      os << ")^2";
    }
    if (c.squares.empty()) os << " 0";
    os << " <= ";
    write_form(os, c.bound);
    os << "\n";
  }
  return os.str();
}

}  // namespace optigon
