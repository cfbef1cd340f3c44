#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optigon/errors.hpp"

namespace optigon {

template <typename Scalar>
using Points2 = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

inline constexpr double kDefaultTolDiam = 1e-6;
inline constexpr double kDefaultTolFeas = 1e-8;

/// Ordered vertex list of a planar polygon, one vertex per column.
///
/// Construction only checks that the coordinates are finite and that there
/// are at least three vertices; the geometric conventions (v0 at the origin,
/// upper half-plane, counterclockwise order, unit diameter) are checked
/// separately by validate() so that infeasible intermediate iterates remain
/// representable.
template <typename Scalar>
class Polygon {
 public:
  Polygon() = default;

  explicit Polygon(Points2<Scalar> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.cols() < 3) {
      throw Error(ErrorCode::TooSmallN,
                  "a polygon needs at least 3 vertices, got " + std::to_string(vertices_.cols()));
    }
    if (!vertices_.allFinite()) {
      throw Error(ErrorCode::NonFinite, "polygon vertices must be finite");
    }
  }

  int n() const { return static_cast<int>(vertices_.cols()); }
  const Points2<Scalar>& vertices() const { return vertices_; }
  auto vertex(int i) const { return vertices_.col(i); }
  Scalar x(int i) const { return vertices_(0, i); }
  Scalar y(int i) const { return vertices_(1, i); }

  bool operator==(const Polygon& other) const {
    return vertices_.cols() == other.vertices_.cols() && vertices_ == other.vertices_;
  }

 private:
  Points2<Scalar> vertices_;
};

using Polygond = Polygon<double>;

/// Unordered pairs {i, j}, i < j, of vertices at unit distance.
struct DiameterGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  bool has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
  }
  std::vector<int> degrees() const {
    std::vector<int> deg(static_cast<size_t>(n), 0);
    for (const auto& [i, j] : edges) {
      ++deg[static_cast<size_t>(i)];
      ++deg[static_cast<size_t>(j)];
    }
    return deg;
  }
};

struct BoundsRecord {
  int n = 0;
  double area_regular = 0.0;
  std::optional<double> area_pendant;
  double upper_bound = 0.0;
  std::optional<double> literature_lower_bound;
};

/// Outcome of the convention checks; each flag is evaluated with tol_feas.
struct PolygonCheck {
  bool origin = true;
  bool half_plane = true;
  bool counterclockwise = true;
  bool small = true;

  bool ok() const { return origin && half_plane && counterclockwise && small; }
};

// Area of the triangle fan anchored at vertex 0. With v0 at the origin this is
// sum_{i=1}^{n-2} (y_{i+1} x_i - x_{i+1} y_i) / 2.
template <typename Derived>
typename Derived::Scalar area(const Eigen::MatrixBase<Derived>& pts) {
  using Scalar = typename Derived::Scalar;
  Scalar total(0);
  const auto n = pts.cols();
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const Scalar ax = pts(0, i) - pts(0, 0), ay = pts(1, i) - pts(1, 0);
    const Scalar bx = pts(0, i + 1) - pts(0, 0), by = pts(1, i + 1) - pts(1, 0);
    total += (by * ax - bx * ay) / Scalar(2);
  }
  return total;
}

template <typename Scalar>
Scalar area(const Polygon<Scalar>& p) {
  return area(p.vertices());
}

// Exhaustive pairwise scan; also the oracle for every diameter claim.
template <typename Derived>
typename Derived::Scalar diameter(const Eigen::MatrixBase<Derived>& pts) {
  using Scalar = typename Derived::Scalar;
  Scalar best(0);
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < pts.cols(); ++j) {
      best = std::max(best, (pts.col(i) - pts.col(j)).norm());
    }
  }
  return best;
}

template <typename Scalar>
Scalar diameter(const Polygon<Scalar>& p) {
  return diameter(p.vertices());
}

template <typename Derived>
DiameterGraph diameter_graph(const Eigen::MatrixBase<Derived>& pts, double tol_diam = kDefaultTolDiam) {
  const double d = static_cast<double>(diameter(pts));
  if (d > 1.0 + tol_diam) {
    throw Error(ErrorCode::DiameterExceeded,
                "diameter " + std::to_string(d) + " exceeds 1 + " + std::to_string(tol_diam));
  }
  DiameterGraph g;
  g.n = static_cast<int>(pts.cols());
  for (int i = 0; i < g.n; ++i) {
    for (int j = i + 1; j < g.n; ++j) {
      const double dist = static_cast<double>((pts.col(i) - pts.col(j)).norm());
      if (std::abs(dist - 1.0) <= tol_diam) g.edges.emplace_back(i, j);
    }
  }
  return g;
}

template <typename Scalar>
DiameterGraph diameter_graph(const Polygon<Scalar>& p, double tol_diam = kDefaultTolDiam) {
  return diameter_graph(p.vertices(), tol_diam);
}

template <typename Scalar>
PolygonCheck validate(const Polygon<Scalar>& p, double tol_feas = kDefaultTolFeas) {
  PolygonCheck c;
  c.origin = std::abs(p.x(0)) <= tol_feas && std::abs(p.y(0)) <= tol_feas;
  for (int i = 0; i < p.n(); ++i) {
    if (p.y(i) < -tol_feas) c.half_plane = false;
  }
  for (int i = 1; i + 1 < p.n(); ++i) {
    if (p.y(i + 1) * p.x(i) - p.x(i + 1) * p.y(i) < -tol_feas) c.counterclockwise = false;
  }
  c.small = diameter(p) <= Scalar(1) + tol_feas;
  return c;
}

/// Same polygon with vertex `k` renumbered to 0, translated so it sits at the origin.
template <typename Scalar>
Polygon<Scalar> reanchor(const Polygon<Scalar>& p, int k) {
  Points2<Scalar> out(2, p.n());
  for (int i = 0; i < p.n(); ++i) {
    out.col(i) = p.vertex((i + k) % p.n()) - p.vertex(k);
  }
  return Polygon<Scalar>(std::move(out));
}

inline void require_even_at_least_6(int n) {
  if (n < 6) throw Error(ErrorCode::TooSmallN, "n must be >= 6, got " + std::to_string(n));
  if (n % 2 != 0) throw Error(ErrorCode::OddN, "n must be even, got " + std::to_string(n));
}

// A(R_n), the area of the regular small n-gon.
template <typename Scalar = double>
Scalar regular_area(int n) {
  if (n < 3) throw Error(ErrorCode::TooSmallN, "n must be >= 3");
  using std::sin;
  using std::tan;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar ns(n);
  if (n % 2 == 1) return ns / 2 * (sin(pi / ns) - tan(pi / (2 * ns)));
  return ns / 8 * sin(2 * pi / ns);
}

// Reinhardt's bound (n/2)(sin(pi/n) - tan(pi/2n)).
template <typename Scalar = double>
Scalar upper_bound(int n) {
  if (n < 3) throw Error(ErrorCode::TooSmallN, "n must be >= 3");
  using std::sin;
  using std::tan;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar ns(n);
  return ns / 2 * (sin(pi / ns) - tan(pi / (2 * ns)));
}

// A(R+_{n-1}): regular (n-1)-gon plus one vertex on the bisector of an angle.
template <typename Scalar = double>
Scalar pendant_area(int n) {
  require_even_at_least_6(n);
  using std::sin;
  using std::tan;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar m(n - 1);
  return m / 2 * (sin(pi / m) - tan(pi / (2 * m))) + sin(pi / (2 * m)) - sin(pi / m) / 2;
}

inline BoundsRecord bounds(int n) {
  BoundsRecord r;
  r.n = n;
  r.area_regular = regular_area(n);
  r.upper_bound = upper_bound(n);
  if (n >= 6 && n % 2 == 0) r.area_pendant = pendant_area(n);
  return r;
}

/// Regular small n-gon with v0 at the origin and the polygon in y >= 0.
template <typename Scalar = double>
Polygon<Scalar> build_regular_polygon(int n) {
  if (n < 3) throw Error(ErrorCode::TooSmallN, "n must be >= 3");
  using std::cos;
  using std::sin;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  // Even n: diameter is the main diagonal. Odd n: the longest diagonal
  // subtends an angle (n-1)pi/n.
  const Scalar radius = n % 2 == 0 ? Scalar(0.5) : Scalar(1) / (2 * cos(pi / (2 * Scalar(n))));
  Points2<Scalar> v(2, n);
  for (int i = 0; i < n; ++i) {
    const Scalar t = 2 * pi * Scalar(i) / Scalar(n);
    v(0, i) = radius * sin(t);
    v(1, i) = radius * (1 - cos(t));
  }
  v(0, 0) = Scalar(0);
  v(1, 0) = Scalar(0);
  return Polygon<Scalar>(std::move(v));
}

/// R+_{n-1}: the default starting polygon of the area maximization.
template <typename Scalar = double>
Polygon<Scalar> build_pendant_polygon(int n) {
  require_even_at_least_6(n);
  using std::cos;
  using std::sin;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar m(n - 1);
  const Scalar denom = 2 * cos(pi / (2 * m));
  Points2<Scalar> v = Points2<Scalar>::Zero(2, n);
  for (int i = 1; i <= n / 2 - 1; ++i) {
    const Scalar t = 2 * Scalar(i) * pi / m;
    v(0, i) = sin(t) / denom;
    v(1, i) = (1 - cos(t)) / denom;
    v(0, n - i) = -v(0, i);
    v(1, n - i) = v(1, i);
  }
  v(0, n / 2) = Scalar(0);
  v(1, n / 2) = Scalar(1);
  return Polygon<Scalar>(std::move(v));
}

}  // namespace optigon
