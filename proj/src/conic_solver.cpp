#include "optigon/conic_solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>

namespace optigon {

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Optimal: return "Optimal";
    case SolverStatus::Infeasible: return "Infeasible";
    case SolverStatus::IterationLimit: return "IterationLimit";
    case SolverStatus::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (!(tol_solver > 0.0)) throw Error(ErrorCode::InvalidConfig, "tol_solver must be positive");
  if (max_iterations < 1) throw Error(ErrorCode::InvalidConfig, "max_iterations must be >= 1");
  if (!(step_fraction > 0.0 && step_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "step_fraction must lie in (0, 1)");
  }
  if (!(regularization >= 0.0)) throw Error(ErrorCode::InvalidConfig, "regularization must be >= 0");
}

int ConeProblem::count(ConeKind kind) const {
  return static_cast<int>(
      std::count_if(blocks.begin(), blocks.end(), [kind](const ConeBlock& b) { return b.kind == kind; }));
}

int ConeProblem::rows() const {
  int m = 0;
  for (const auto& b : blocks) m += b.rows();
  return m;
}

// ---------------------------------------------------------------------------
// Lifting sum-of-squares constraints into cones.

namespace {

struct LocalIndex {
  std::vector<int> vars;
  std::map<int, int> pos;

  void add(const AffineForm& f) {
    for (const auto& t : f.terms) {
      if (pos.emplace(t.index, 0).second) vars.push_back(t.index);
    }
  }
  void finalize() {
    std::sort(vars.begin(), vars.end());
    for (size_t k = 0; k < vars.size(); ++k) pos[vars[k]] = static_cast<int>(k);
  }
};

// Row of s = h - G x for s_row = scale * form(x) + offset.
void set_row(ConeBlock& b, const LocalIndex& idx, int row, const AffineForm& form, double scale, double offset) {
  for (const auto& t : form.terms) b.G(row, idx.pos.at(t.index)) -= scale * t.coeff;
  b.h[row] = scale * form.constant + offset;
}

ConeBlock lift_one(const SubproblemConstraint& con, int num_vars) {
  LocalIndex idx;
  idx.add(con.bound);
  for (const auto& l : con.squares) idx.add(l);
  idx.finalize();
  for (int v : idx.vars) {
    if (v < 0 || v >= num_vars) throw Error(ErrorCode::DimensionMismatch, "constraint references variable out of range");
  }

  ConeBlock b;
  b.family = con.family;
  b.arity = static_cast<int>(con.squares.size());
  b.vars = idx.vars;
  const int p = static_cast<int>(idx.vars.size());
  const int k = b.arity;

  if (k == 0) {
    // 0 <= a(x)
    b.kind = ConeKind::NonNegative;
    b.G = Eigen::MatrixXd::Zero(1, p);
    b.h.resize(1);
    set_row(b, idx, 0, con.bound, 1.0, 0.0);
  } else if (con.bound.is_constant() && con.bound.constant > 0.0) {
    // ||l|| <= sqrt(c)
    b.kind = ConeKind::SecondOrder;
    b.G = Eigen::MatrixXd::Zero(k + 1, p);
    b.h.resize(k + 1);
    b.h[0] = std::sqrt(con.bound.constant);
    for (int r = 0; r < k; ++r) set_row(b, idx, r + 1, con.squares[static_cast<size_t>(r)], 1.0, 0.0);
  } else {
    // ||l||^2 <= a * 1  <=>  ||(a - 1, 2 l)|| <= a + 1
    b.kind = ConeKind::SecondOrder;
    b.G = Eigen::MatrixXd::Zero(k + 2, p);
    b.h.resize(k + 2);
    set_row(b, idx, 0, con.bound, 1.0, 1.0);
    set_row(b, idx, 1, con.bound, 1.0, -1.0);
    for (int r = 0; r < k; ++r) set_row(b, idx, r + 2, con.squares[static_cast<size_t>(r)], 2.0, 0.0);
  }
  return b;
}

}  // namespace

ConeProblem lift(const Eigen::VectorXd& objective, std::span<const SubproblemConstraint> constraints) {
  ConeProblem cone;
  cone.num_vars = static_cast<int>(objective.size());
  cone.c = -objective;
  cone.blocks.reserve(constraints.size());
  for (const auto& con : constraints) cone.blocks.push_back(lift_one(con, cone.num_vars));
  return cone;
}

ConeProblem lift(const ConvexSubproblem& sub) { return lift(sub.objective, sub.constraints); }

// ---------------------------------------------------------------------------
// Interior-point iteration.

namespace {

using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BlockScaling {
  double eta = 1.0;  // NonNegative: sqrt(s / z)
  VectorXd w;        // SecondOrder: normalized NT point, w^T J w = 1
};

class Workspace {
 public:
  explicit Workspace(const ConeProblem& p) : p_(p) {
    offset_.reserve(p.blocks.size());
    int m = 0;
    for (const auto& b : p.blocks) {
      offset_.push_back(m);
      m += b.rows();
    }
    m_ = m;
    scal_.resize(p.blocks.size());
  }

  int rows() const { return m_; }
  int degree() const { return static_cast<int>(p_.blocks.size()); }

  auto seg(VectorXd& v, size_t k) const { return v.segment(offset_[k], p_.blocks[k].rows()); }
  auto seg(const VectorXd& v, size_t k) const { return v.segment(offset_[k], p_.blocks[k].rows()); }

  VectorXd G_times(const VectorXd& x) const {
    VectorXd out(m_);
    for (size_t k = 0; k < p_.blocks.size(); ++k) {
      const auto& b = p_.blocks[k];
      VectorXd xl(static_cast<Eigen::Index>(b.vars.size()));
      for (size_t j = 0; j < b.vars.size(); ++j) xl[static_cast<Eigen::Index>(j)] = x[b.vars[j]];
      seg(out, k) = b.G * xl;
    }
    return out;
  }

  VectorXd Gt_times(const VectorXd& y) const {
    VectorXd out = VectorXd::Zero(p_.num_vars);
    for (size_t k = 0; k < p_.blocks.size(); ++k) {
      const auto& b = p_.blocks[k];
      const VectorXd loc = b.G.transpose() * seg(y, k);
      for (size_t j = 0; j < b.vars.size(); ++j) out[b.vars[j]] += loc[static_cast<Eigen::Index>(j)];
    }
    return out;
  }

  // Smallest t with v + t e in K (negative when v is strictly interior).
  double interior_shift(const VectorXd& v) const {
    double t = -kInf;
    for (size_t k = 0; k < p_.blocks.size(); ++k) {
      const auto vk = seg(v, k);
      if (p_.blocks[k].kind == ConeKind::NonNegative) {
        t = std::max(t, -vk[0]);
      } else {
        t = std::max(t, vk.tail(vk.size() - 1).norm() - vk[0]);
      }
    }
    return t;
  }

  void add_identity(VectorXd& v, double t) const {
    for (size_t k = 0; k < p_.blocks.size(); ++k) v[offset_[k]] += t;
  }

  // Largest alpha with v + alpha dv in K; +inf if unbounded.
  double max_step(const VectorXd& v, const VectorXd& dv) const {
    double alpha = kInf;
    for (size_t k = 0; k < p_.blocks.size(); ++k) {
      const auto vk = seg(v, k);
      const auto dk = seg(dv, k);
      if (p_.blocks[k].kind == ConeKind::NonNegative) {
        if (dk[0] < 0.0) alpha = std::min(alpha, -vk[0] / dk[0]);
        continue;
      }
      const Eigen::Index q = vk.size() - 1;
      // det(v + a dv) = c + 2 b a + a2 a^2
      const double a2 = dk[0] * dk[0] - dk.tail(q).squaredNorm();
      const double b = vk[0] * dk[0] - vk.tail(q).dot(dk.tail(q));
      const double c = std::max(vk[0] * vk[0] - vk.tail(q).squaredNorm(), 0.0);
      const double disc = b * b - a2 * c;
      double root = kInf;
      if (a2 == 0.0) {
        if (b < 0.0) root = -c / (2.0 * b);
      } else if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double qq = -(b + std::copysign(sq, b));
        const double r1 = qq / a2;
        const double r2 = qq != 0.0 ? c / qq : kInf;
        for (double r : {r1, r2}) {
          if (r > 0.0) root = std::min(root, r);
        }
      }
      // The time component must also stay positive.
      if (dk[0] < 0.0) root = std::min(root, -vk[0] / dk[0]);
      alpha = std::min(alpha, root);
    }
    return alpha;
  }

  void compute_scaling(const VectorXd& s, const VectorXd& z) {
    lambda_.resize(m_);
    for (size_t k = 0; k < p_.blocks.size(); ++k) {
      const auto sk = seg(s, k);
      const auto zk = seg(z, k);
      auto& sc = scal_[k];
      if (p_.blocks[k].kind == ConeKind::NonNegative) {
        sc.eta = std::sqrt(sk[0] / zk[0]);
        lambda_[offset_[k]] = std::sqrt(sk[0] * zk[0]);
        continue;
      }
      const Eigen::Index q = sk.size() - 1;
      const double s_nrm = std::sqrt(std::max(sk[0] * sk[0] - sk.tail(q).squaredNorm(), 1e-300));
      const double z_nrm = std::sqrt(std::max(zk[0] * zk[0] - zk.tail(q).squaredNorm(), 1e-300));
      const VectorXd sb = sk / s_nrm;
      const VectorXd zb = zk / z_nrm;
      const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(zb)));
      sc.w.resize(sk.size());
      sc.w[0] = (sb[0] + zb[0]) / (2.0 * gamma);
      sc.w.tail(q) = (sb.tail(q) - zb.tail(q)) / (2.0 * gamma);
      sc.eta = std::sqrt(s_nrm / z_nrm);
    }
    lambda_ = apply_W(z, false);
  }

  // W v (inverse = false) or W^{-1} v (inverse = true), blockwise.
  VectorXd apply_W(const VectorXd& v, bool inverse) const {
    VectorXd out(m_);
    for (size_t k = 0; k < p_.blocks.size(); ++k) {
      const auto vk = seg(v, k);
      auto ok = seg(out, k);
      const auto& sc = scal_[k];
      if (p_.blocks[k].kind == ConeKind::NonNegative) {
        ok[0] = inverse ? vk[0] / sc.eta : vk[0] * sc.eta;
        continue;
      }
      const Eigen::Index q = vk.size() - 1;
      // W = eta B(w), W^{-1} = B(Jw) / eta with B the hyperbolic rotation
      // [w0 w1^T; w1 I + w1 w1^T / (1 + w0)].
      const double sign = inverse ? -1.0 : 1.0;
      const double w0 = sc.w[0];
      const auto w1 = sc.w.tail(q);
      const double d = w1.dot(vk.tail(q));
      const double scale = inverse ? 1.0 / sc.eta : sc.eta;
      ok[0] = scale * (w0 * vk[0] + sign * d);
      ok.tail(q) = scale * (vk.tail(q) + (sign * vk[0] + d / (1.0 + w0)) * w1);
    }
    return out;
  }

  static void jordan_product(const VectorXd& u, const VectorXd& v, VectorXd& out, Eigen::Index off,
                             Eigen::Index len, bool soc) {
    if (!soc) {
      out[off] = u[off] * v[off];
      return;
    }
    out[off] = u.segment(off, len).dot(v.segment(off, len));
    out.segment(off + 1, len - 1) = u[off] * v.segment(off + 1, len - 1) + v[off] * u.segment(off + 1, len - 1);
  }

  VectorXd circ(const VectorXd& u, const VectorXd& v) const {
    VectorXd out(m_);
    for (size_t k = 0; k < p_.blocks.size(); ++k) {
      jordan_product(u, v, out, offset_[k], p_.blocks[k].rows(), p_.blocks[k].kind == ConeKind::SecondOrder);
    }
    return out;
  }

  // x with lambda o x = v.
  VectorXd lambda_div(const VectorXd& v) const {
    VectorXd out(m_);
    for (size_t k = 0; k < p_.blocks.size(); ++k) {
      const auto lk = seg(lambda_, k);
      const auto vk = seg(v, k);
      auto ok = seg(out, k);
      if (p_.blocks[k].kind == ConeKind::NonNegative) {
        ok[0] = vk[0] / lk[0];
        continue;
      }
      const Eigen::Index q = lk.size() - 1;
      const double det = lk[0] * lk[0] - lk.tail(q).squaredNorm();
      ok[0] = (lk[0] * vk[0] - lk.tail(q).dot(vk.tail(q))) / det;
      ok.tail(q) = (vk.tail(q) - ok[0] * lk.tail(q)) / lk[0];
    }
    return out;
  }

  VectorXd identity() const {
    VectorXd e = VectorXd::Zero(m_);
    add_identity(e, 1.0);
    return e;
  }

  // G^T W^{-2} G, or G^T G when unscaled.
  bool factor(bool unscaled, double reg) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p_.num_vars, p_.num_vars);
    for (size_t k = 0; k < p_.blocks.size(); ++k) {
      const auto& b = p_.blocks[k];
      Eigen::MatrixXd A = b.G;
      if (!unscaled) {
        const auto& sc = scal_[k];
        if (b.kind == ConeKind::NonNegative) {
          A /= sc.eta;
        } else {
          const Eigen::Index q = A.rows() - 1;
          const double w0 = sc.w[0];
          const auto w1 = sc.w.tail(q);
          for (Eigen::Index c = 0; c < A.cols(); ++c) {
            const double v0 = A(0, c);
            const double d = w1.dot(A.col(c).tail(q));
            A(0, c) = (w0 * v0 - d) / sc.eta;
            A.col(c).tail(q) = (A.col(c).tail(q) + (-v0 + d / (1.0 + w0)) * w1) / sc.eta;
          }
        }
      }
      const Eigen::MatrixXd local = A.transpose() * A;
      for (size_t i = 0; i < b.vars.size(); ++i) {
        for (size_t j = 0; j < b.vars.size(); ++j) {
          M(b.vars[i], b.vars[j]) += local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
      }
    }
    M.diagonal().array() += reg;
    if (!M.allFinite()) return false;
    llt_.compute(M);
    if (llt_.info() == Eigen::Success) {
      use_ldlt_ = false;
      return true;
    }
    ldlt_.compute(M);
    use_ldlt_ = true;
    return ldlt_.info() == Eigen::Success && ldlt_.isPositive();
  }

  VectorXd normal_solve(const VectorXd& rhs) const { return use_ldlt_ ? VectorXd(ldlt_.solve(rhs)) : VectorXd(llt_.solve(rhs)); }

  VectorXd Winv2(const VectorXd& v) const { return apply_W(apply_W(v, true), true); }
  VectorXd W2(const VectorXd& v) const { return apply_W(apply_W(v, false), false); }

  // Newton system
  //   G^T dz = bx,  G dx + ds = bz,  lambda o (W dz + W^{-1} ds) = bs.
  void newton(const VectorXd& bx, const VectorXd& bz, const VectorXd& bs, VectorXd& dx, VectorXd& ds,
              VectorXd& dz) const {
    const VectorXd r = bz - apply_W(lambda_div(bs), false);
    dx = normal_solve(bx + Gt_times(Winv2(r)));
    dz = Winv2(G_times(dx) - r);
    // Iterative refinement on [0 G^T; G -W^2] [dx; dz] = [bx; r].
    for (int it = 0; it < 3; ++it) {
      const VectorXd e1 = bx - Gt_times(dz);
      const VectorXd e2 = r - (G_times(dx) - W2(dz));
      const double err = std::max(e1.lpNorm<Eigen::Infinity>(), e2.lpNorm<Eigen::Infinity>());
      const double scale = 1.0 + std::max(bx.lpNorm<Eigen::Infinity>(), r.lpNorm<Eigen::Infinity>());
      if (!(err > 1e-14 * scale)) break;
      const VectorXd cx = normal_solve(e1 + Gt_times(Winv2(e2)));
      dx += cx;
      dz += Winv2(G_times(cx) - e2);
    }
    ds = bz - G_times(dx);
  }

  const VectorXd& lambda() const { return lambda_; }

 private:
  const ConeProblem& p_;
  std::vector<Eigen::Index> offset_;
  int m_ = 0;
  std::vector<BlockScaling> scal_;
  VectorXd lambda_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  bool use_ldlt_ = false;
};

// Push v into the interior: v + (1 + t) e whenever v is not comfortably interior.
void shift_inside(const Workspace& ws, VectorXd& v) {
  const double t = ws.interior_shift(v);
  if (t >= -1e-8 * std::max(1.0, v.norm())) ws.add_identity(v, 1.0 + t);
}

}  // namespace

SolverResult solve(const ConeProblem& cone, const SolverConfig& cfg, const std::optional<VectorXd>& warm_start) {
  cfg.validate();
  if (cone.c.size() != cone.num_vars) throw Error(ErrorCode::DimensionMismatch, "objective size != num_vars");
  for (const auto& b : cone.blocks) {
    if (b.G.rows() != b.rows() || b.G.cols() != static_cast<Eigen::Index>(b.vars.size())) {
      throw Error(ErrorCode::DimensionMismatch, "cone block G has inconsistent shape");
    }
    if (b.kind == ConeKind::NonNegative && b.rows() != 1) {
      throw Error(ErrorCode::DimensionMismatch, "nonnegative blocks must have one row");
    }
  }
  if (warm_start && warm_start->size() != cone.num_vars) {
    throw Error(ErrorCode::DimensionMismatch, "warm start has the wrong size");
  }
  if (cfg.trace) {
    *cfg.trace << "iter,pobj,dobj,gap,pres,dres,step\n";
  }

  Workspace ws(cone);
  SolverResult res;
  const int m = ws.rows();
  VectorXd h(m);
  for (size_t k = 0; k < cone.blocks.size(); ++k) ws.seg(h, k) = cone.blocks[k].h;

  // Starting point: least-squares primal/dual estimates shifted into the cone.
  if (!ws.factor(true, cfg.regularization)) {
    res.status = SolverStatus::NumericalFailure;
    res.x = VectorXd::Zero(cone.num_vars);
    return res;
  }
  VectorXd x = warm_start ? *warm_start : ws.normal_solve(ws.Gt_times(h));
  VectorXd s = h - ws.G_times(x);
  VectorXd z = ws.G_times(ws.normal_solve(-cone.c));
  if (warm_start) {
    // Keep the primal slack close to the warm start but strictly interior.
    const double t = ws.interior_shift(s);
    if (t > 0.0) ws.add_identity(s, t);
    s = 0.99 * s + 0.01 * ws.identity();
  } else {
    shift_inside(ws, s);
  }
  shift_inside(ws, z);

  const VectorXd e = ws.identity();
  const double deg = ws.degree();

  for (int iter = 0;; ++iter) {
    const VectorXd Gx = ws.G_times(x);
    const VectorXd rx = ws.Gt_times(z) + cone.c;
    const VectorXd rz = s + Gx - h;
    const double gap = s.dot(z);
    const double pres = rz.size() ? rz.lpNorm<Eigen::Infinity>() : 0.0;
    const double dres = rx.size() ? rx.lpNorm<Eigen::Infinity>() : 0.0;
    const double pobj = cone.c.dot(x);
    const double dobj = -h.dot(z);

    res.x = x;
    res.objective = -pobj;
    res.primal_residual = pres;
    res.dual_residual = dres;
    res.gap = gap;
    res.iterations = iter;

    // Weak duality: pobj - dobj = gap + x^T rx - z^T rz.
    assert(std::abs((pobj - dobj) - (gap + x.dot(rx) - z.dot(rz))) <=
           1e-8 * (1.0 + std::abs(pobj) + std::abs(dobj) + gap));

    if (!x.allFinite() || !s.allFinite() || !z.allFinite()) {
      res.status = SolverStatus::NumericalFailure;
      return res;
    }
    if (pres <= cfg.tol_solver && dres <= cfg.tol_solver && gap <= cfg.tol_solver) {
      res.status = SolverStatus::Optimal;
      return res;
    }
    // Approximate Farkas certificate: G^T z ~ 0, h^T z < 0 with z in K.
    const double hz = h.dot(z);
    if (hz < 0.0 && (rx - cone.c).lpNorm<Eigen::Infinity>() <= 1e-8 * -hz) {
      res.status = SolverStatus::Infeasible;
      return res;
    }
    if (iter >= cfg.max_iterations) {
      res.status = SolverStatus::IterationLimit;
      return res;
    }

    ws.compute_scaling(s, z);
    if (!ws.factor(false, cfg.regularization)) {
      res.status = SolverStatus::NumericalFailure;
      return res;
    }
    const VectorXd& lam = ws.lambda();
    const double mu = gap / deg;

    // Predictor.
    VectorXd dx, ds, dz;
    const VectorXd lamsq = ws.circ(lam, lam);
    ws.newton(-rx, -rz, -lamsq, dx, ds, dz);
    const double alpha_aff = std::min({1.0, ws.max_step(s, ds), ws.max_step(z, dz)});
    const double rho = std::clamp((s + alpha_aff * ds).dot(z + alpha_aff * dz) / gap, 0.0, 1.0);
    const double sigma = rho * rho * rho;

    // Corrector: second-order term in the scaled space.
    const VectorXd corr = ws.circ(ws.apply_W(ds, true), ws.apply_W(dz, false));
    ws.newton(-rx, -rz, -lamsq - corr + sigma * mu * e, dx, ds, dz);

    const double alpha_max = std::min(ws.max_step(s, ds), ws.max_step(z, dz));
    const double alpha = std::min(1.0, cfg.step_fraction * alpha_max);
    if (!(alpha > 0.0)) {
      res.status = SolverStatus::NumericalFailure;
      return res;
    }

    if (cfg.trace) {
      *cfg.trace << iter << ',' << -pobj << ',' << -dobj << ',' << gap << ',' << pres << ',' << dres << ','
                 << alpha << '\n';
    }

    x += alpha * dx;
    s += alpha * ds;
    z += alpha * dz;
  }
}

}  // namespace optigon
