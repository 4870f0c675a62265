#include "manoma/socp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "manoma/error.hpp"

namespace manoma {

// Homogeneous self-dual interior-point method on the conic form
//
//   minimize q^T x   s.t.   G x + s = h,   s in K,
//
// K = (nonnegative orthant) x (second-order cones). Each SocConstraint
// ||A x + b|| <= c^T x + d becomes the block s = [c^T x + d; A x + b], so
// G_block = -[c^T; A] and h_block = [d; b]. Box bounds and zero-row cones land
// in the orthant part. Search directions use Nesterov-Todd scaling and a
// Mehrotra predictor-corrector step; the reduced KKT system is solved through
// the normal equations G^T W^-2 G.

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ConeLayout {
  int n_lin = 0;
  std::vector<int> soc_offset;
  std::vector<int> soc_dim;
  int dim = 0;

  int degree() const { return n_lin + static_cast<int>(soc_dim.size()); }
  int num_soc() const { return static_cast<int>(soc_dim.size()); }
};

struct ConicForm {
  Eigen::MatrixXd g;
  Eigen::VectorXd h;
  Eigen::VectorXd q;
  ConeLayout cones;
  Eigen::VectorXd col_scale;  // x = col_scale .* x_scaled
};

ConicForm to_conic(const SocpProblem& p) {
  const int n = p.nvars;
  std::vector<Eigen::RowVectorXd> lin_rows;
  std::vector<double> lin_h;
  for (const auto& cone : p.cones) {
    if (cone.a.rows() == 0) {
      lin_rows.push_back(-cone.c.transpose());
      lin_h.push_back(cone.d);
    }
  }
  if (p.bounds) {
    for (int j = 0; j < n; ++j) {
      if (std::isfinite(p.bounds->lower[j])) {
        Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
        r[j] = -1.0;
        lin_rows.push_back(r);
        lin_h.push_back(-p.bounds->lower[j]);
      }
      if (std::isfinite(p.bounds->upper[j])) {
        Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
        r[j] = 1.0;
        lin_rows.push_back(r);
        lin_h.push_back(p.bounds->upper[j]);
      }
    }
  }

  ConicForm f;
  f.cones.n_lin = static_cast<int>(lin_rows.size());
  int dim = f.cones.n_lin;
  for (const auto& cone : p.cones) {
    if (cone.a.rows() == 0) continue;
    f.cones.soc_offset.push_back(dim);
    f.cones.soc_dim.push_back(static_cast<int>(cone.a.rows()) + 1);
    dim += static_cast<int>(cone.a.rows()) + 1;
  }
  f.cones.dim = dim;

  f.g.resize(dim, n);
  f.h.resize(dim);
  for (int i = 0; i < f.cones.n_lin; ++i) {
    f.g.row(i) = lin_rows[i];
    f.h[i] = lin_h[i];
  }
  int block = 0;
  for (const auto& cone : p.cones) {
    if (cone.a.rows() == 0) continue;
    const int off = f.cones.soc_offset[block++];
    const auto rows = cone.a.rows();
    f.g.row(off) = -cone.c.transpose();
    f.h[off] = cone.d;
    f.g.block(off + 1, 0, rows, n) = -cone.a;
    f.h.segment(off + 1, rows) = cone.b;
  }
  f.q = -p.objective;
  f.col_scale = Eigen::VectorXd::Ones(n);
  return f;
}

// Ruiz equilibration: G <- E G D with D diagonal over variables and E
// constant on each cone block, so the cones themselves are unchanged.
void equilibrate(ConicForm& f, int passes = 12) {
  const ConeLayout& k = f.cones;
  const auto n = f.g.cols();
  Eigen::VectorXd row_scale = Eigen::VectorXd::Ones(k.dim);
  auto clamp_scale = [](double norm) {
    return norm > 0.0 ? std::clamp(1.0 / std::sqrt(norm), 1e-4, 1e4) : 1.0;
  };
  for (int pass = 0; pass < passes; ++pass) {
    Eigen::VectorXd d(n);
    for (Eigen::Index j = 0; j < n; ++j) d[j] = clamp_scale(f.g.col(j).cwiseAbs().maxCoeff());
    f.g = f.g * d.asDiagonal();
    f.col_scale = f.col_scale.cwiseProduct(d);
    for (int i = 0; i < k.n_lin; ++i) {
      const double e = clamp_scale(f.g.row(i).cwiseAbs().maxCoeff());
      f.g.row(i) *= e;
      row_scale[i] *= e;
    }
    for (int c = 0; c < k.num_soc(); ++c) {
      auto block = f.g.middleRows(k.soc_offset[c], k.soc_dim[c]);
      const double e = clamp_scale(block.cwiseAbs().maxCoeff());
      block *= e;
      row_scale.segment(k.soc_offset[c], k.soc_dim[c]).array() *= e;
    }
  }
  f.h = f.h.cwiseProduct(row_scale);
  f.q = f.q.cwiseProduct(f.col_scale);
}

// J(u) = u0^2 - ||u1||^2, factored for accuracy.
double jnorm2(const Eigen::Ref<const Eigen::VectorXd>& u) {
  const double t = u.tail(u.size() - 1).norm();
  return (u[0] - t) * (u[0] + t);
}

void set_unit(const ConeLayout& k, Eigen::VectorXd& e) {
  e = Eigen::VectorXd::Zero(k.dim);
  e.head(k.n_lin).setOnes();
  for (int c = 0; c < k.num_soc(); ++c) e[k.soc_offset[c]] = 1.0;
}

// Smallest alpha with u + alpha e in K (negative when u is interior).
double shift_to_interior(const ConeLayout& k, const Eigen::VectorXd& u) {
  double a = -kInf;
  for (int i = 0; i < k.n_lin; ++i) a = std::max(a, -u[i]);
  for (int c = 0; c < k.num_soc(); ++c) {
    const auto seg = u.segment(k.soc_offset[c], k.soc_dim[c]);
    a = std::max(a, seg.tail(seg.size() - 1).norm() - seg[0]);
  }
  return a;
}

// Largest alpha keeping u + alpha du in K (u assumed interior).
double max_step(const ConeLayout& k, const Eigen::VectorXd& u, const Eigen::VectorXd& du) {
  double alpha = kInf;
  for (int i = 0; i < k.n_lin; ++i) {
    if (du[i] < 0.0) alpha = std::min(alpha, -u[i] / du[i]);
  }
  for (int c = 0; c < k.num_soc(); ++c) {
    const int off = k.soc_offset[c];
    const int d = k.soc_dim[c];
    const auto x = u.segment(off, d);
    const auto dx = du.segment(off, d);
    const double j2 = jnorm2(x);
    if (!(j2 > 0.0)) return 0.0;
    const double lx = std::sqrt(j2);
    const double x0 = x[0] / lx;
    const Eigen::VectorXd x1 = x.tail(d - 1) / lx;
    const double rho0 = x0 * dx[0] - x1.dot(dx.tail(d - 1));
    const Eigen::VectorXd rho1 = dx.tail(d - 1) - ((rho0 + dx[0]) / (x0 + 1.0)) * x1;
    const double t = rho1.norm() - rho0;
    if (t > 0.0) alpha = std::min(alpha, lx / t);
  }
  return alpha;
}

// Jordan product u o v.
Eigen::VectorXd jprod(const ConeLayout& k, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  Eigen::VectorXd out(k.dim);
  out.head(k.n_lin) = u.head(k.n_lin).cwiseProduct(v.head(k.n_lin));
  for (int c = 0; c < k.num_soc(); ++c) {
    const int off = k.soc_offset[c];
    const int d = k.soc_dim[c];
    const auto a = u.segment(off, d);
    const auto b = v.segment(off, d);
    out[off] = a.dot(b);
    out.segment(off + 1, d - 1) = a[0] * b.tail(d - 1) + b[0] * a.tail(d - 1);
  }
  return out;
}

// Solves lambda o u = r for u.
Eigen::VectorXd jdiv(const ConeLayout& k, const Eigen::VectorXd& lambda, const Eigen::VectorXd& r) {
  Eigen::VectorXd out(k.dim);
  out.head(k.n_lin) = r.head(k.n_lin).cwiseQuotient(lambda.head(k.n_lin));
  for (int c = 0; c < k.num_soc(); ++c) {
    const int off = k.soc_offset[c];
    const int d = k.soc_dim[c];
    const auto l = lambda.segment(off, d);
    const auto rr = r.segment(off, d);
    const double j2 = jnorm2(l);
    const double u0 = (l[0] * rr[0] - l.tail(d - 1).dot(rr.tail(d - 1))) / j2;
    out[off] = u0;
    out.segment(off + 1, d - 1) = (rr.tail(d - 1) - u0 * l.tail(d - 1)) / l[0];
  }
  return out;
}

// Nesterov-Todd scaling W with W z = W^-1 s = lambda. Orthant part is
// diagonal; each SOC block is eta * H(wbar), H the hyperbolic rotation
//   H(v) = [v0, v1^T; v1, I + v1 v1^T / (1 + v0)],   J(v) = 1,
// whose inverse is H applied to (v0, -v1).
struct NtScaling {
  Eigen::VectorXd lin;
  std::vector<Eigen::VectorXd> wbar;
  std::vector<double> eta;
  Eigen::VectorXd lambda;
};

void apply_rotation(const Eigen::VectorXd& v, bool flip, double scale,
                    const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::Ref<Eigen::VectorXd> out) {
  const auto d = v.size();
  const double sgn = flip ? -1.0 : 1.0;
  const double v0 = v[0];
  const auto v1 = v.tail(d - 1);
  const double v1x1 = sgn * v1.dot(in.tail(d - 1));
  const double y0 = v0 * in[0] + v1x1;
  const double coef = in[0] + v1x1 / (1.0 + v0);
  out.tail(d - 1) = scale * (in.tail(d - 1) + (sgn * coef) * v1);
  out[0] = scale * y0;
}

void apply_w(const ConeLayout& k, const NtScaling& w, bool inverse, const Eigen::VectorXd& in,
             Eigen::VectorXd& out) {
  out.resize(k.dim);
  if (inverse) {
    out.head(k.n_lin) = in.head(k.n_lin).cwiseQuotient(w.lin);
  } else {
    out.head(k.n_lin) = in.head(k.n_lin).cwiseProduct(w.lin);
  }
  for (int c = 0; c < k.num_soc(); ++c) {
    const int off = k.soc_offset[c];
    const int d = k.soc_dim[c];
    const double scale = inverse ? 1.0 / w.eta[c] : w.eta[c];
    apply_rotation(w.wbar[c], inverse, scale, in.segment(off, d), out.segment(off, d));
  }
}

bool compute_scaling(const ConeLayout& k, const Eigen::VectorXd& s, const Eigen::VectorXd& z,
                     NtScaling& w) {
  w.lin = (s.head(k.n_lin).cwiseQuotient(z.head(k.n_lin))).cwiseSqrt();
  w.wbar.resize(k.num_soc());
  w.eta.resize(k.num_soc());
  for (int c = 0; c < k.num_soc(); ++c) {
    const int off = k.soc_offset[c];
    const int d = k.soc_dim[c];
    const auto sb = s.segment(off, d);
    const auto zb = z.segment(off, d);
    const double js = jnorm2(sb);
    const double jz = jnorm2(zb);
    if (!(js > 0.0) || !(jz > 0.0)) return false;
    const Eigen::VectorXd sn = sb / std::sqrt(js);
    Eigen::VectorXd zn = zb / std::sqrt(jz);
    const double gamma = std::sqrt((1.0 + sn.dot(zn)) / 2.0);
    zn.tail(d - 1) *= -1.0;
    w.wbar[c] = (sn + zn) / (2.0 * gamma);
    w.eta[c] = std::pow(js / jz, 0.25);
  }
  if (!(w.lin.array() > 0.0).all() && k.n_lin > 0) return false;
  apply_w(k, w, false, z, w.lambda);
  return w.lambda.allFinite();
}

// Factorization of the normal matrix G^T W^-2 G for repeated KKT solves.
class KktSolver {
 public:
  KktSolver(const ConicForm& f, const ConeLayout& k) : f_(f), k_(k) {}

  bool factor(const NtScaling* w) {
    w_ = w;
    const auto m = f_.g.rows();
    const auto n = f_.g.cols();
    scaled_g_.resize(m, n);
    if (w == nullptr) {
      scaled_g_ = f_.g;
    } else {
      Eigen::VectorXd tmp;
      for (Eigen::Index j = 0; j < n; ++j) {
        apply_w(k_, *w, true, f_.g.col(j), tmp);
        scaled_g_.col(j) = tmp;
      }
    }
    // R from a QR of W^-1 G gives R^T R = G^T W^-2 G without squaring the
    // condition number.
    qr_.compute(scaled_g_);
    r_ = qr_.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    const double dmax = r_.diagonal().cwiseAbs().maxCoeff();
    if (!(dmax > 0.0) || !r_.allFinite()) return false;
    // Pin tiny pivots so a rank-deficient G still yields a usable solve.
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(r_(j, j)) < 1e-14 * dmax) r_(j, j) = r_(j, j) < 0.0 ? -1e-14 * dmax : 1e-14 * dmax;
    }
    return true;
  }

  // [0 G^T; G -W^2] [x; z] = [r1; r2]
  void solve(const Eigen::VectorXd& r1, const Eigen::VectorXd& r2, Eigen::VectorXd& x,
             Eigen::VectorXd& z) const {
    solve_once(r1, r2, x, z);
    // Two rounds of iterative refinement against the unregularized system.
    for (int it = 0; it < 2; ++it) {
      Eigen::VectorXd e1 = r1 - f_.g.transpose() * z;
      Eigen::VectorXd wz;
      apply_w2(z, wz);
      Eigen::VectorXd e2 = r2 - (f_.g * x - wz);
      Eigen::VectorXd dx, dz;
      solve_once(e1, e2, dx, dz);
      x += dx;
      z += dz;
    }
  }

 private:
  void apply_w2(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
    if (w_ == nullptr) {
      out = in;
      return;
    }
    Eigen::VectorXd tmp;
    apply_w(k_, *w_, false, in, tmp);
    apply_w(k_, *w_, false, tmp, out);
  }

  void apply_winv(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
    if (w_ == nullptr) {
      out = in;
    } else {
      apply_w(k_, *w_, true, in, out);
    }
  }

  void solve_once(const Eigen::VectorXd& r1, const Eigen::VectorXd& r2, Eigen::VectorXd& x,
                  Eigen::VectorXd& z) const {
    Eigen::VectorXd winv_r2;
    apply_winv(r2, winv_r2);
    // Column pivoting: N = P R^T R P^T.
    Eigen::VectorXd y = qr_.colsPermutation().transpose() * (r1 + scaled_g_.transpose() * winv_r2);
    r_.transpose().triangularView<Eigen::Lower>().solveInPlace(y);
    r_.triangularView<Eigen::Upper>().solveInPlace(y);
    x = qr_.colsPermutation() * y;
    Eigen::VectorXd t = scaled_g_ * x - winv_r2;
    apply_winv(t, z);
  }

  const ConicForm& f_;
  const ConeLayout& k_;
  const NtScaling* w_ = nullptr;
  Eigen::MatrixXd scaled_g_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
  Eigen::MatrixXd r_;
};

struct Iterate {
  Eigen::VectorXd x, s, z;
  double tau = 1.0;
  double kappa = 1.0;
};

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal:
      return "optimal";
    case SolveStatus::infeasible:
      return "infeasible";
    case SolveStatus::max_iterations:
      return "max-iterations";
  }
  return "unknown";
}

void SocpProblem::validate() const {
  if (nvars < 1) throw DimensionError("socp: nvars must be >= 1");
  if (objective.size() != nvars) throw DimensionError("socp: objective length != nvars");
  if (cones.empty() && !bounds) throw DimensionError("socp: at least one constraint required");
  for (std::size_t i = 0; i < cones.size(); ++i) {
    const auto& c = cones[i];
    const std::string tag = "socp: cone " + std::to_string(i) + ": ";
    if (c.c.size() != nvars) throw DimensionError(tag + "c length != nvars");
    if (c.a.rows() > 0 && c.a.cols() != nvars) throw DimensionError(tag + "A cols != nvars");
    if (c.b.size() != c.a.rows()) throw DimensionError(tag + "b length != A rows");
  }
  if (bounds) {
    if (bounds->lower.size() != nvars || bounds->upper.size() != nvars) {
      throw DimensionError("socp: bounds length != nvars");
    }
  }
}

Residuals residuals(const SocpProblem& p, const Eigen::VectorXd& x) {
  if (x.size() != p.nvars) throw DimensionError("residuals: x length != nvars");
  Residuals r;
  const int nb = p.bounds ? 2 * p.nvars : 0;
  r.per_cone_slacks.resize(static_cast<Eigen::Index>(p.cones.size()) + nb);
  double worst = 0.0;
  for (std::size_t i = 0; i < p.cones.size(); ++i) {
    const auto& c = p.cones[i];
    const double lhs = c.a.rows() > 0 ? (c.a * x + c.b).norm() : 0.0;
    const double slack = c.c.dot(x) + c.d - lhs;
    r.per_cone_slacks[static_cast<Eigen::Index>(i)] = slack;
    worst = std::max(worst, -slack);
  }
  if (p.bounds) {
    const auto base = static_cast<Eigen::Index>(p.cones.size());
    for (int j = 0; j < p.nvars; ++j) {
      const double lo = x[j] - p.bounds->lower[j];
      const double hi = p.bounds->upper[j] - x[j];
      r.per_cone_slacks[base + 2 * j] = lo;
      r.per_cone_slacks[base + 2 * j + 1] = hi;
      worst = std::max({worst, -lo, -hi});
    }
  }
  r.primal_violation = worst;
  return r;
}

SolveReport solve(const SocpProblem& p, const SolverSettings& settings) {
  p.validate();
  ConicForm f = to_conic(p);
  equilibrate(f);
  const ConeLayout& k = f.cones;
  const double h_scale = std::max(1.0, f.h.norm());
  const double q_scale = std::max(1.0, f.q.norm());
  const double degree = k.degree();

  Eigen::VectorXd e;
  set_unit(k, e);

  SolveReport report;
  report.x = Eigen::VectorXd::Zero(p.nvars);
  double best_merit = kInf;
  auto record = [&](const Eigen::VectorXd& xhat, double merit, double gap, int iters) {
    if (merit < best_merit) {
      best_merit = merit;
      report.x = xhat;
      report.dual_gap_estimate = gap;
    }
    report.iterations = iters;
  };
  auto finish = [&](SolveStatus status) {
    report.status = status;
    report.objective_value = p.objective.dot(report.x);
    report.primal_residual = residuals(p, report.x).primal_violation;
    return report;
  };

  // Starting point: least-squares primal, minimum-norm dual, shifted into K.
  Iterate it;
  {
    KktSolver init(f, k);
    if (!init.factor(nullptr)) return finish(SolveStatus::max_iterations);
    Eigen::VectorXd x0, z0, xz, zz;
    init.solve(Eigen::VectorXd::Zero(p.nvars), f.h, x0, z0);
    init.solve(-f.q, Eigen::VectorXd::Zero(k.dim), xz, zz);
    it.x = settings.warm_start && settings.warm_start->size() == p.nvars
               ? Eigen::VectorXd(settings.warm_start->cwiseQuotient(f.col_scale))
               : x0;
    it.s = f.h - f.g * it.x;
    it.z = zz;
    const double ap = shift_to_interior(k, it.s);
    if (ap >= 0.0) it.s += (1.0 + ap) * e;
    const double ad = shift_to_interior(k, it.z);
    if (ad >= 0.0) it.z += (1.0 + ad) * e;
  }

  NtScaling w;
  KktSolver kkt(f, k);
  for (int iter = 0; iter <= settings.max_iters; ++iter) {
    const Eigen::VectorXd rx = f.g.transpose() * it.z + f.q * it.tau;
    const Eigen::VectorXd rz = f.g * it.x + it.s - f.h * it.tau;
    const double rt = it.kappa + f.q.dot(it.x) + f.h.dot(it.z);
    const double sz = it.s.dot(it.z);
    const double mu = (sz + it.tau * it.kappa) / (degree + 1.0);

    const double pcost = f.q.dot(it.x) / it.tau;
    const double dcost = -f.h.dot(it.z) / it.tau;
    const double pres = rz.norm() / it.tau / h_scale;
    const double dres = rx.norm() / it.tau / q_scale;
    const double abs_gap = sz / (it.tau * it.tau);
    const double rel_gap = abs_gap / std::max({1.0, std::abs(pcost), std::abs(dcost)});
    const double gap = std::min(abs_gap, rel_gap);
    const Eigen::VectorXd xhat = f.col_scale.cwiseProduct(it.x) / it.tau;

    if (!xhat.allFinite() || !std::isfinite(mu)) break;
    record(xhat, std::max({pres, dres, gap}), gap, iter);

    if (pres <= settings.feas_tol && dres <= settings.feas_tol && gap <= settings.gap_tol) {
      if (residuals(p, xhat).primal_violation <= settings.feas_tol) {
        report.x = xhat;
        report.dual_gap_estimate = gap;
        return finish(SolveStatus::optimal);
      }
    }
    // Certificate of primal infeasibility: h^T z < 0 with G^T z ~ 0.
    const double hz = f.h.dot(it.z);
    if (hz < 0.0 && (f.g.transpose() * it.z).norm() / (-hz) <= settings.feas_tol) {
      return finish(SolveStatus::infeasible);
    }
    if (iter == settings.max_iters) break;

    if (!compute_scaling(k, it.s, it.z, w) || !kkt.factor(&w)) break;

    Eigen::VectorXd x1, z1;
    kkt.solve(-f.q, f.h, x1, z1);
    const double denom = f.q.dot(x1) + f.h.dot(z1) - it.kappa / it.tau;

    struct Direction {
      Eigen::VectorXd dx, dz, ds;
      double dtau = 0.0, dkappa = 0.0;
    };
    auto direction = [&](double resid_scale, const Eigen::VectorXd& ds_rhs, double dk_rhs) {
      Direction d;
      const Eigen::VectorXd lds = jdiv(k, w.lambda, ds_rhs);
      Eigen::VectorXd w_lds;
      apply_w(k, w, false, lds, w_lds);
      Eigen::VectorXd x2, z2;
      kkt.solve(-resid_scale * rx, -resid_scale * rz + w_lds, x2, z2);
      d.dtau = (-resid_scale * rt + dk_rhs / it.tau - f.q.dot(x2) - f.h.dot(z2)) / denom;
      d.dx = x2 + d.dtau * x1;
      d.dz = z2 + d.dtau * z1;
      Eigen::VectorXd wdz;
      apply_w(k, w, false, d.dz, wdz);
      Eigen::VectorXd tmp = -lds - wdz;
      apply_w(k, w, false, tmp, d.ds);
      d.dkappa = -(dk_rhs + it.kappa * d.dtau) / it.tau;
      return d;
    };
    auto step_to_boundary = [&](const Direction& d) {
      double a = std::min(max_step(k, it.s, d.ds), max_step(k, it.z, d.dz));
      if (d.dtau < 0.0) a = std::min(a, -it.tau / d.dtau);
      if (d.dkappa < 0.0) a = std::min(a, -it.kappa / d.dkappa);
      return a;
    };

    // Predictor.
    const Eigen::VectorXd ll = jprod(k, w.lambda, w.lambda);
    const Direction aff = direction(1.0, ll, it.kappa * it.tau);
    const double alpha_aff = std::min(1.0, step_to_boundary(aff));
    const double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3), 0.0, 1.0);

    // Corrector with Mehrotra second-order term.
    Eigen::VectorXd ws, wz;
    apply_w(k, w, true, aff.ds, ws);
    apply_w(k, w, false, aff.dz, wz);
    const Eigen::VectorXd ds_rhs = ll + jprod(k, ws, wz) - sigma * mu * e;
    const double dk_rhs = it.kappa * it.tau + aff.dkappa * aff.dtau - sigma * mu;
    const Direction cmb = direction(1.0 - sigma, ds_rhs, dk_rhs);
    const double alpha = std::min(1.0, 0.99 * step_to_boundary(cmb));
    if (!(alpha > 1e-14) || !std::isfinite(alpha)) break;

    it.x += alpha * cmb.dx;
    it.s += alpha * cmb.ds;
    it.z += alpha * cmb.dz;
    it.tau += alpha * cmb.dtau;
    it.kappa += alpha * cmb.dkappa;
  }
  return finish(SolveStatus::max_iterations);
}

void write_socp_text(std::ostream& out, const SocpProblem& p) {
  const auto old_precision = out.precision(17);
  out << "socp " << p.nvars << ' ' << p.cones.size() << '\n';
  out << "objective";
  for (int j = 0; j < p.nvars; ++j) out << ' ' << p.objective[j];
  out << '\n';
  for (const auto& c : p.cones) {
    out << "cone " << c.a.rows() << '\n' << "c";
    for (Eigen::Index j = 0; j < c.c.size(); ++j) out << ' ' << c.c[j];
    out << "\nd " << c.d << '\n';
    for (Eigen::Index r = 0; r < c.a.rows(); ++r) {
      for (Eigen::Index j = 0; j < c.a.cols(); ++j) out << c.a(r, j) << ' ';
      out << "| " << c.b[r] << '\n';
    }
  }
  if (p.bounds) {
    out << "bounds\n";
    for (int j = 0; j < p.nvars; ++j) {
      out << p.bounds->lower[j] << ' ' << p.bounds->upper[j] << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace manoma
