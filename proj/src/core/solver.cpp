#include "core/solver.hpp"

#include "core/tangential.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

namespace grushin {

namespace {

struct Coef {
  double a11, a22, a12;
};

// A = v I - grad u grad u^T / v at a base point (never called at x = 0).
Coef coef_at(const GraphSurface& S, const Vec& x) {
  const UJet uj = S.u_jet(x, 1);
  const double a = std::pow(x.squaredNorm(), 0.5 * S.params().alpha);
  const double v = std::sqrt(uj.grad.squaredNorm() + a * a);
  Coef c;
  c.a11 = v - uj.grad(0) * uj.grad(0) / v;
  c.a22 = v - uj.grad(1) * uj.grad(1) / v;
  c.a12 = -uj.grad(0) * uj.grad(1) / v;
  return c;
}

struct Lattice {
  Vec lo;
  double h = 0;
  int nx = 0, ny = 0;
  Vec node(int i, int j) const {
    Vec p(2);
    p << lo(0) + h * i, lo(1) + h * j;
    return p;
  }
  std::size_t id(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
};

constexpr std::uint8_t kOutside = 0;
constexpr std::uint8_t kUnknown = 1;
constexpr std::uint8_t kData = 2;  // Dirichlet node (box edge)

// First crossing of |p + t e_d sgn| = Rc for t in (0, h]; negative if none.
double circle_crossing(const Vec& p, int d, double sgn, double Rc, double h) {
  const double po = p(1 - d);
  const double disc = Rc * Rc - po * po;
  if (disc < 0.0) return -1.0;
  const double root = std::sqrt(disc);
  double best = -1.0;
  for (const double target : {root, -root}) {
    const double t = sgn * (target - p(d));
    if (t > 1e-14 * h && t <= h * (1.0 + 1e-12)) {
      if (best < 0.0 || t < best) best = t;
    }
  }
  return best;
}

struct MaskInfo {
  std::function<bool(const Vec&)> inside;
  std::vector<double> circles;  // radii of circular boundary components
  bool box_edges_dirichlet = false;
};

MaskInfo mask_info(const SolveMask& mask) {
  MaskInfo m;
  if (std::holds_alternative<BoxMask>(mask)) {
    m.inside = [](const Vec&) { return true; };
    m.box_edges_dirichlet = true;
  } else if (const auto* d = std::get_if<DiskMask>(&mask)) {
    const double R = d->R;
    m.inside = [R](const Vec& p) { return p.norm() < R; };
    m.circles = {R};
  } else {
    const auto& a = std::get<AnnulusMask>(mask);
    const double R0 = a.R0, R1 = a.R1;
    m.inside = [R0, R1](const Vec& p) {
      const double s = p.norm();
      return s > R0 && s < R1;
    };
    m.circles = {a.R0, a.R1};
  }
  return m;
}

void mask_box(const SolveMask& mask, Vec& lo, Vec& hi) {
  lo.resize(2);
  hi.resize(2);
  if (const auto* b = std::get_if<BoxMask>(&mask)) {
    if (b->lo.size() != 2 || b->hi.size() != 2)
      throw argument_error("mask box corners must be 2-dimensional");
    lo = b->lo;
    hi = b->hi;
  } else if (const auto* d = std::get_if<DiskMask>(&mask)) {
    if (!(d->R > 0.0) || !std::isfinite(d->R)) throw argument_error("disk mask radius must be positive");
    lo << -d->R, -d->R;
    hi << d->R, d->R;
  } else {
    const auto& a = std::get<AnnulusMask>(mask);
    if (!(a.R0 > 0.0) || !(a.R1 > a.R0) || !std::isfinite(a.R1))
      throw argument_error("annulus mask needs 0 < R0 < R1");
    lo << -a.R1, -a.R1;
    hi << a.R1, a.R1;
  }
  const double ex = hi(0) - lo(0), ey = hi(1) - lo(1);
  if (!(ex > 0.0) || !(ey > 0.0)) throw argument_error("mask box must have positive extent");
  if (std::abs(ex - ey) > 1e-12 * std::max(ex, ey))
    throw argument_error("mask box must be square (uniform lattice)");
}

// Shared grid payload behind the interpolant field.
struct GridData {
  Vec lo;
  double h;
  int nx, ny;
  std::vector<double> F;
  std::vector<std::uint8_t> active;
};

// Catmull-Rom weights and derivatives on t in [0, 1].
void cr_weights(double t, double w[4], double dw[4], double ddw[4]) {
  const double t2 = t * t, t3 = t2 * t;
  w[0] = 0.5 * (-t3 + 2.0 * t2 - t);
  w[1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
  w[2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
  w[3] = 0.5 * (t3 - t2);
  dw[0] = 0.5 * (-3.0 * t2 + 4.0 * t - 1.0);
  dw[1] = 0.5 * (9.0 * t2 - 10.0 * t);
  dw[2] = 0.5 * (-9.0 * t2 + 8.0 * t + 1.0);
  dw[3] = 0.5 * (3.0 * t2 - 2.0 * t);
  ddw[0] = 0.5 * (-6.0 * t + 4.0);
  ddw[1] = 0.5 * (18.0 * t - 10.0);
  ddw[2] = 0.5 * (-18.0 * t + 8.0);
  ddw[3] = 0.5 * (6.0 * t - 2.0);
}

void cr_eval(const GridData& gd, const Vec& x, int order, UJet& out) {
  if (x.size() != 2) throw argument_error("interpolation point must be 2-dimensional");
  const double fx = (x(0) - gd.lo(0)) / gd.h;
  const double fy = (x(1) - gd.lo(1)) / gd.h;
  int ci = static_cast<int>(std::floor(fx));
  int cj = static_cast<int>(std::floor(fy));
  ci = std::clamp(ci, 1, gd.nx - 3);
  cj = std::clamp(cj, 1, gd.ny - 3);
  const double t = fx - ci, s = fy - cj;
  if (t < -1e-9 || t > 1.0 + 1e-9 || s < -1e-9 || s > 1.0 + 1e-9)
    throw domain_error("interpolation point is outside the lattice");
  double wx[4], dwx[4], ddwx[4], wy[4], dwy[4], ddwy[4];
  cr_weights(std::clamp(t, 0.0, 1.0), wx, dwx, ddwx);
  cr_weights(std::clamp(s, 0.0, 1.0), wy, dwy, ddwy);

  double v = 0, gx = 0, gy = 0, hxx = 0, hxy = 0, hyy = 0;
  for (int b = 0; b < 4; ++b) {
    const int j = cj - 1 + b;
    for (int a = 0; a < 4; ++a) {
      const int i = ci - 1 + a;
      const std::size_t id = static_cast<std::size_t>(j) * gd.nx + i;
      if (!gd.active[id]) throw domain_error("interpolation stencil leaves the solved region");
      const double f = gd.F[id];
      v += wx[a] * wy[b] * f;
      if (order >= 1) {
        gx += dwx[a] * wy[b] * f;
        gy += wx[a] * dwy[b] * f;
      }
      if (order >= 2) {
        hxx += ddwx[a] * wy[b] * f;
        hxy += dwx[a] * dwy[b] * f;
        hyy += wx[a] * ddwy[b] * f;
      }
    }
  }
  out.value = v;
  if (order >= 1) {
    out.grad = Vec::Zero(2);
    out.grad(0) = gx / gd.h;
    out.grad(1) = gy / gd.h;
  }
  if (order >= 2) {
    out.hess = Mat::Zero(2, 2);
    const double h2 = gd.h * gd.h;
    out.hess(0, 0) = hxx / h2;
    out.hess(0, 1) = out.hess(1, 0) = hxy / h2;
    out.hess(1, 1) = hyy / h2;
  }
}

}  // namespace

SurfaceField SolveSolution::interpolant() const {
  auto gd = std::make_shared<GridData>();
  gd->lo = lo;
  gd->h = h;
  gd->nx = nx;
  gd->ny = ny;
  gd->F = F;
  gd->active = active;
  return SurfaceField(
      [gd](const Vec& x, int order, UJet& out) { cr_eval(*gd, x, order, out); });
}

SolveSolution solve_dirichlet(const GraphSurface& S, const SolveMask& mask, int cells,
                              const BoundaryFn& g, const SolveOptions& opt) {
  if (S.params().n != 2) throw argument_error("lattice solver supports n = 2 only");
  if (cells < 4) throw argument_error("lattice needs at least 4 cells per axis");
  if (!g) throw argument_error("boundary data callable is empty");

  Lattice L;
  Vec hi;
  mask_box(mask, L.lo, hi);
  L.h = (hi(0) - L.lo(0)) / cells;
  L.nx = L.ny = cells + 1;
  const MaskInfo mi = mask_info(mask);

  const std::size_t nn = static_cast<std::size_t>(L.nx) * L.ny;
  std::vector<std::uint8_t> role(nn, kOutside);
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i) {
      if (!mi.inside(L.node(i, j))) continue;
      const bool edge = (i == 0 || j == 0 || i == L.nx - 1 || j == L.ny - 1);
      role[L.id(i, j)] = (edge && mi.box_edges_dirichlet) ? kData : kUnknown;
      if (edge && !mi.box_edges_dirichlet)
        throw numeric_error("mask region touches the lattice frame");
    }

  std::vector<int> idx(nn, -1);
  int nunk = 0;
  for (std::size_t k = 0; k < nn; ++k)
    if (role[k] == kUnknown) idx[k] = nunk++;
  if (nunk == 0) throw argument_error("mask admits no interior unknowns at this resolution");

  std::vector<double> data(nn, 0.0);  // Dirichlet node values
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i)
      if (role[L.id(i, j)] == kData) data[L.id(i, j)] = g(L.node(i, j));

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nunk) * 10);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nunk);
  std::vector<double> diag(static_cast<std::size_t>(nunk), 0.0);

  // Pair term of the energy (w/2)(F_a - F_b)^2; b may carry Dirichlet data.
  auto couple = [&](std::size_t a, std::size_t b, double w) {
    const int ia = idx[a], ib = idx[b];
    if (ia >= 0 && ib >= 0) {
      diag[ia] += w;
      diag[ib] += w;
      trip.emplace_back(ia, ib, -w);
      trip.emplace_back(ib, ia, -w);
    } else if (ia >= 0) {
      diag[ia] += w;
      rhs(ia) += w * data[b];
    } else if (ib >= 0) {
      diag[ib] += w;
      rhs(ib) += w * data[a];
    }
  };

  const int dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (int j = 0; j < L.ny; ++j) {
    for (int i = 0; i < L.nx; ++i) {
      const std::size_t a = L.id(i, j);
      if (role[a] == kOutside) continue;
      // lattice edges, visited once (positive directions)
      for (int d = 0; d < 2; ++d) {
        const int i2 = i + (d == 0), j2 = j + (d == 1);
        if (i2 >= L.nx || j2 >= L.ny) continue;
        const std::size_t b = L.id(i2, j2);
        if (role[b] == kOutside) continue;
        if (role[a] != kUnknown && role[b] != kUnknown) continue;
        const Vec mid = 0.5 * (L.node(i, j) + L.node(i2, j2));
        const Coef c = coef_at(S, mid);
        couple(a, b, d == 0 ? c.a11 : c.a22);
      }
      // cut arms to circular boundary components
      if (role[a] != kUnknown || mi.circles.empty()) continue;
      const Vec p = L.node(i, j);
      for (const auto& dir : dirs) {
        const int i2 = i + dir[0], j2 = j + dir[1];
        if (i2 < 0 || j2 < 0 || i2 >= L.nx || j2 >= L.ny) continue;
        if (role[L.id(i2, j2)] != kOutside) continue;
        const int axis = dir[0] != 0 ? 0 : 1;
        const double sgn = dir[axis] > 0 ? 1.0 : -1.0;
        double t = -1.0;
        for (const double Rc : mi.circles) {
          const double tc = circle_crossing(p, axis, sgn, Rc, L.h);
          if (tc > 0.0 && (t < 0.0 || tc < t)) t = tc;
        }
        Vec cross = p;
        if (t < 0.0) {
          // roundoff corner: project the outside neighbor onto the nearest circle
          Vec q = L.node(i2, j2);
          double best = std::numeric_limits<double>::max(), Rb = mi.circles.front();
          for (const double Rc : mi.circles)
            if (std::abs(q.norm() - Rc) < best) {
              best = std::abs(q.norm() - Rc);
              Rb = Rc;
            }
          cross = q * (Rb / q.norm());
          t = L.h;
        } else {
          cross(axis) += sgn * t;
        }
        const double theta = std::max(t / L.h, 1e-8);
        Vec mid = p;
        mid(axis) += sgn * 0.5 * t;
        const Coef c = coef_at(S, mid);
        const double w = (axis == 0 ? c.a11 : c.a22) / theta;
        const int ia = idx[a];
        diag[ia] += w;
        rhs(ia) += w * g(cross);
      }
    }
  }

  // Cross term per cell: (A12_c/2)(X Y), X = F10+F11-F00-F01, Y = F01+F11-F00-F10.
  for (int j = 0; j + 1 < L.ny; ++j) {
    for (int i = 0; i + 1 < L.nx; ++i) {
      const std::size_t k[4] = {L.id(i, j), L.id(i, j + 1), L.id(i + 1, j), L.id(i + 1, j + 1)};
      bool all = true, any_unknown = false;
      for (const std::size_t kk : k) {
        all = all && role[kk] != kOutside;
        any_unknown = any_unknown || role[kk] == kUnknown;
      }
      if (!all || !any_unknown) continue;
      Vec cc(2);
      cc << L.lo(0) + L.h * (i + 0.5), L.lo(1) + L.h * (j + 0.5);
      const double a12 = coef_at(S, cc).a12;
      if (a12 == 0.0) continue;
      const double sx[4] = {-1.0, -1.0, 1.0, 1.0};  // dX/dF for 00,01,10,11
      const double sy[4] = {-1.0, 1.0, -1.0, 1.0};  // dY/dF
      for (int r = 0; r < 4; ++r) {
        const int ir = idx[k[r]];
        if (ir < 0) continue;
        for (int cix = 0; cix < 4; ++cix) {
          const double w = 0.5 * a12 * (sx[r] * sy[cix] + sy[r] * sx[cix]);
          if (w == 0.0) continue;
          const int ic = idx[k[cix]];
          if (ic >= 0) {
            if (ic == ir)
              diag[ir] += w;
            else
              trip.emplace_back(ir, ic, w);
          } else {
            rhs(ir) -= w * data[k[cix]];
          }
        }
      }
    }
  }

  for (int r = 0; r < nunk; ++r) trip.emplace_back(r, r, diag[r]);
  Eigen::SparseMatrix<double> M(nunk, nunk);
  M.setFromTriplets(trip.begin(), trip.end());
  M.makeCompressed();

  Eigen::VectorXd sol;
  double res = std::numeric_limits<double>::infinity();
  const double rhsn = std::max(rhs.norm(), 1e-300);
  {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(M);
    if (ldlt.info() == Eigen::Success) {
      sol = ldlt.solve(rhs);
      if (ldlt.info() == Eigen::Success) res = (M * sol - rhs).norm() / rhsn;
    }
  }
  if (!(res <= opt.residual_tol)) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(M);
    if (lu.info() == Eigen::Success) {
      Eigen::VectorXd s2 = lu.solve(rhs);
      if (lu.info() == Eigen::Success) {
        const double r2 = (M * s2 - rhs).norm() / rhsn;
        if (r2 < res) {
          res = r2;
          sol = std::move(s2);
        }
      }
    }
  }
  if (!(res <= opt.residual_tol)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "linear solve did not converge: relative residual %.3e (tol %.3e)",
                  res, opt.residual_tol);
    throw numeric_error(buf);
  }

  SolveSolution out;
  out.lo = L.lo;
  out.h = L.h;
  out.nx = L.nx;
  out.ny = L.ny;
  out.residual = res;
  out.unknowns = nunk;
  out.F.assign(nn, 0.0);
  out.active.assign(nn, 0);
  for (std::size_t kk = 0; kk < nn; ++kk) {
    if (role[kk] == kOutside) continue;
    out.active[kk] = 1;
    out.F[kk] = role[kk] == kData ? data[kk] : sol(idx[kk]);
  }
  return out;
}

double residual_check(const GraphSurface& S, const SolveSolution& sol, double margin,
                      int max_samples) {
  if (sol.nx < 8) throw argument_error("solution lattice too coarse for a residual check");
  if (!(margin >= 0.0)) throw argument_error("residual margin must be >= 0");
  const SurfaceField F = sol.interpolant();
  const int steps = std::max(2, static_cast<int>(std::ceil(margin / sol.h)));
  const int reach = steps + 1;

  std::vector<Vec> pts;
  for (int j = 0; j + 1 < sol.ny; ++j) {
    for (int i = 0; i + 1 < sol.nx; ++i) {
      bool ok = true;
      for (int b = j - reach + 1; ok && b <= j + reach; ++b)
        for (int a = i - reach + 1; ok && a <= i + reach; ++a)
          ok = a >= 0 && b >= 0 && a < sol.nx && b < sol.ny && sol.is_active(a, b);
      if (!ok) continue;
      Vec c(2);
      c << sol.lo(0) + sol.h * (i + 0.5), sol.lo(1) + sol.h * (j + 0.5);
      if (c.norm() < std::max(margin, 2.0 * sol.h)) continue;
      pts.push_back(std::move(c));
    }
  }
  if (pts.empty()) throw domain_error("no admissible residual sample points");

  const std::size_t stride = std::max<std::size_t>(1, pts.size() / std::max(max_samples, 1));
  double worst = 0.0;
  for (std::size_t k = 0; k < pts.size(); k += stride)
    worst = std::max(worst, std::abs(surface_laplacian(S, F, pts[k], LaplacianMethod::divergence)));
  return worst;
}

}  // namespace grushin
