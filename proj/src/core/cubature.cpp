#include "core/cubature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <thread>

namespace grushin {

namespace {

constexpr int kMaxComponents = 16;

struct Rule1D {
  std::vector<double> x, w;  // nodes/weights on [-1, 1]
};

// Gauss-Legendre nodes by Newton iteration on P_k; full double precision.
Rule1D make_rule(int k) {
  Rule1D r;
  r.x.resize(k);
  r.w.resize(k);
  for (int i = 1; i <= k; ++i) {
    double x = std::cos(M_PI * (i - 0.25) / (k + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 64; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= k; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = k * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        // one more pass to polish, then stop
        double q0 = 1.0, q1 = x;
        for (int j = 2; j <= k; ++j) {
          const double q2 = ((2.0 * j - 1.0) * x * q1 - (j - 1.0) * q0) / j;
          q0 = q1;
          q1 = q2;
        }
        dp = k * (x * q1 - q0) / (x * x - 1.0);
        x -= q1 / dp;
        break;
      }
    }
    r.x[k - i] = x;
    r.w[k - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // enforce exact symmetry
  for (int i = 0, j = k - 1; i < j; ++i, --j) {
    const double xs = 0.5 * (r.x[j] - r.x[i]);
    const double ws = 0.5 * (r.w[i] + r.w[j]);
    r.x[i] = -xs;
    r.x[j] = xs;
    r.w[i] = r.w[j] = ws;
  }
  return r;
}

const Rule1D& gl(int k) {
  static const Rule1D r4 = make_rule(4);
  static const Rule1D r6 = make_rule(6);
  static const Rule1D r8 = make_rule(8);
  static const Rule1D r10 = make_rule(10);
  static const Rule1D r12 = make_rule(12);
  switch (k) {
    case 4: return r4;
    case 6: return r6;
    case 8: return r8;
    case 10: return r10;
    case 12: return r12;
  }
  throw argument_error("cubature: unsupported rule order");
}

using Acc = std::array<double, kMaxComponents>;

struct Cell {
  Vec lo, hi;
  Acc val{};
  Acc err{};
  double key = 0.0;
  std::uint64_t id = 0;
  int depth = 0;
  bool straddle = false;
  bool splittable = true;
  bool alive = true;
  std::size_t evals = 0;  // integrand evaluations spent on this cell
  double fmax = 0.0;      // max |component| seen while evaluating
};

double pairwise(const std::vector<double>& v, std::size_t b, std::size_t e) {
  if (e - b == 0) return 0.0;
  if (e - b == 1) return v[b];
  const std::size_t mid = b + (e - b) / 2;
  return pairwise(v, b, mid) + pairwise(v, mid, e);
}

class Engine {
 public:
  Engine(int m, const Integrand& f, const LevelSet* g, const CubatureOptions& opt)
      : m_(m), f_(f), g_(g), opt_(opt) {
    if (m < 1 || m > kMaxComponents)
      throw argument_error("cubature: component count out of range");
    if (!(opt.rel_tol > 0) || !(opt.abs_tol >= 0))
      throw argument_error("cubature: bad tolerances");
    if (opt.workers < 1) throw argument_error("cubature: workers must be >= 1");
  }

  CubatureResult run(const Vec& lo, const Vec& hi);

 private:
  // rule evaluation ---------------------------------------------------------
  void tensor_rule(const Cell& c, int order, double* out, std::size_t& evals,
                   double& fmax) const;
  void eval_plain(Cell& c) const;
  bool eval_sliced(Cell& c, int inner, double fscale) const;
  void eval_straddle(Cell& c, double fscale) const;
  void eval_cell(Cell& c, double fscale) const;
  int classify(const Vec& lo, const Vec& hi) const;  // -1 in, +1 out, 0 straddle
  double column(const Vec& outer, int inner, double a, double b, double* out,
                std::size_t& evals, double& fmax) const;  // returns +1 ok, -1 invalid

  void set_key(Cell& c) const;

  int m_;
  const Integrand& f_;
  const LevelSet* g_;
  CubatureOptions opt_;

  // running totals, updated incrementally as cells split
  mutable Acc tot_err_{};
  mutable Acc tot_l1_{};
};

void Engine::tensor_rule(const Cell& c, int order, double* out, std::size_t& evals,
                         double& fmax) const {
  const int n = static_cast<int>(c.lo.size());
  const Rule1D& r = gl(order);
  std::fill(out, out + m_, 0.0);
  std::vector<int> idx(n, 0);
  Vec x(n);
  Acc fv{};
  double scale = 1.0;
  for (int d = 0; d < n; ++d) scale *= 0.5 * (c.hi(d) - c.lo(d));
  for (;;) {
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      x(d) = 0.5 * (c.lo(d) + c.hi(d)) + 0.5 * (c.hi(d) - c.lo(d)) * r.x[idx[d]];
      w *= r.w[idx[d]];
    }
    f_(x, fv.data());
    ++evals;
    for (int j = 0; j < m_; ++j) {
      out[j] += w * fv[j];
      fmax = std::max(fmax, std::abs(fv[j]));
    }
    int d = 0;
    while (d < n && ++idx[d] == order) idx[d++] = 0;
    if (d == n) break;
  }
  for (int j = 0; j < m_; ++j) out[j] *= scale;
}

void Engine::eval_plain(Cell& c) const {
  Acc coarse{}, fine{};
  c.evals = 0;
  c.fmax = 0.0;
  tensor_rule(c, 4, coarse.data(), c.evals, c.fmax);
  tensor_rule(c, 8, fine.data(), c.evals, c.fmax);
  for (int j = 0; j < m_; ++j) {
    c.val[j] = fine[j];
    c.err[j] = std::abs(fine[j] - coarse[j]);
  }
}

// Integrates f over the inside pieces of the segment {outer with slot inner
// running over [a, b]}; GL12 on each piece. Returns -1 when the boundary
// meets the column more than twice (slicing invalid there).
double Engine::column(const Vec& outer, int inner, double a, double b, double* out,
                      std::size_t& evals, double& fmax) const {
  std::fill(out, out + m_, 0.0);
  Vec x = outer;
  const auto gval = [&](double t) {
    x(inner) = t;
    return (*g_)(x);
  };
  constexpr int K = 17;
  std::array<double, K> gs;
  std::array<double, K> ts;
  for (int i = 0; i < K; ++i) {
    ts[i] = a + (b - a) * i / (K - 1);
    gs[i] = gval(ts[i]);
  }
  // locate sign changes; treat g <= 0 as inside
  std::vector<double> cross;
  for (int i = 0; i + 1 < K; ++i) {
    const bool in0 = gs[i] <= 0.0, in1 = gs[i + 1] <= 0.0;
    if (in0 == in1) continue;
    double u = ts[i], v = ts[i + 1];
    for (int it = 0; it < 60 && (v - u) > 1e-14 * (b - a); ++it) {
      const double mid = 0.5 * (u + v);
      if ((gval(mid) <= 0.0) == in0)
        u = mid;
      else
        v = mid;
    }
    cross.push_back(0.5 * (u + v));
  }
  if (cross.size() > 2) return -1.0;

  const Rule1D& r12 = gl(12);
  Acc fv{};
  auto piece = [&](double u, double v) {
    if (v - u <= 1e-14 * (b - a)) return;
    const double cmid = 0.5 * (u + v), chalf = 0.5 * (v - u);
    for (std::size_t q = 0; q < r12.x.size(); ++q) {
      x(inner) = cmid + chalf * r12.x[q];
      f_(x, fv.data());
      ++evals;
      for (int j = 0; j < m_; ++j) {
        out[j] += chalf * r12.w[q] * fv[j];
        fmax = std::max(fmax, std::abs(fv[j]));
      }
    }
  };
  double prev = a;
  bool inside = gs[0] <= 0.0;
  for (double cpt : cross) {
    if (inside) piece(prev, cpt);
    prev = cpt;
    inside = !inside;
  }
  if (inside) piece(prev, b);
  return 1.0;
}

// Straddle cell: outer Gauss grid over all dims but `inner`, inside pieces
// resolved per column. Error from an embedded outer pair (orders 6 and 10).
bool Engine::eval_sliced(Cell& c, int inner, double fscale) const {
  const int n = static_cast<int>(c.lo.size());
  std::size_t evals = 0;
  double fmax = 0.0;
  Acc fine{}, coarse{};

  if (n == 1) {
    // no outer dims: resolve crossings once; the error estimate compares the
    // single-pass value against a half-interval refinement
    Vec outer(1);
    Acc left{}, right{};
    const double mid = 0.5 * (c.lo(0) + c.hi(0));
    const bool ok = column(outer, 0, c.lo(0), c.hi(0), fine.data(), evals, fmax) > 0 &&
                    column(outer, 0, c.lo(0), mid, left.data(), evals, fmax) > 0 &&
                    column(outer, 0, mid, c.hi(0), right.data(), evals, fmax) > 0;
    c.evals += evals;
    if (!ok) return false;
    c.fmax = std::max(c.fmax, fmax);
    for (int j = 0; j < m_; ++j) {
      const double refined = left[j] + right[j];
      c.val[j] = refined;
      c.err[j] = std::abs(refined - fine[j]);
    }
    return true;
  }

  std::vector<int> odims;
  for (int d = 0; d < n; ++d)
    if (d != inner) odims.push_back(d);

  for (int pass = 0; pass < 2; ++pass) {
    const Rule1D& ro = gl(pass == 0 ? 6 : 10);
    double* out = pass == 0 ? coarse.data() : fine.data();
    std::fill(out, out + m_, 0.0);
    const int on = n - 1;
    std::vector<int> idx(on, 0);
    Vec p(n);
    Acc col{};
    double oscale = 1.0;
    for (int dd : odims) oscale *= 0.5 * (c.hi(dd) - c.lo(dd));
    for (;;) {
      double w = 1.0;
      for (int d = 0; d < on; ++d) {
        const int dd = odims[d];
        p(dd) = 0.5 * (c.lo(dd) + c.hi(dd)) + 0.5 * (c.hi(dd) - c.lo(dd)) * ro.x[idx[d]];
        w *= ro.w[idx[d]];
      }
      if (column(p, inner, c.lo(inner), c.hi(inner), col.data(), evals, fmax) < 0) {
        c.evals += evals;
        return false;
      }
      for (int j = 0; j < m_; ++j) out[j] += w * col[j];
      int d = 0;
      while (d < on && ++idx[d] == static_cast<int>(ro.x.size())) idx[d++] = 0;
      if (d == on) break;
    }
    for (int j = 0; j < m_; ++j) out[j] *= oscale;
  }
  c.evals += evals;
  c.fmax = std::max(c.fmax, fmax);
  for (int j = 0; j < m_; ++j) {
    c.val[j] = fine[j];
    c.err[j] = std::abs(fine[j] - coarse[j]);
  }
  (void)fscale;
  return true;
}

void Engine::eval_straddle(Cell& c, double fscale) const {
  const int n = static_cast<int>(c.lo.size());
  c.evals = 0;
  c.fmax = 0.0;
  // boundary-transverse direction: probe the level-set gradient at center
  Vec ctr = 0.5 * (c.lo + c.hi);
  std::vector<std::pair<double, int>> order;
  for (int d = 0; d < n; ++d) {
    const double h = 1e-4 * (c.hi(d) - c.lo(d));
    Vec p = ctr, q = ctr;
    p(d) += h;
    q(d) -= h;
    order.push_back({-std::abs((*g_)(p) - (*g_)(q)) / h, d});
  }
  std::sort(order.begin(), order.end());
  for (auto& [neg_slope, d] : order) {
    (void)neg_slope;
    if (eval_sliced(c, d, fscale)) return;
  }
  // boundary too wiggly for every slicing direction: force a split by
  // charging the cell a conservative error
  double vol = 1.0;
  for (int d = 0; d < n; ++d) vol *= c.hi(d) - c.lo(d);
  for (int j = 0; j < m_; ++j) {
    c.val[j] = 0.0;
    c.err[j] = vol * (fscale + 1.0);
  }
}

void Engine::eval_cell(Cell& c, double fscale) const {
  if (c.straddle)
    eval_straddle(c, fscale);
  else
    eval_plain(c);
}

int Engine::classify(const Vec& lo, const Vec& hi) const {
  const int n = static_cast<int>(lo.size());
  std::vector<int> idx(n, 0);
  Vec x(n);
  bool any_in = false, any_out = false;
  for (;;) {
    for (int d = 0; d < n; ++d)
      x(d) = lo(d) + 0.5 * (hi(d) - lo(d)) * idx[d];
    const double gv = (*g_)(x);
    (gv <= 0.0 ? any_in : any_out) = true;
    if (any_in && any_out) return 0;
    int d = 0;
    while (d < n && ++idx[d] == 3) idx[d++] = 0;
    if (d == n) break;
  }
  return any_in ? -1 : +1;
}

void Engine::set_key(Cell& c) const {
  double key = 0.0;
  for (int j = 0; j < m_; ++j) {
    const double target = std::max(opt_.abs_tol, opt_.rel_tol * tot_l1_[j]);
    key = std::max(key, c.err[j] / target);
  }
  c.key = key;
}

CubatureResult Engine::run(const Vec& lo, const Vec& hi) {
  const int n = static_cast<int>(lo.size());
  if (n < 1) throw argument_error("cubature: dimension must be >= 1");
  for (int d = 0; d < n; ++d)
    if (!(lo(d) < hi(d))) throw argument_error("cubature: empty box");

  std::vector<Cell> cells;
  std::uint64_t next_id = 0;
  std::size_t total_evals = 0;
  double fscale = 0.0;

  // initial grid: origin on a corner, then one or two uniform bisections
  std::vector<std::pair<Vec, Vec>> boxes{{lo, hi}};
  for (int d = 0; d < n; ++d) {
    std::vector<std::pair<Vec, Vec>> split;
    for (auto& [blo, bhi] : boxes) {
      if (blo(d) < 0.0 && 0.0 < bhi(d)) {
        auto a = std::make_pair(blo, bhi), b = std::make_pair(blo, bhi);
        a.second(d) = 0.0;
        b.first(d) = 0.0;
        split.push_back(a);
        split.push_back(b);
      } else {
        split.push_back({blo, bhi});
      }
    }
    boxes.swap(split);
  }
  const int pre = g_ ? 2 : 1;
  for (int lvl = 0; lvl < pre; ++lvl) {
    for (int d = 0; d < n; ++d) {
      std::vector<std::pair<Vec, Vec>> split;
      for (auto& [blo, bhi] : boxes) {
        auto a = std::make_pair(blo, bhi), b = std::make_pair(blo, bhi);
        const double mid = 0.5 * (blo(d) + bhi(d));
        a.second(d) = mid;
        b.first(d) = mid;
        split.push_back(a);
        split.push_back(b);
      }
      boxes.swap(split);
    }
  }

  auto admit = [&](Vec blo, Vec bhi, int depth) {
    if (g_) {
      const int cls = classify(blo, bhi);
      if (cls > 0) return;  // fully outside
      Cell c;
      c.lo = std::move(blo);
      c.hi = std::move(bhi);
      c.depth = depth;
      c.straddle = (cls == 0);
      c.id = next_id++;
      cells.push_back(std::move(c));
    } else {
      Cell c;
      c.lo = std::move(blo);
      c.hi = std::move(bhi);
      c.depth = depth;
      c.id = next_id++;
      cells.push_back(std::move(c));
    }
  };
  for (auto& [blo, bhi] : boxes) admit(blo, bhi, 0);

  for (auto& c : cells) {
    eval_cell(c, fscale);
    total_evals += c.evals;
    fscale = std::max(fscale, c.fmax);
    for (int j = 0; j < m_; ++j) {
      tot_err_[j] += c.err[j];
      tot_l1_[j] += std::abs(c.val[j]);
    }
  }

  auto cmp = [&](std::uint64_t a, std::uint64_t b) {
    if (cells[a].key != cells[b].key) return cells[a].key < cells[b].key;
    return cells[a].id < cells[b].id;
  };
  std::priority_queue<std::uint64_t, std::vector<std::uint64_t>, decltype(cmp)> queue(cmp);
  for (auto& c : cells) {
    set_key(c);
    if (c.splittable) queue.push(c.id);
  }

  auto done = [&]() {
    for (int j = 0; j < m_; ++j)
      if (tot_err_[j] > std::max(opt_.abs_tol, opt_.rel_tol * tot_l1_[j])) return false;
    return true;
  };

  while (!done() && !queue.empty() && total_evals < opt_.max_evals) {
    // pop a fixed-size batch of worst cells; the batch size must not depend
    // on the worker count, or the refinement schedule (and with it the last
    // bits of the result) would change with the parallelism level
    std::vector<std::uint64_t> batch;
    constexpr int kBatch = 4;
    while (!queue.empty() && static_cast<int>(batch.size()) < kBatch) {
      const std::uint64_t id = queue.top();
      queue.pop();
      Cell& c = cells[id];
      if (!c.splittable || c.depth >= opt_.max_depth) {
        c.splittable = false;
        continue;
      }
      batch.push_back(id);
    }
    if (batch.empty()) break;

    struct Child {
      Cell cell;
      bool keep = true;
    };
    std::vector<Child> children;
    for (const std::uint64_t id : batch) {
      Cell& c = cells[id];
      int wd = 0;
      for (int d = 1; d < n; ++d)
        if (c.hi(d) - c.lo(d) > c.hi(wd) - c.lo(wd)) wd = d;
      const double mid = 0.5 * (c.lo(wd) + c.hi(wd));
      for (int side = 0; side < 2; ++side) {
        Child ch;
        ch.cell.lo = c.lo;
        ch.cell.hi = c.hi;
        if (side == 0)
          ch.cell.hi(wd) = mid;
        else
          ch.cell.lo(wd) = mid;
        ch.cell.depth = c.depth + 1;
        ch.cell.straddle = c.straddle;  // refined below
        children.push_back(std::move(ch));
      }
    }

    const double fscale_snapshot = fscale;
    auto work = [&](std::size_t begin, std::size_t stride) {
      for (std::size_t i = begin; i < children.size(); i += stride) {
        Cell& c = children[i].cell;
        if (g_ && c.straddle) {
          const int cls = classify(c.lo, c.hi);
          if (cls > 0) {
            children[i].keep = false;
            continue;
          }
          c.straddle = (cls == 0);
        }
        eval_cell(c, fscale_snapshot);
      }
    };
    if (opt_.workers > 1 && children.size() > 1) {
      const std::size_t W2 = std::min<std::size_t>(opt_.workers, children.size());
      std::vector<std::thread> pool;
      for (std::size_t t = 1; t < W2; ++t) pool.emplace_back(work, t, W2);
      work(0, W2);
      for (auto& th : pool) th.join();
    } else {
      work(0, 1);
    }

    // deterministic, in-order commit
    for (const std::uint64_t id : batch) {
      Cell& c = cells[id];
      c.alive = false;
      c.splittable = false;
      for (int j = 0; j < m_; ++j) {
        tot_err_[j] -= c.err[j];
        tot_l1_[j] -= std::abs(c.val[j]);
      }
    }
    for (auto& ch : children) {
      if (!ch.keep) continue;
      ch.cell.id = next_id++;
      total_evals += ch.cell.evals;
      fscale = std::max(fscale, ch.cell.fmax);
      for (int j = 0; j < m_; ++j) {
        tot_err_[j] += ch.cell.err[j];
        tot_l1_[j] += std::abs(ch.cell.val[j]);
      }
      cells.push_back(std::move(ch.cell));
      Cell& c = cells.back();
      set_key(c);
      if (c.splittable) queue.push(c.id);
    }
  }

  // final deterministic reduction: pairwise over live cells in id order
  CubatureResult res;
  res.value.assign(m_, 0.0);
  res.error.assign(m_, 0.0);
  std::vector<double> vbuf, ebuf;
  vbuf.reserve(cells.size());
  for (int j = 0; j < m_; ++j) {
    vbuf.clear();
    ebuf.clear();
    for (const auto& c : cells) {
      if (!c.alive) continue;
      vbuf.push_back(c.val[j]);
      ebuf.push_back(c.err[j]);
    }
    res.value[j] = pairwise(vbuf, 0, vbuf.size());
    res.error[j] = pairwise(ebuf, 0, ebuf.size());
  }
  res.cells = vbuf.size();
  res.evals = total_evals;
  res.converged = done();
  return res;
}

}  // namespace

CubatureResult integrate_box(int m, const Integrand& f, const Vec& lo, const Vec& hi,
                             const CubatureOptions& opt) {
  Engine e(m, f, nullptr, opt);
  return e.run(lo, hi);
}

CubatureResult integrate_region(int m, const Integrand& f, const LevelSet& g,
                                const Vec& lo, const Vec& hi, const CubatureOptions& opt) {
  Engine e(m, f, &g, opt);
  return e.run(lo, hi);
}

}  // namespace grushin
