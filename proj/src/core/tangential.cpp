#include "core/tangential.hpp"

namespace grushin {

namespace {

// delta applied to an x-only scalar with known gradient; returns size n+1.
Vec delta_of_scalar(const Frame& fr, const Vec& grad_w) {
  const int n = fr.P.n;
  const double c = grad_w.dot(fr.nu_bar);
  Vec d(n + 1);
  d.head(n) = grad_w.head(n) - c * fr.nu_bar;
  d(n) = -c * fr.nu_last;
  return d;
}

// delta log |x|^alpha.
Vec delta_log_a(const Frame& fr) {
  return delta_of_scalar(fr, fr.P.alpha / fr.s2 * fr.x);
}

// Bracket multiplying psi in delta_i^*: delta_i log a
//   + (delta_n nu_i - delta_i nu_n)/nu_n + n H nu_i, for all slots i.
Vec adjoint_bracket(const Frame& fr) {
  const int n = fr.P.n;
  const Vec dla = delta_log_a(fr);
  const double c_nl = fr.dnu_last.dot(fr.nu_bar);  // <grad nu_last, nu_bar>
  Vec b(n + 1);
  for (int i = 0; i < n; ++i) {
    const double delta_n_nui = -fr.dnu_bar.row(i).dot(fr.nu_bar) * fr.nu_last;
    const double delta_i_nulast = fr.dnu_last(i) - c_nl * fr.nu_bar(i);
    b(i) = dla(i) + (delta_n_nui - delta_i_nulast) / fr.nu_last +
           fr.P.n * fr.H * fr.nu_bar(i);
  }
  b(n) = dla(n) + fr.P.n * fr.H * fr.nu_last;  // the nu_n commutator term cancels
  return b;
}

// (value, gradient) pairs of the tangential components delta_i F as functions
// of x, obtained by first-order jet propagation. vals: size n+1; grads: rows.
void delta_field_jets(const Frame& fr, const UJet& F, Vec& vals, Mat& grads) {
  const int n = fr.P.n;
  const double c = F.grad.dot(fr.nu_bar);
  const Vec dc = F.hess * fr.nu_bar + fr.dnu_bar.transpose() * F.grad;
  vals.resize(n + 1);
  grads.resize(n + 1, n);
  for (int i = 0; i < n; ++i) {
    vals(i) = F.grad(i) - c * fr.nu_bar(i);
    grads.row(i) = F.hess.row(i) - fr.nu_bar(i) * dc.transpose() - c * fr.dnu_bar.row(i);
  }
  vals(n) = -c * fr.nu_last;
  grads.row(n) = -fr.nu_last * dc.transpose() - c * fr.dnu_last.transpose();
}

// Same for an ambient f, restricted to the graph. Needs the order-2 ambient
// jet at (x, u(x)) and the order-2 u-jet held by the frame.
void delta_ambient_jets(const Frame& fr, const AmbientJet& f, Vec& vals, Mat& grads) {
  const int n = fr.P.n;
  const Vec& gu = fr.u.grad;

  // Jet1 data of the restricted partials: fx_i, fy, and a.
  Mat dfx(n, n);  // row i: grad of (d_i f)(x, u(x))
  for (int i = 0; i < n; ++i)
    dfx.row(i) = f.hess.row(i).head(n) + f.hess(i, n) * gu.transpose();
  const double fy = f.grad(n);
  const Vec dfy = f.hess.col(n).head(n) + f.hess(n, n) * gu;

  // c = <X f, nu> = <f_x, nu_bar> + a f_y nu_last and its gradient.
  const double c = f.grad.head(n).dot(fr.nu_bar) + fr.a * fy * fr.nu_last;
  Vec dc = dfx.transpose() * fr.nu_bar + fr.dnu_bar.transpose() * f.grad.head(n);
  dc += (fr.da * fy + fr.a * dfy) * fr.nu_last + fr.a * fy * fr.dnu_last;

  vals.resize(n + 1);
  grads.resize(n + 1, n);
  for (int i = 0; i < n; ++i) {
    vals(i) = f.grad(i) - c * fr.nu_bar(i);
    grads.row(i) = dfx.row(i) - fr.nu_bar(i) * dc.transpose() - c * fr.dnu_bar.row(i);
  }
  vals(n) = fr.a * fy - c * fr.nu_last;
  grads.row(n) = (fr.da * fy + fr.a * dfy).transpose() - fr.nu_last * dc.transpose() -
                 c * fr.dnu_last.transpose();
}

// sum_i delta_i applied to the stacked (value, gradient) data of delta_i F.
double contract_delta(const Frame& fr, const Vec& vals, const Mat& grads) {
  const int n = fr.P.n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cw = grads.row(i).dot(fr.nu_bar);
    acc += grads(i, i) - cw * fr.nu_bar(i);
  }
  acc += -grads.row(n).dot(fr.nu_bar) * fr.nu_last;
  (void)vals;
  return acc;
}

}  // namespace

Frame make_frame(const GraphSurface& S, const Vec& x) {
  const Params& P = S.params();
  check_dim(P, x, "make_frame");
  Frame fr;
  fr.P = P;
  fr.x = x;
  fr.s2 = x.squaredNorm();
  if (fr.s2 <= 0.0) throw domain_error("tangential calculus: needs x != 0");
  const int n = P.n;
  fr.u = S.u_jet(x, 2);
  fr.a = std::pow(fr.s2, 0.5 * P.alpha);
  fr.da = P.alpha * std::pow(fr.s2, 0.5 * P.alpha - 1.0) * x;
  fr.v = std::sqrt(fr.u.grad.squaredNorm() + fr.a * fr.a);
  fr.dv = (fr.u.hess * fr.u.grad + P.alpha * std::pow(fr.s2, P.alpha - 1.0) * x) / fr.v;
  fr.nu_bar = -fr.u.grad / fr.v;
  fr.nu_last = fr.a / fr.v;
  fr.dnu_bar = -fr.u.hess / fr.v + (fr.u.grad / (fr.v * fr.v)) * fr.dv.transpose();
  fr.dnu_last = fr.da / fr.v - (fr.a / (fr.v * fr.v)) * fr.dv;
  fr.H = (fr.u.hess.trace() / fr.v - fr.u.grad.dot(fr.dv) / (fr.v * fr.v)) / n;

  fr.rho_j = rho_jet(P, Point{x, fr.u.value});
  fr.rho = fr.rho_j.value;
  fr.xrho = Vec(n + 1);
  fr.xrho.head(n) = fr.rho_j.grad.head(n);
  fr.xrho(n) = fr.a * fr.rho_j.grad(n);
  fr.xrho2 = std::pow(fr.s2, P.alpha) * std::pow(fr.rho, -2.0 * P.alpha);
  return fr;
}

Vec tangential_gradient(const Frame& fr, const SurfaceField& F) {
  const UJet j = F.jet(fr.x, 1);
  return delta_of_scalar(fr, j.grad);
}

Vec tangential_gradient(const Frame& fr, const AmbientField& f) {
  const int n = fr.P.n;
  const AmbientJet j = f.jet(Point{fr.x, fr.u.value});
  Vec xf(n + 1);
  xf.head(n) = j.grad.head(n);
  xf(n) = fr.a * j.grad(n);
  const double c = xf.head(n).dot(fr.nu_bar) + xf(n) * fr.nu_last;
  Vec d(n + 1);
  d.head(n) = xf.head(n) - c * fr.nu_bar;
  d(n) = xf(n) - c * fr.nu_last;
  return d;
}

Vec tangential_gradient(const GraphSurface& S, const SurfaceField& F, const Vec& x) {
  return tangential_gradient(make_frame(S, x), F);
}
Vec tangential_gradient(const GraphSurface& S, const AmbientField& f, const Vec& x) {
  return tangential_gradient(make_frame(S, x), f);
}

Vec delta_rho(const Frame& fr) {
  const double t = xrho_dot_nu(fr);
  Vec d(fr.P.n + 1);
  d.head(fr.P.n) = fr.xrho.head(fr.P.n) - t * fr.nu_bar;
  d(fr.P.n) = fr.xrho(fr.P.n) - t * fr.nu_last;
  return d;
}

double xrho_dot_nu(const Frame& fr) {
  return fr.xrho.head(fr.P.n).dot(fr.nu_bar) + fr.xrho(fr.P.n) * fr.nu_last;
}

void kernel_area(const GraphSurface& S, const Vec& x, double& k, double& v) {
  // First-order-only fast path: used inside every quadrature weight.
  const Params& P = S.params();
  const double s2 = x.squaredNorm();
  if (s2 <= 0.0) throw domain_error("kernel: needs x != 0");
  const UJet uj = S.u_jet(x, 1);
  const double a = std::pow(s2, 0.5 * P.alpha);
  v = std::sqrt(uj.grad.squaredNorm() + a * a);
  const double r = rho(P, Point{x, uj.value});
  const double rm = std::pow(r, -(2.0 * P.alpha + 1.0));
  const double s2a = std::pow(s2, P.alpha);
  // X rho = (x |x|^{2a} rho^-(2a+1), a beta y rho^-(2a+1)).
  const double beta = P.alpha + 1.0;
  const double t = (s2a * rm * x.dot(-uj.grad) + a * beta * uj.value * rm * a) / v;
  const double xrho2 = s2a * std::pow(r, -2.0 * P.alpha);
  k = xrho2 - t * t;
}

double kernel(const GraphSurface& S, const Vec& x) {
  double k = 0, v = 0;
  kernel_area(S, x, k, v);
  return k;
}

double adjoint_tangential(const GraphSurface& S, const SurfaceField& psi, const Vec& x, int i) {
  const Frame fr = make_frame(S, x);
  const int n = fr.P.n;
  if (i < 0 || i > n) throw argument_error("adjoint_tangential: slot i out of range");
  const UJet j = psi.jet(x, 1);
  const Vec d = delta_of_scalar(fr, j.grad);
  const Vec b = adjoint_bracket(fr);
  return -d(i) - j.value * b(i);
}

double tangential_laplacian(const GraphSurface& S, const SurfaceField& F, const Vec& x) {
  const Frame fr = make_frame(S, x);
  Vec vals;
  Mat grads;
  delta_field_jets(fr, F.jet(x, 2), vals, grads);
  return contract_delta(fr, vals, grads);
}

double tangential_laplacian(const GraphSurface& S, const AmbientField& f, const Vec& x) {
  const Frame fr = make_frame(S, x);
  Vec vals;
  Mat grads;
  delta_ambient_jets(fr, f.jet(Point{x, fr.u.value}), vals, grads);
  return contract_delta(fr, vals, grads);
}

double surface_laplacian(const GraphSurface& S, const SurfaceField& F, const Vec& x,
                         LaplacianMethod method) {
  const Frame fr = make_frame(S, x);
  const int n = fr.P.n;
  switch (method) {
    case LaplacianMethod::adjoint: {
      // -sum_i delta_i^*(delta_i F) = sum_i [ delta_i(delta_i F) + B_i delta_i F ].
      Vec vals;
      Mat grads;
      delta_field_jets(fr, F.jet(x, 2), vals, grads);
      const Vec b = adjoint_bracket(fr);
      return contract_delta(fr, vals, grads) + b.dot(vals);
    }
    case LaplacianMethod::corrected: {
      // Delta_S F (ambient route: trace minus normal-normal plus curvature
      // term) plus the weight-gradient corrections.
      const UJet j = F.jet(x, 2);
      const double c = j.grad.dot(fr.nu_bar);
      const double delta_s =
          j.hess.trace() - fr.nu_bar.dot(j.hess * fr.nu_bar) + n * fr.H * c;
      const Vec dF = delta_of_scalar(fr, j.grad);
      const Vec dla = delta_log_a(fr);
      return delta_s + fr.nu_last * fr.nu_last * dF.dot(dla) + dF(n) * dla(n);
    }
    case LaplacianMethod::divergence: {
      // (1/v) div( A grad F ), A = v I - grad u grad u^T / v.
      const UJet j = F.jet(x, 2);
      const Vec& g = fr.u.grad;
      const Mat& Hu = fr.u.hess;
      const Mat A = fr.v * Mat::Identity(n, n) - (g * g.transpose()) / fr.v;
      const Vec divA = fr.dv - (Hu.trace() * g + Hu * g) / fr.v +
                       (g.dot(fr.dv) / (fr.v * fr.v)) * g;
      return (divA.dot(j.grad) + (A.array() * j.hess.array()).sum()) / fr.v;
    }
  }
  throw argument_error("surface_laplacian: unknown method");
}

double radial_surface_laplacian(const GraphSurface& S, const Vec& x,
                                const std::function<double(double)>& dphi,
                                const std::function<double(double)>& d2phi) {
  const Frame fr = make_frame(S, x);
  const double t = xrho_dot_nu(fr);
  const double k = fr.xrho2 - t * t;  // |delta rho|^2
  const double na = fr.P.n + fr.P.alpha;
  const double q = q_sigma(S, x, QVariant::compact);
  return (d2phi(fr.rho) + dphi(fr.rho) * (na - 1.0) / fr.rho) * k + q * dphi(fr.rho);
}

double q_sigma(const GraphSurface& S, const Vec& x, QVariant variant) {
  const Frame fr = make_frame(S, x);
  const Params& P = fr.P;
  const int n = P.n;
  const double t = xrho_dot_nu(fr);
  if (variant == QVariant::compact) {
    return t * ((n + 3.0 * P.alpha) * t / fr.rho - 2.0 * P.alpha * x.dot(fr.nu_bar) / fr.s2 +
                n * fr.H);
  }
  // Expanded form: assembled from the certified X-Hessian quadratic form and
  // the tangential log-weight terms.
  const GaugeDerivs gd = gauge_derivatives(P, Point{x, fr.u.value});
  const Vec nu = fr.nu();
  const double quad = nu.dot(gd.xhess * nu);
  const Vec drho = delta_rho(fr);
  const double k = fr.xrho2 - t * t;
  const Vec dls = delta_of_scalar(fr, x / fr.s2);  // delta log |x|
  const double na = n + P.alpha;
  return -(na - 1.0) / fr.rho * k + na * fr.xrho2 / fr.rho - quad + n * fr.H * t +
         P.alpha * fr.nu_last * fr.nu_last * drho.dot(dls) + P.alpha * drho(n) * dls(n);
}

}  // namespace grushin
