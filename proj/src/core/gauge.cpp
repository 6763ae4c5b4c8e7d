#include "core/gauge.hpp"

#include <vector>

namespace grushin {

namespace {
constexpr double kOriginScale = 1e-300;
}

bool is_origin(const Point& p) {
  return p.x.lpNorm<Eigen::Infinity>() < kOriginScale && std::abs(p.y) < kOriginScale;
}

double rho(const Params& P, const Point& p) {
  check_dim(P, p.x, "rho");
  const double beta = P.alpha + 1.0;
  const double s2 = p.x.squaredNorm();
  // |x|^{2 beta} + beta^2 y^2, then the 1/(2 beta) root.
  const double w = std::pow(s2, beta) + beta * beta * p.y * p.y;
  return std::pow(w, 0.5 / beta);
}

Point dilate(const Params& P, const Point& p, double lambda) {
  check_dim(P, p.x, "dilate");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw argument_error("dilate: lambda must be finite and > 0");
  return {lambda * p.x, std::pow(lambda, P.alpha + 1.0) * p.y};
}

double fundamental_solution(const Params& P, const Point& p) {
  const double r = rho(P, p);
  if (is_origin(p)) throw domain_error("fundamental_solution: degenerate at the origin");
  return std::pow(r, 1.0 - P.n - P.alpha);
}

AmbientJet rho_jet(const Params& P, const Point& p) {
  check_dim(P, p.x, "rho_jet");
  if (is_origin(p)) throw domain_error("rho_jet: derivative quantities rejected at the origin");
  const int n = P.n;
  const double beta = P.alpha + 1.0;
  const double s2 = p.x.squaredNorm();
  const double s2a = std::pow(s2, P.alpha);  // |x|^{2 alpha}; 0 at x = 0
  const double r = rho(P, p);

  AmbientJet j;
  j.value = r;
  j.grad = Vec::Zero(n + 1);
  j.hess = Mat::Zero(n + 1, n + 1);

  // First derivatives:
  //   d_i rho = x_i |x|^{2a} rho^{-(2a+1)},     d_y rho = beta y rho^{-(2a+1)}.
  const double rm = std::pow(r, -(2.0 * P.alpha + 1.0));
  for (int i = 0; i < n; ++i) j.grad(i) = p.x(i) * s2a * rm;
  j.grad(n) = beta * p.y * rm;

  // Second derivatives. With q = |x|^{2 beta} / rho^{2 beta} (in [0,1]):
  //   d_i d_j rho = |x|^{2a} rho^{-(2a+1)} [ delta_ij + 2a x_i x_j / |x|^2
  //                                          - (2a+1) q x_i x_j / |x|^2 ]
  //   d_y d_i rho = -(2a+1) beta x_i y |x|^{2a} rho^{-(4a+3)}
  //   d_y d_y rho = beta rho^{-(2a+1)} [ 1 - (2a+1) beta y^2 / rho^{2 beta} ]
  const double c1 = 2.0 * P.alpha + 1.0;
  const double rm2 = std::pow(r, -2.0 * beta);  // rho^{-(2a+2)}
  const double q = s2 > 0.0 ? std::pow(s2, beta) * rm2 : 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      double t = (i == k) ? 1.0 : 0.0;
      if (s2 > 0.0) t += (2.0 * P.alpha - c1 * q) * p.x(i) * p.x(k) / s2;
      j.hess(i, k) = s2a * rm * t;
    }
    const double mixed = -c1 * beta * p.x(i) * p.y * s2a * rm * rm2;
    j.hess(i, n) = mixed;
    j.hess(n, i) = mixed;
  }
  j.hess(n, n) = beta * rm * (1.0 - c1 * beta * p.y * p.y * rm2);
  return j;
}

GaugeDerivs gauge_derivatives(const Params& P, const Point& p) {
  const AmbientJet j = rho_jet(P, p);
  const int n = P.n;
  const double s2 = p.x.squaredNorm();
  const double a = std::pow(s2, 0.5 * P.alpha);
  const double r = j.value;

  GaugeDerivs d;
  d.xgrad = Vec::Zero(n + 1);
  d.xhess = Mat::Zero(n + 1, n + 1);
  d.xgrad.head(n) = j.grad.head(n);
  d.xgrad(n) = a * j.grad(n);
  d.xgrad_norm2 = std::pow(s2, P.alpha) * std::pow(r, -2.0 * P.alpha);

  // X_i X_j = d_i d_j on the horizontal block.
  d.xhess.topLeftCorner(n, n) = j.hess.topLeftCorner(n, n);
  // X_i X_{n+1} rho = d_i(a d_y rho) = (d_i a) d_y rho + a d_i d_y rho, and
  // X_{n+1} X_j rho = a d_y d_j rho; the fields do not commute, so the two
  // mixed entries differ (their gap is the commutator alpha x_i |x|^{a-2} d_y).
  for (int i = 0; i < n; ++i) {
    const double da_i = s2 > 0.0 ? P.alpha * p.x(i) * std::pow(s2, 0.5 * P.alpha - 1.0) : 0.0;
    d.xhess(i, n) = da_i * j.grad(n) + a * j.hess(i, n);
    d.xhess(n, i) = a * j.hess(n, i);
  }
  d.xhess(n, n) = a * a * j.hess(n, n);
  d.lrho = d.xhess.trace();
  return d;
}

double grushin_operator(const Params& P, const AmbientJet& j, const Vec& x) {
  check_dim(P, x, "grushin_operator");
  const double s2a = std::pow(x.squaredNorm(), P.alpha);
  return j.hess.topLeftCorner(P.n, P.n).trace() + s2a * j.hess(P.n, P.n);
}

double grushin_operator(const Params& P, const AmbientField& f, const Point& p) {
  return grushin_operator(P, f.jet(p), p.x);
}

AmbientField AmbientField::rho(const Params& P) {
  return AmbientField([P](const Point& p) { return rho_jet(P, p); });
}

AmbientField AmbientField::radial(const Params& P, std::function<double(double)> phi,
                                  std::function<double(double)> dphi,
                                  std::function<double(double)> d2phi) {
  return AmbientField([P, phi = std::move(phi), dphi = std::move(dphi),
                       d2phi = std::move(d2phi)](const Point& p) {
    const AmbientJet r = rho_jet(P, p);
    AmbientJet out;
    const double f = phi(r.value), fp = dphi(r.value), fpp = d2phi(r.value);
    out.value = f;
    out.grad = fp * r.grad;
    out.hess = fp * r.hess + fpp * (r.grad * r.grad.transpose());
    return out;
  });
}

AmbientField AmbientField::fundamental_solution(const Params& P) {
  const double e = 1.0 - P.n - P.alpha;
  return radial(
      P, [e](double t) { return std::pow(t, e); },
      [e](double t) { return e * std::pow(t, e - 1.0); },
      [e](double t) { return e * (e - 1.0) * std::pow(t, e - 2.0); });
}

AmbientField AmbientField::from_callable(const Params& P,
                                         std::function<Jet2(const std::vector<Jet2>&)> f) {
  const int m = P.n + 1;
  return AmbientField([m, f = std::move(f)](const Point& p) {
    std::vector<Jet2> vars;
    vars.reserve(m);
    for (int i = 0; i < m - 1; ++i) vars.push_back(Jet2::variable(p.x(i), i, m));
    vars.push_back(Jet2::variable(p.y, m - 1, m));
    const Jet2 r = f(vars);
    return AmbientJet{r.v, r.g, r.h};
  });
}

}  // namespace grushin
