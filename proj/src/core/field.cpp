#include "core/field.hpp"

namespace grushin {

double graph_gauge(const GraphSurface& S, const Vec& x) {
  return rho(S.params(), Point{x, S.u(x)});
}

UJet graph_gauge_jet(const GraphSurface& S, const Vec& x, int order) {
  const Params& P = S.params();
  const int n = P.n;
  const UJet uj = S.u_jet(x, order);
  const Point p{x, uj.value};
  UJet out;
  if (order == 0) {
    out.value = rho(P, p);
    return out;
  }
  const AmbientJet rj = rho_jet(P, p);  // rejects the surface origin
  out.value = rj.value;
  const Vec rx = rj.grad.head(n);
  const double ry = rj.grad(n);
  out.grad = rx + ry * uj.grad;
  if (order >= 2) {
    const Vec rxy = rj.hess.col(n).head(n);
    out.hess = rj.hess.topLeftCorner(n, n) + rxy * uj.grad.transpose() +
               uj.grad * rxy.transpose() + rj.hess(n, n) * (uj.grad * uj.grad.transpose()) +
               ry * uj.hess;
  }
  return out;
}

namespace {

// phi(R(x)) jets from a profile and the graph gauge jet.
void profile_jet(const GraphSurface& S, const Vec& x, int order, UJet& out, double phi, double dphi,
                 double d2phi, const UJet& R) {
  out.value = phi;
  if (order >= 1) out.grad = dphi * R.grad;
  if (order >= 2) out.hess = dphi * R.hess + d2phi * (R.grad * R.grad.transpose());
  (void)S;
  (void)x;
}

}  // namespace

SurfaceField SurfaceField::constant(int n, double c) {
  return SurfaceField([n, c](const Vec&, int order, UJet& j) {
    j.value = c;
    if (order >= 1) j.grad = Vec::Zero(n);
    if (order >= 2) j.hess = Mat::Zero(n, n);
  });
}

SurfaceField SurfaceField::polynomial(int n, std::vector<MonomialTerm> terms) {
  for (const auto& t : terms)
    if (static_cast<int>(t.exponents.size()) != n)
      throw argument_error("SurfaceField::polynomial: exponent tuple size must equal n");
  return SurfaceField(
      [terms = std::move(terms)](const Vec& x, int order, UJet& j) { monomial_jet(terms, x, order, j); });
}

SurfaceField SurfaceField::rho_power(const GraphSurface& S, double k) {
  if (!(k >= 1.0)) throw argument_error("rho_power: need k >= 1");
  return SurfaceField([S, k](const Vec& x, int order, UJet& j) {
    if (order == 0) {
      j.value = std::pow(graph_gauge(S, x), k);
      return;
    }
    const UJet R = graph_gauge_jet(S, x, order);
    const double t = R.value;
    profile_jet(S, x, order, j, std::pow(t, k), k * std::pow(t, k - 1.0),
                k * (k - 1.0) * std::pow(t, k - 2.0), R);
  });
}

SurfaceField SurfaceField::radial_profile(const GraphSurface& S, std::function<double(double)> phi,
                                          std::function<double(double)> dphi,
                                          std::function<double(double)> d2phi) {
  return SurfaceField([S, phi = std::move(phi), dphi = std::move(dphi),
                       d2phi = std::move(d2phi)](const Vec& x, int order, UJet& j) {
    if (order == 0) {
      j.value = phi(graph_gauge(S, x));
      return;
    }
    const UJet R = graph_gauge_jet(S, x, order);
    profile_jet(S, x, order, j, phi(R.value), dphi(R.value), d2phi(R.value), R);
  });
}

SurfaceField SurfaceField::bump(Vec center, double radius) {
  if (!(radius > 0.0)) throw argument_error("bump: radius must be > 0");
  const int n = static_cast<int>(center.size());
  return SurfaceField([n, center = std::move(center), radius](const Vec& x, int order, UJet& j) {
    const double t = (x - center).squaredNorm() / (radius * radius);
    if (t >= 1.0 - 1e-12) {  // outside (or so flat that exp underflows to 0 anyway)
      j.value = 0.0;
      if (order >= 1) j.grad = Vec::Zero(n);
      if (order >= 2) j.hess = Mat::Zero(n, n);
      return;
    }
    // exp(1 - 1/(1-t)), t = |x-c|^2 / r^2, in Jet2 arithmetic.
    Jet2 tj = Jet2::constant(0.0, n);
    for (int i = 0; i < n; ++i) {
      const Jet2 d = Jet2::variable(x(i), i, n) - center(i);
      tj = tj + d * d;
    }
    tj = tj * (1.0 / (radius * radius));
    const Jet2 r = exp(1.0 - inverse(1.0 - tj));
    j.value = r.v;
    if (order >= 1) j.grad = r.g;
    if (order >= 2) j.hess = r.h;
  });
}

SurfaceField SurfaceField::restrict_ambient(const GraphSurface& S, AmbientField f) {
  return SurfaceField([S, f = std::move(f)](const Vec& x, int order, UJet& j) {
    const int n = S.params().n;
    const UJet uj = S.u_jet(x, order);
    const AmbientJet aj = f.jet(Point{x, uj.value});
    j.value = aj.value;
    if (order >= 1) j.grad = aj.grad.head(n) + aj.grad(n) * uj.grad;
    if (order >= 2) {
      const Vec fxy = aj.hess.col(n).head(n);
      j.hess = aj.hess.topLeftCorner(n, n) + fxy * uj.grad.transpose() + uj.grad * fxy.transpose() +
               aj.hess(n, n) * (uj.grad * uj.grad.transpose()) + aj.grad(n) * uj.hess;
    }
  });
}

SurfaceField SurfaceField::from_callable(int n, std::function<Jet2(const std::vector<Jet2>&)> f) {
  return SurfaceField([n, f = std::move(f)](const Vec& x, int order, UJet& j) {
    std::vector<Jet2> vars;
    vars.reserve(n);
    for (int i = 0; i < n; ++i) vars.push_back(Jet2::variable(x(i), i, n));
    const Jet2 r = f(vars);
    j.value = r.v;
    if (order >= 1) j.grad = r.g;
    if (order >= 2) j.hess = r.h;
  });
}

SurfaceField operator+(const SurfaceField& a, const SurfaceField& b) {
  return SurfaceField([a, b](const Vec& x, int order, UJet& j) {
    j = a.jet(x, order);
    const UJet jb = b.jet(x, order);
    j.value += jb.value;
    if (order >= 1) j.grad += jb.grad;
    if (order >= 2) j.hess += jb.hess;
  });
}

SurfaceField operator*(double c, const SurfaceField& a) {
  return SurfaceField([c, a](const Vec& x, int order, UJet& j) {
    j = a.jet(x, order);
    j.value *= c;
    if (order >= 1) j.grad *= c;
    if (order >= 2) j.hess *= c;
  });
}

}  // namespace grushin
