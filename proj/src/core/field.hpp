#pragma once

#include <functional>
#include <memory>

#include "core/surface.hpp"

namespace grushin {

// Scalar fields on a graph surface, represented as functions of the base
// variable x with exact jets (value, gradient, Hessian). Tangential operators
// consume these jets directly; nothing is differenced numerically.
class SurfaceField {
 public:
  using JetFn = std::function<void(const Vec&, int, UJet&)>;

  SurfaceField() = default;
  explicit SurfaceField(JetFn f) : f_(std::make_shared<JetFn>(std::move(f))) {}

  bool valid() const { return static_cast<bool>(f_); }
  UJet jet(const Vec& x, int order = 2) const {
    UJet j;
    (*f_)(x, order, j);
    return j;
  }
  double value(const Vec& x) const {
    UJet j;
    (*f_)(x, 0, j);
    return j.value;
  }

  static SurfaceField constant(int n, double c);
  static SurfaceField polynomial(int n, std::vector<MonomialTerm> terms);
  // rho(x, u(x))^k on the surface (k >= 1).
  static SurfaceField rho_power(const GraphSurface& S, double k);
  // phi(rho(x, u(x))) for a C^2 profile.
  static SurfaceField radial_profile(const GraphSurface& S, std::function<double(double)> phi,
                                     std::function<double(double)> dphi,
                                     std::function<double(double)> d2phi);
  // Smooth bump supported in |x - center| < radius, equal to 1 at the center.
  static SurfaceField bump(Vec center, double radius);
  // Restriction of an ambient field to the graph: x -> f(x, u(x)).
  static SurfaceField restrict_ambient(const GraphSurface& S, AmbientField f);
  // Arbitrary callable in Jet2 arithmetic over the n base variables.
  static SurfaceField from_callable(int n, std::function<Jet2(const std::vector<Jet2>&)> f);

 private:
  std::shared_ptr<JetFn> f_;
};

SurfaceField operator+(const SurfaceField& a, const SurfaceField& b);
SurfaceField operator*(double c, const SurfaceField& a);

// Jet of R(x) = rho(x, u(x)); rejects points where R = 0 (the surface origin).
UJet graph_gauge_jet(const GraphSurface& S, const Vec& x, int order = 2);
// Plain value R(x) = rho(x, u(x)) (defined everywhere).
double graph_gauge(const GraphSurface& S, const Vec& x);

}  // namespace grushin
