#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "core/gauge.hpp"
#include "core/jet.hpp"
#include "core/params.hpp"

namespace grushin {

// Graph hypersurfaces Sigma = {(x, u(x)) : x in Omega} with exact derivative
// data for u up to order two. On such a graph the weight a = |x|^alpha, the
// sigma-area element v = sqrt(|grad u|^2 + a^2), the (alpha-)normal
//   nu = (-grad u, a) / v,
// and the alpha-mean curvature H = (1/n) div(grad u / v) drive everything in
// the tangential calculus.

struct BallDomain {
  double R = 1.0;
};
struct BoxDomain {
  Vec lo, hi;
};
using Domain = std::variant<BallDomain, BoxDomain>;

bool domain_contains(const Domain& d, const Vec& x);
// Smallest axis-aligned box covering the domain.
void domain_bounds(const Domain& d, int n, Vec& lo, Vec& hi);
// True when the Euclidean ball of radius r about 0 lies inside the domain.
bool domain_contains_ball(const Domain& d, int n, double r);

// Surface catalog specs.
struct FlatSpec {};
struct RadialPowerSpec {
  double c = 0.0;
  double m = 2.0;  // u = c |x|^m
};
struct MonomialTerm {
  std::vector<int> exponents;  // one entry per x-coordinate
  double coeff = 0.0;
};
struct MonomialSpec {
  std::vector<MonomialTerm> terms;  // u = sum coeff * x^exponents
};
struct CustomSpec {
  // Callable in Jet2 arithmetic over the n seed variables; differentiated
  // exactly, never by finite differences.
  std::function<Jet2(const std::vector<Jet2>&)> u;
  std::string label = "custom";
};
using SurfaceSpec = std::variant<FlatSpec, RadialPowerSpec, MonomialSpec, CustomSpec>;

// Jet of u at a point: filled up to the requested order (0, 1 or 2).
struct UJet {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

class GraphSurface {
 public:
  GraphSurface(Params P, SurfaceSpec spec, Domain domain);

  const Params& params() const { return P_; }
  const Domain& domain() const { return domain_; }
  // Canonical human-readable spec string (deterministic; used in reports).
  const std::string& name() const { return name_; }

  double u(const Vec& x) const;
  UJet u_jet(const Vec& x, int order = 2) const;

  bool in_domain(const Vec& x) const { return domain_contains(domain_, x); }

 private:
  Params P_;
  Domain domain_;
  std::string name_;
  std::function<void(const Vec&, int, UJet&)> eval_;
};

// Evaluate a sum of monomials with exact derivatives up to `order`.
void monomial_jet(const std::vector<MonomialTerm>& terms, const Vec& x, int order, UJet& j);

// Parse "flat", "radial-power:c=0.3,m=2", "monomial:1,1=1;2,0=0.5".
SurfaceSpec parse_surface_spec(const std::string& s);
std::string spec_name(const SurfaceSpec& spec);

GraphSurface make_surface(const Params& P, const SurfaceSpec& spec, const Domain& domain);

// --- pointwise geometry -----------------------------------------------------

struct AlphaNormal {
  Vec nu_bar;      // horizontal components
  double nu_last;  // vertical component a / v (positive: upward orientation)
};

// sigma-area element v = sqrt(|grad u|^2 + |x|^{2 alpha}).
double area_element(const GraphSurface& S, const Vec& x);

// Unit alpha-normal; rejects points where v vanishes (x = 0 on surfaces with
// grad u(0) = 0, where the direction is not defined).
AlphaNormal alpha_normal(const GraphSurface& S, const Vec& x);

// alpha-mean curvature H = (1/n) div(grad u / v); needs x != 0.
double mean_curvature(const GraphSurface& S, const Vec& x);

// <grad u, x> - (alpha+1) u; identically zero iff the graph is invariant
// under the anisotropic dilations (Euler identity).
double euler_residual(const GraphSurface& S, const Vec& x);

}  // namespace grushin
