#pragma once

#include <functional>

#include "core/jet.hpp"
#include "core/params.hpp"

namespace grushin {

// Gauge geometry of the ambient space: the homogeneous norm
//   rho(x, y) = ( |x|^{2(alpha+1)} + (alpha+1)^2 y^2 )^{1 / (2(alpha+1))},
// its coordinate and X-derivatives in closed form, the anisotropic dilations
// d_lambda(x, y) = (lambda x, lambda^{alpha+1} y), the second-order operator
//   L f = Delta_x f + |x|^{2 alpha} d^2_y f,
// and the power rho^{1-n-alpha} spanning its radial kernel away from 0.

// Value/gradient/Hessian of a scalar function of (x, y) in coordinates;
// grad and hess have size n+1 with the y-slot last.
struct AmbientJet {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

// True degenerate origin (both |x| and |y| at the 1e-300 scale); derivative
// quantities of rho are rejected there.
bool is_origin(const Point& p);

double rho(const Params& P, const Point& p);

Point dilate(const Params& P, const Point& p, double lambda);

// rho^{1 - n - alpha}; rejects the origin (the power is singular there).
double fundamental_solution(const Params& P, const Point& p);

// Closed-form coordinate jet of rho at p != origin.
AmbientJet rho_jet(const Params& P, const Point& p);

// X-frame derivatives of rho. The X-Hessian (X_i X_j rho) is NOT symmetric in
// the mixed entries because X_i and X_{n+1} do not commute; both orderings are
// stored. lrho = L rho = trace of the X-Hessian.
struct GaugeDerivs {
  Vec xgrad;       // (X_1 rho, ..., X_{n+1} rho)
  Mat xhess;       // (i, j) = X_i X_j rho
  double lrho = 0.0;
  double xgrad_norm2 = 0.0;  // |X rho|^2 = |x|^{2 alpha} rho^{-2 alpha}
};
GaugeDerivs gauge_derivatives(const Params& P, const Point& p);

// L applied to a coordinate jet at x: Delta_x + |x|^{2 alpha} d^2_y.
double grushin_operator(const Params& P, const AmbientJet& j, const Vec& x);

// Scalar fields on the ambient space with exact coordinate jets.
class AmbientField {
 public:
  using JetFn = std::function<AmbientJet(const Point&)>;

  AmbientField() = default;
  explicit AmbientField(JetFn f) : f_(std::move(f)) {}

  AmbientJet jet(const Point& p) const { return f_(p); }
  double value(const Point& p) const { return f_(p).value; }
  bool valid() const { return static_cast<bool>(f_); }

  // rho itself as an ambient field (closed-form jets).
  static AmbientField rho(const Params& P);
  // phi(rho) for a C^2 profile given with its two derivatives.
  static AmbientField radial(const Params& P, std::function<double(double)> phi,
                             std::function<double(double)> dphi,
                             std::function<double(double)> d2phi);
  // rho^{1-n-alpha} with exact jets; L-harmonic away from the origin.
  static AmbientField fundamental_solution(const Params& P);
  // Differentiates an arbitrary callable expressed in Jet2 arithmetic over the
  // n+1 seed variables (x_1..x_n, y).
  static AmbientField from_callable(const Params& P, std::function<Jet2(const std::vector<Jet2>&)> f);

 private:
  JetFn f_;
};

double grushin_operator(const Params& P, const AmbientField& f, const Point& p);

}  // namespace grushin
