#pragma once

#include "core/field.hpp"

namespace grushin {

// Tangential calculus on a graph surface. For a function phi and the unit
// alpha-normal nu, the tangential derivative is the projected X-gradient
//   delta_i phi = X_i phi - <X phi, nu> nu_i,   i = 0..n  (slot n vertical).
// The adjoint of delta_i in L^2(d sigma) is
//   delta_i^* psi = -delta_i psi - psi [ delta_i log|x|^alpha
//                   + (delta_n nu_i - delta_i nu_n) / nu_n + n H nu_i ],
// and the surface operators are
//   L_S F     = -sum_i delta_i^*(delta_i F)        (divergence form),
//   Delta_S F =  sum_i delta_i(delta_i F).
// The structural function q_S measures the defect of rho-radial functions:
//   L_S phi(rho) = { phi'' + phi' (n+alpha-1)/rho } |delta rho|^2 + q_S phi'.

// Per-point geometric frame: u-jet, weight, area element, normal and the
// first derivatives of the normal (exact, via first-order jet propagation of
// the closed forms). Rejected at x = 0 where the weight degenerates.
struct Frame {
  Params P;
  Vec x;
  UJet u;          // order 2
  double s2 = 0, a = 0, v = 0;
  Vec nu_bar;      // horizontal normal components
  double nu_last = 0;
  Vec da;          // grad of a = |x|^alpha
  Vec dv;          // grad of v
  Mat dnu_bar;     // (i, j) = d_j nu_bar_i
  Vec dnu_last;    // d_j nu_last
  double H = 0;    // alpha-mean curvature

  // Gauge data at the graph point (x, u(x)).
  double rho = 0;
  Vec xrho;        // X-gradient of rho, size n+1
  double xrho2 = 0;  // |X rho|^2
  AmbientJet rho_j;  // coordinate jet of rho at (x, u(x))

  Vec nu() const {
    Vec v2(P.n + 1);
    v2.head(P.n) = nu_bar;
    v2(P.n) = nu_last;
    return v2;
  }
};

Frame make_frame(const GraphSurface& S, const Vec& x);

enum class LaplacianMethod { adjoint, corrected, divergence };
enum class QVariant { compact, expanded };

// Projected X-gradient, size n+1.
Vec tangential_gradient(const GraphSurface& S, const SurfaceField& F, const Vec& x);
Vec tangential_gradient(const GraphSurface& S, const AmbientField& f, const Vec& x);
Vec tangential_gradient(const Frame& fr, const SurfaceField& F);
Vec tangential_gradient(const Frame& fr, const AmbientField& f);

// delta rho and the kernel |delta rho|^2 = |X rho|^2 - <X rho, nu>^2 (in [0,1]
// after division by |X rho|^2; equal to |X rho|^2 when the surface is
// rho-orthogonal). kernel() is the fast path used by the quadrature weights.
Vec delta_rho(const Frame& fr);
double xrho_dot_nu(const Frame& fr);
double kernel(const GraphSurface& S, const Vec& x);

// |delta rho|^2 and the area element v together, one u-jet evaluation; the
// inner loop of every surface integral.
void kernel_area(const GraphSurface& S, const Vec& x, double& k, double& v);

// Adjoint tangential operator applied to a field, slot i in [0, n].
double adjoint_tangential(const GraphSurface& S, const SurfaceField& psi, const Vec& x, int i);

// Nested tangential Laplacian Delta_S = sum_i delta_i delta_i.
double tangential_laplacian(const GraphSurface& S, const SurfaceField& F, const Vec& x);
double tangential_laplacian(const GraphSurface& S, const AmbientField& f, const Vec& x);

// Surface operator L_S by three independent routes (they agree on C^2 data):
//   adjoint    - nested  -sum delta_i^* delta_i  via first-order jets,
//   corrected  - Delta_S in closed form plus the weight-gradient corrections,
//   divergence - (1/v) div( (v I - grad u grad u^T / v) grad F ).
double surface_laplacian(const GraphSurface& S, const SurfaceField& F, const Vec& x,
                         LaplacianMethod method);

// L_S phi(rho) through the radial identity (profile derivatives supplied).
double radial_surface_laplacian(const GraphSurface& S, const Vec& x,
                                const std::function<double(double)>& dphi,
                                const std::function<double(double)>& d2phi);

// Structural function q_S; `compact` is the production form, `expanded` the
// independently derived long form used for cross-validation.
double q_sigma(const GraphSurface& S, const Vec& x, QVariant variant = QVariant::compact);

}  // namespace grushin
