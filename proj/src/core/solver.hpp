#pragma once

#include "core/field.hpp"

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

namespace grushin {

// Dirichlet problems for the surface operator on an n = 2 patch, in the
// graph-coordinate divergence form
//   div( A grad F ) = 0,   A(x) = v I - grad u grad u^T / v,
// which is the v-weighted surface operator (eigenvalues of A are {v, a^2/v},
// positive away from x = 0). Discretization: conservative face fluxes with
// coefficients at face midpoints (so the single degenerate point x = 0, which
// is a vertex, is never sampled), cross terms per lattice cell from the
// symmetric 4-point gradient average, assembled as an energy form -- the
// reduced system is symmetric by construction. Curved boundaries are masked
// on the lattice; the Dirichlet value rides on the exact crossing point of
// each cut lattice arm (arm of length theta h gets flux weight A/theta).

struct BoxMask {
  Vec lo, hi;
};
struct DiskMask {
  double R = 1.0;
};
struct AnnulusMask {
  double R0 = 0.2, R1 = 1.0;
};
using SolveMask = std::variant<BoxMask, DiskMask, AnnulusMask>;

using BoundaryFn = std::function<double(const Vec&)>;

struct SolveOptions {
  double residual_tol = 1e-10;  // relative linear-system residual demanded
};

struct SolveSolution {
  Vec lo;                            // lower-left vertex
  double h = 0.0;
  int nx = 0, ny = 0;                // vertices per axis
  std::vector<double> F;             // i + nx*j; zero on inactive nodes
  std::vector<std::uint8_t> active;  // node carries a value (unknown or data)
  double residual = 0.0;             // achieved relative residual
  int unknowns = 0;

  bool is_active(int i, int j) const { return active[static_cast<std::size_t>(j) * nx + i] != 0; }
  double value(int i, int j) const { return F[static_cast<std::size_t>(j) * nx + i]; }
  Vec node(int i, int j) const {
    Vec p(2);
    p << lo(0) + h * i, lo(1) + h * j;
    return p;
  }

  // C^1 bicubic interpolant with analytic derivatives, as a surface field.
  // Throws domain_error where its 4x4 node stencil leaves the active set.
  SurfaceField interpolant() const;
};

// cells = lattice cells per axis over the mask's bounding box (square).
SolveSolution solve_dirichlet(const GraphSurface& S, const SolveMask& mask, int cells,
                              const BoundaryFn& g, const SolveOptions& opt = {});

// max |L_S F| of the interpolant over active cell centers at least `margin`
// (a physical distance, floored at two lattice steps so the 4x4 stencil stays
// active) away from the inactive set and from the origin. Cell centers are
// where the interpolant's second derivatives carry no leading-order
// interpolation bias, so at fixed margin this decays at the scheme's rate;
// shrinking the margin with h instead would chase the cut-cell collar, whose
// pointwise operator residual does not vanish under refinement.
double residual_check(const GraphSurface& S, const SolveSolution& sol, double margin = 0.1,
                      int max_samples = 4000);

}  // namespace grushin
