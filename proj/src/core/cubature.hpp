#pragma once

#include "core/params.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace grushin {

// Batched integrand: writes m components at x into out[0..m). Components are
// integrated together over a shared adaptive cell tree; the error control
// holds for every component.
using Integrand = std::function<void(const Vec& x, double* out)>;

// Implicit region: negative inside, positive outside. Assumed to have a
// smooth boundary resolved at the scale of the initial cell grid.
using LevelSet = std::function<double(const Vec& x)>;

struct CubatureOptions {
  double rel_tol = 1e-8;    // against the running L1 mass, per component
  double abs_tol = 1e-12;
  std::size_t max_evals = 20'000'000;  // integrand evaluation budget
  int max_depth = 42;
  int workers = 1;          // >1 evaluates split batches in worker threads;
                            // the reduction order is fixed, so results are
                            // reproducible bit-for-bit for a given setting
};

struct CubatureResult {
  std::vector<double> value;   // one entry per component
  std::vector<double> error;   // estimated, same layout
  std::size_t evals = 0;       // integrand evaluations
  std::size_t cells = 0;       // leaf cells in the final tree
  bool converged = false;      // error target met within budget
  double value1() const { return value.at(0); }
  double error1() const { return error.at(0); }
};

// Adaptive tensor-product cubature over a box. Embedded Gauss pair per cell,
// worst-cell-first refinement, deterministic pairwise reduction over the
// leaves. Cells never place nodes on cell corners, and the initial grid puts
// the origin on a corner, so integrands may be singular at x = 0.
CubatureResult integrate_box(int m, const Integrand& f, const Vec& lo, const Vec& hi,
                             const CubatureOptions& opt = {});

// Same engine over {x in box : g(x) < 0}. Cells straddling the zero set are
// integrated by slicing: Gauss nodes across the boundary-transverse
// directions, per-column crossing resolution by bisection, Gauss rule on the
// inside pieces. Columns meeting the boundary more than twice force a split.
CubatureResult integrate_region(int m, const Integrand& f, const LevelSet& g,
                                const Vec& lo, const Vec& hi,
                                const CubatureOptions& opt = {});

}  // namespace grushin
