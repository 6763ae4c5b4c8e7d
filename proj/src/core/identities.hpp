#pragma once

#include "core/tangential.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace grushin {

// Pointwise certification of the differential identities tying together the
// gauge closed forms, the tangential operators and the structural function.
// Each identity compares two independently computed routes at random sample
// points; the reported figure is max over samples of
//   |lhs - rhs| / (1 + max(|lhs|, |rhs|)),
// i.e. a relative error with an absolute floor of 1 near zero.

struct IdentityResult {
  std::string name;
  double max_err = 0.0;
  int samples = 0;
};

struct IdentityOptions {
  int points = 120;                  // sample points inside the annulus
  std::uint64_t seed = 0x5eed5eedULL;
  double rmin = 0.1;                 // Euclidean |x| sampling annulus
  double rmax = 1.0;
};

// Names, in order:
//   gauge-gradient-ad, gauge-hessian-ad, xgrad-norm, gauge-operator-radial,
//   xhessian-ad, normal-unit, area-element, tangential-projection,
//   kernel-fastpath, normal-divergence, surface-vs-tangential,
//   ambient-restriction, three-way-surface-operator, radial-surface-operator,
//   q-forms, xrho-factorization
std::vector<IdentityResult> run_identities(const GraphSurface& S,
                                           const IdentityOptions& opt = {});

}  // namespace grushin
