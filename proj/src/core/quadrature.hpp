#pragma once

#include "core/cubature.hpp"
#include "core/field.hpp"
#include "core/tangential.hpp"

#include <string>
#include <vector>

namespace grushin {

// Integration over gauge-ball sections of a graph surface, the constant
// profile c(r), mean values, and the equal/sub/super verdicts. Every surface
// measure here is d sigma = v dx in graph coordinates, and gauge balls enter
// through the section {x : rho(x, u(x)) < r}, which always sits inside the
// Euclidean ball |x| < r.

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  std::size_t max_evals = 20'000'000;
  int workers = 1;
};

struct BallIntegral {
  double value = 0.0;
  double error = 0.0;
  std::size_t evals = 0;
  bool converged = true;
};

// Throws domain_error when the closed ball of radius r is not inside the
// surface domain, or the section does not contain the origin.
void validate_radius(const GraphSurface& S, double r);

// integral of g dsigma over {rho(x,u(x)) < r}
BallIntegral integrate_ball(const GraphSurface& S, const SurfaceField& g, double r,
                            const QuadratureOptions& opt = {});

// One radius of the profile machinery: c(r) = r^{-(n+alpha)} * kernel mass,
// plus (optionally) the f-weighted kernel integral used by mean values.
// Both come from one shared adaptive pass.
struct RadiusSample {
  double r = 0.0;
  double c = 0.0;        // c(r)
  double c_err = 0.0;
  double If = 0.0;       // integral of f |delta rho|^2 dsigma
  double If_err = 0.0;
  std::size_t evals = 0;
  bool converged = true;
};

RadiusSample profile_sample(const GraphSurface& S, const SurfaceField* f, double r,
                            const QuadratureOptions& opt = {});

struct ProfileResult {
  std::vector<RadiusSample> samples;   // in increasing r order
  double c_rmin = 0.0;
  double c_extrapolated = 0.0;         // limit estimate from the 3 smallest radii
  bool extrapolation_valid = false;    // geometric sub-grid and sane denominator
  bool used_extrapolation = false;     // c_extrapolated backs C
  double C = 0.0;                      // 1 / (limit surrogate)
  bool is_constant = false;            // relative spread of c over the grid <= 10 tol
  double spread = 0.0;                 // (max c - min c) / mean c
};

// r_grid must be strictly increasing and every radius admissible.
ProfileResult constant_profile(const GraphSurface& S, const std::vector<double>& r_grid,
                               const QuadratureOptions& opt = {});

// M(f, r) = C r^{-(n+alpha)} * integral of f |delta rho|^2 dsigma.
double mean_value(const GraphSurface& S, const SurfaceField& f, double r, double C,
                  const QuadratureOptions& opt = {}, RadiusSample* diag = nullptr);

enum class MVFMode { harmonic, subharmonic, superharmonic };
enum class MVFVerdict { equal, sub, super };

std::string to_string(MVFMode m);
std::string to_string(MVFVerdict v);

struct MVFRow {
  double r = 0.0;
  double c = 0.0;        // c(r), carried for reporting
  double M = 0.0;        // M(f, r)
  double err = 0.0;      // quadrature error estimate on M
  MVFVerdict verdict = MVFVerdict::equal;
  bool pass = false;     // verdict consistent with the requested mode
};

struct MeanValueReport {
  std::vector<MVFRow> rows;
  double f0 = 0.0;       // f at the origin
  double C = 0.0;
  double scale = 0.0;    // 1 + max |f| over the largest ball
  double tol = 0.0;      // verdict tolerance; band = tol * scale
  MVFMode mode = MVFMode::harmonic;
  ProfileResult profile;
  bool all_pass = false;
};

// Runs the profile over r_grid, forms C, evaluates M(f, r) per radius and
// classifies f(0) against M(f, r) within the band tol * (1 + max|f|):
//   equal inside the band, sub when f(0) < M - band, super when f(0) > M + band.
// harmonic mode passes on `equal`, subharmonic on {equal, sub},
// superharmonic on {equal, super}.
MeanValueReport check_mvf(const GraphSurface& S, const SurfaceField& f,
                          const std::vector<double>& r_grid, MVFMode mode, double tol,
                          const QuadratureOptions& opt = {});

}  // namespace grushin
