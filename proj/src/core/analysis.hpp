#pragma once

#include "core/surface.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace grushin {

// Sign analysis of the structural function q_Sigma, the eta-flatness gauge of
// a graph, the growth envelope it implies, and the two-condition certificate
// that predicts q_Sigma >= 0 near the origin for nearly-dilation-invariant
// graphs. Everything here samples exact pointwise quantities; classifications
// are supported by evidence, not proved.

inline constexpr std::uint64_t kAnalysisSeed = 0x5eed5eedULL;

struct SampleSpec {
  std::vector<double> radii;  // strictly positive, inside the surface domain
  int directions = 32;        // per radius
  std::uint64_t seed = kAnalysisSeed;
};

// rmax, rmax/2, ..., rmax 2^{-(count-1)}
std::vector<double> dyadic_radii(double rmax, int count);

enum class QSign { harmonic, subharmonic, superharmonic, indefinite };
const char* to_string(QSign s);

struct HarmonicityVerdict {
  QSign classification = QSign::indefinite;
  double q_min = 0.0, q_max = 0.0;
  double r_at_min = 0.0, r_at_max = 0.0;  // radii where the extremes occurred
  int samples = 0;
  double tol = 0.0;
};

// Evaluates q_Sigma on radii x directions; harmonic iff max|q| <= tol,
// subharmonic iff min >= -tol with max > tol, superharmonic mirrored,
// indefinite otherwise.
HarmonicityVerdict classify_harmonicity(const GraphSurface& S, const SampleSpec& spec,
                                        double tol = 1e-8);

// sup over samples of (alpha+1)|u| / |<x, grad u>|. Convention: 0/0 -> 0
// (both sides vanish on the same radial zero sets); u != 0 with vanishing
// denominator -> +infinity (no finite flatness modulus exists).
double eta_flatness(const GraphSurface& S, const SampleSpec& spec);

struct GrowthCheck {
  bool ok = false;
  double worst_ratio = 0.0;  // max of |u(x)| / (M |x|^{(alpha+1)/eta}), M = max_{|x|=1}|u|
  double sphere_max = 0.0;   // M
};

// Verifies |u(x)| <= M |x|^{(alpha+1)/eta} on samples with |x| <= 1.
// Requires the domain to contain the closed unit ball.
GrowthCheck growth_envelope_check(const GraphSurface& S, double eta, int samples,
                                  std::uint64_t seed = kAnalysisSeed, double slack_tol = 1e-9);

struct CertificateOptions {
  int kmax = 8;          // dyadic radii 2^0 .. 2^{-kmax} (scaled into the domain)
  int directions = 64;   // per radius
  double q_tol = 1e-8;   // spot-verification tolerance on min q_Sigma
  std::uint64_t seed = kAnalysisSeed;
};

struct FlatnessCertificate {
  double eta_hat = 0.0;
  double eta_bound = 0.0;  // (n+alpha)/(n+3alpha)
  bool condition_i = false;
  std::vector<double> radii;          // dyadic sweep, largest first
  std::vector<double> ratio_samples;  // signed |x|^2 H / <nu_bar, x>, worst per radius
  bool condition_ii = false;          // |ratio| decays over the last three radii to <= tol
  bool overall = false;               // condition_i && condition_ii
  double tol = 0.0;
  // spot verification of the predicted sign of q_Sigma (only when overall)
  bool spot_checked = false;
  double q_min_spot = 0.0;
  bool spot_ok = true;
};

// Condition (i): eta_hat < (n+alpha)/(n+3alpha) on a shrinking-ball sweep.
// Condition (ii): |x|^2 H / <nu_bar, x> tends to 0 along dyadic radii
// (accepted when the last three magnitudes decrease and the final one is
// <= tol). When both hold, min q_Sigma >= -q_tol is spot-verified near 0.
FlatnessCertificate subharmonicity_certificate(const GraphSurface& S, double tol = 1e-3,
                                               const CertificateOptions& opt = {});

struct CertificateSearchHit {
  std::string spec;  // canonical surface name
  FlatnessCertificate cert;
};

// Best-effort random-coefficient search for non-flat surfaces passing the
// certificate. Coming back empty is expected, not an error.
std::vector<CertificateSearchHit> search_subharmonic_surfaces(const Params& P, int trials,
                                                              std::uint64_t seed = kAnalysisSeed,
                                                              double tol = 1e-3);

}  // namespace grushin
