#include "core/analysis.hpp"

#include "core/rng.hpp"
#include "core/tangential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace grushin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_samples(const GraphSurface& S, const SampleSpec& spec) {
  if (spec.radii.empty()) throw argument_error("sample spec needs at least one radius");
  if (spec.directions < 1) throw argument_error("sample spec needs at least one direction");
  for (const double r : spec.radii) {
    if (!(r > 0.0) || !std::isfinite(r)) throw argument_error("sample radii must be positive");
    if (!domain_contains_ball(S.domain(), S.params().n, r))
      throw argument_error("sample radius leaves the surface domain");
  }
}

// Signed ratio |x|^2 H / <nu_bar, x> with the 0/0 -> 0 convention.
double curvature_ratio(const GraphSurface& S, const Vec& x) {
  const double num = x.squaredNorm() * mean_curvature(S, x);
  const double den = alpha_normal(S, x).nu_bar.dot(x);
  if (den == 0.0) return num == 0.0 ? 0.0 : std::copysign(kInf, num);
  return num / den;
}

}  // namespace

std::vector<double> dyadic_radii(double rmax, int count) {
  if (!(rmax > 0.0) || count < 1) throw argument_error("dyadic_radii needs rmax > 0, count >= 1");
  std::vector<double> r(count);
  for (int k = 0; k < count; ++k) r[k] = rmax * std::ldexp(1.0, -k);
  return r;
}

const char* to_string(QSign s) {
  switch (s) {
    case QSign::harmonic: return "harmonic";
    case QSign::subharmonic: return "subharmonic";
    case QSign::superharmonic: return "superharmonic";
    default: return "indefinite";
  }
}

HarmonicityVerdict classify_harmonicity(const GraphSurface& S, const SampleSpec& spec, double tol) {
  validate_samples(S, spec);
  if (!(tol >= 0.0)) throw argument_error("classification tolerance must be >= 0");
  SampleRng rng(spec.seed);
  HarmonicityVerdict v;
  v.tol = tol;
  v.q_min = kInf;
  v.q_max = -kInf;
  for (const double r : spec.radii) {
    for (int d = 0; d < spec.directions; ++d) {
      const Vec x = r * rng.direction(S.params().n);
      const double q = q_sigma(S, x);
      if (q < v.q_min) {
        v.q_min = q;
        v.r_at_min = r;
      }
      if (q > v.q_max) {
        v.q_max = q;
        v.r_at_max = r;
      }
      ++v.samples;
    }
  }
  const bool lo = v.q_min >= -tol;  // never significantly negative
  const bool hi = v.q_max <= tol;   // never significantly positive
  if (lo && hi)
    v.classification = QSign::harmonic;
  else if (lo)
    v.classification = QSign::subharmonic;
  else if (hi)
    v.classification = QSign::superharmonic;
  else
    v.classification = QSign::indefinite;
  return v;
}

double eta_flatness(const GraphSurface& S, const SampleSpec& spec) {
  validate_samples(S, spec);
  SampleRng rng(spec.seed);
  const double beta = S.params().alpha + 1.0;
  double sup = 0.0;
  for (const double r : spec.radii) {
    for (int d = 0; d < spec.directions; ++d) {
      const Vec x = r * rng.direction(S.params().n);
      const UJet uj = S.u_jet(x, 1);
      const double num = beta * std::abs(uj.value);
      const double den = std::abs(x.dot(uj.grad));
      if (den == 0.0) {
        if (num != 0.0) return kInf;
        continue;  // 0/0 contributes nothing
      }
      sup = std::max(sup, num / den);
    }
  }
  return sup;
}

GrowthCheck growth_envelope_check(const GraphSurface& S, double eta, int samples,
                                  std::uint64_t seed, double slack_tol) {
  if (samples < 1) throw argument_error("growth check needs samples >= 1");
  if (!(eta >= 0.0)) throw argument_error("growth check needs eta >= 0");
  if (!domain_contains_ball(S.domain(), S.params().n, 1.0))
    throw argument_error("growth check needs the unit ball inside the domain");
  SampleRng rng(seed);
  const int n = S.params().n;

  double M = 0.0;
  for (int k = 0; k < samples; ++k) M = std::max(M, std::abs(S.u(rng.direction(n))));

  GrowthCheck out;
  out.sphere_max = M;
  const double p = (S.params().alpha + 1.0) / (eta > 0.0 ? eta : kInf);
  for (int k = 0; k < samples; ++k) {
    // half the radii uniform, half log-spread toward 0 to probe small scales
    const double r = (k % 2 == 0) ? rng.uniform(1e-12, 1.0) : std::pow(2.0, -8.0 * rng.uniform());
    const double uu = std::abs(S.u(r * rng.direction(n)));
    double env = M * std::pow(r, p);  // p = inf gives env = 0 for r < 1
    double ratio;
    if (env == 0.0)
      ratio = uu == 0.0 ? 0.0 : kInf;
    else
      ratio = uu / env;
    out.worst_ratio = std::max(out.worst_ratio, ratio);
  }
  out.ok = out.worst_ratio <= 1.0 + slack_tol;
  return out;
}

FlatnessCertificate subharmonicity_certificate(const GraphSurface& S, double tol,
                                               const CertificateOptions& opt) {
  if (!(tol > 0.0)) throw argument_error("certificate tolerance must be > 0");
  if (opt.kmax < 2) throw argument_error("certificate needs kmax >= 2");
  const Params& P = S.params();

  double rmax = 1.0;
  int guard = 0;
  while (!domain_contains_ball(S.domain(), P.n, rmax) && ++guard < 60) rmax *= 0.5;
  if (guard >= 60) throw argument_error("surface domain admits no sampling ball");

  FlatnessCertificate cert;
  cert.tol = tol;
  cert.eta_bound = P.homogeneous_order() / (P.n + 3.0 * P.alpha);
  cert.radii = dyadic_radii(rmax, opt.kmax + 1);

  SampleSpec ss;
  ss.radii = cert.radii;
  ss.directions = opt.directions;
  ss.seed = opt.seed;
  cert.eta_hat = eta_flatness(S, ss);
  cert.condition_i = cert.eta_hat < cert.eta_bound;

  SampleRng rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  cert.ratio_samples.reserve(cert.radii.size());
  for (const double r : cert.radii) {
    double worst = 0.0;
    for (int d = 0; d < opt.directions; ++d) {
      const double q = curvature_ratio(S, r * rng.direction(P.n));
      if (std::abs(q) > std::abs(worst)) worst = q;
    }
    cert.ratio_samples.push_back(worst);
  }
  const std::size_t K = cert.ratio_samples.size();
  const double m0 = std::abs(cert.ratio_samples[K - 3]);
  const double m1 = std::abs(cert.ratio_samples[K - 2]);
  const double m2 = std::abs(cert.ratio_samples[K - 1]);
  const bool decaying = m1 <= m0 * (1.0 + 1e-9) && m2 <= m1 * (1.0 + 1e-9);
  cert.condition_ii = decaying && m2 <= tol;
  cert.overall = cert.condition_i && cert.condition_ii;

  if (cert.overall) {
    SampleRng spot(opt.seed ^ 0xd1b54a32d192ed03ULL);
    cert.spot_checked = true;
    cert.q_min_spot = kInf;
    for (const double r : cert.radii)
      for (int d = 0; d < opt.directions / 2 + 1; ++d)
        cert.q_min_spot = std::min(cert.q_min_spot, q_sigma(S, r * spot.direction(P.n)));
    cert.spot_ok = cert.q_min_spot >= -opt.q_tol;
  }
  return cert;
}

std::vector<CertificateSearchHit> search_subharmonic_surfaces(const Params& P, int trials,
                                                              std::uint64_t seed, double tol) {
  if (trials < 1) throw argument_error("search needs trials >= 1");
  SampleRng rng(seed);
  const Domain dom = BallDomain{1.25};
  CertificateOptions copt;
  copt.kmax = 6;
  copt.directions = 24;

  std::vector<CertificateSearchHit> hits;
  for (int t = 0; t < trials; ++t) {
    SurfaceSpec spec;
    if (t % 2 == 0 || P.n != 2) {
      RadialPowerSpec rp;
      rp.m = 2.0 + 4.0 * rng.uniform();
      if (rp.m < P.alpha + 1.0) rp.m = 2.0 * std::ceil(rp.m / 2.0);  // keep the power admissible
      rp.c = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.1, 1.0);
      spec = rp;
    } else {
      MonomialSpec ms;
      const int terms = 1 + (rng.uniform() < 0.5 ? 1 : 0);
      for (int k = 0; k < terms; ++k) {
        MonomialTerm mt;
        const int deg = 2 + static_cast<int>(rng.uniform() * 3.0);  // 2..4
        const int i = static_cast<int>(rng.uniform() * (deg + 1));
        mt.exponents = {i, deg - i};
        mt.coeff = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.1, 1.0);
        ms.terms.push_back(std::move(mt));
      }
      spec = ms;
    }
    GraphSurface S(P, spec, dom);
    copt.seed = seed + 0x1000 + static_cast<std::uint64_t>(t);
    FlatnessCertificate cert = subharmonicity_certificate(S, tol, copt);
    if (cert.overall) hits.push_back({S.name(), std::move(cert)});
  }
  return hits;
}

}  // namespace grushin
