#include "core/analysis.hpp"

#include "doctest.h"

#include <cmath>
#include <string>

using namespace grushin;

namespace {

const Domain kD = BallDomain{1.25};

GraphSurface make(const std::string& spec, double alpha = 1.0) {
  return GraphSurface(Params(2, alpha), parse_surface_spec(spec), kD);
}

SampleSpec radii(std::vector<double> r) {
  SampleSpec s;
  s.radii = std::move(r);
  return s;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("dyadic radii") {
  const std::vector<double> r = dyadic_radii(0.8, 4);
  REQUIRE(r.size() == 4);
  CHECK(r[0] == 0.8);
  CHECK(r[1] == 0.4);
  CHECK(r[2] == 0.2);
  CHECK(r[3] == 0.1);
  CHECK(dyadic_radii(1.0, 1) == std::vector<double>{1.0});
  CHECK_THROWS_AS(dyadic_radii(0.0, 3), argument_error);
  CHECK_THROWS_AS(dyadic_radii(1.0, 0), argument_error);
}

TEST_CASE("dilation-invariant graphs classify as harmonic") {
  for (const char* spec : {"flat", "radial-power:c=0.3,m=2", "monomial:1,1=1"}) {
    const HarmonicityVerdict v = classify_harmonicity(make(spec), radii(dyadic_radii(0.6, 4)));
    CHECK(v.classification == QSign::harmonic);
    CHECK(std::abs(v.q_min) < 1e-12);
    CHECK(std::abs(v.q_max) < 1e-12);
    CHECK(v.samples == 4 * 32);
  }
}

TEST_CASE("radial quartics classify as superharmonic for either sign") {
  for (const double c : {1.0, -1.0}) {
    char spec[64];
    std::snprintf(spec, sizeof spec, "radial-power:c=%g,m=4", c);
    const HarmonicityVerdict v = classify_harmonicity(make(spec), radii(dyadic_radii(0.6, 4)));
    CHECK(v.classification == QSign::superharmonic);
    CHECK(v.q_max < 0.0);       // strictly negative everywhere sampled
    CHECK(v.q_min < -0.5);      // large at the outer radius
    CHECK(v.r_at_min == 0.6);
  }
}

TEST_CASE("a radial mix changes sign: window-dependent classification") {
  // u = |x|^2 - 0.5 |x|^4: the quadratic part is dilation-invariant and drops
  // out of <X rho, nu>, the quartic correction pushes q positive near 0 and
  // negative by |x| = 1.
  const GraphSurface S = make("monomial:2,0=1;0,2=1;4,0=-0.5;2,2=-1;0,4=-0.5");

  const HarmonicityVerdict wide = classify_harmonicity(S, radii({1.0, 0.5, 0.25, 0.125}));
  CHECK(wide.classification == QSign::indefinite);
  CHECK(wide.q_min < -0.5);
  CHECK(wide.q_max > 0.1);
  CHECK(wide.r_at_min == 1.0);

  const HarmonicityVerdict narrow = classify_harmonicity(S, radii({0.5, 0.25}));
  CHECK(narrow.classification == QSign::subharmonic);
  CHECK(narrow.q_min > 0.05);  // strictly positive on this window
}

TEST_CASE("sample spec validation") {
  const GraphSurface S = make("flat");
  CHECK_THROWS_AS(classify_harmonicity(S, radii({})), argument_error);
  CHECK_THROWS_AS(classify_harmonicity(S, radii({-0.1})), argument_error);
  CHECK_THROWS_AS(classify_harmonicity(S, radii({2.0})), argument_error);  // leaves the domain
  SampleSpec bad = radii({0.5});
  bad.directions = 0;
  CHECK_THROWS_AS(classify_harmonicity(S, bad), argument_error);
  CHECK_THROWS_AS(classify_harmonicity(S, radii({0.5}), -1.0), argument_error);
}

TEST_CASE("flatness modulus on the catalog") {
  const SampleSpec ss = radii(dyadic_radii(0.6, 3));
  CHECK(eta_flatness(make("flat"), ss) == 0.0);
  CHECK(std::abs(eta_flatness(make("radial-power:c=0.3,m=2"), ss) - 1.0) < 1e-12);
  CHECK(std::abs(eta_flatness(make("monomial:1,1=1"), ss) - 1.0) < 1e-12);
  CHECK(std::abs(eta_flatness(make("radial-power:c=1,m=4"), ss) - 0.5) < 1e-12);
  CHECK(std::abs(eta_flatness(make("monomial:1,0=1"), ss) - 2.0) < 1e-12);
  // nonzero u with radially constant height: no finite modulus
  CHECK(std::isinf(eta_flatness(make("monomial:0,0=1"), ss)));
}

TEST_CASE("growth envelope") {
  const GraphSurface rp2 = make("radial-power:c=0.3,m=2");
  const GrowthCheck ok = growth_envelope_check(rp2, 1.0, 400);
  CHECK(ok.ok);
  CHECK(std::abs(ok.worst_ratio - 1.0) < 1e-9);  // |u| = M r^2 exactly
  CHECK(std::abs(ok.sphere_max - 0.3) < 1e-12);

  const GrowthCheck bad = growth_envelope_check(rp2, 0.5, 400);
  CHECK(!bad.ok);
  CHECK(bad.worst_ratio > 100.0);  // r^2 vs r^4 blows up toward 0

  CHECK(growth_envelope_check(make("radial-power:c=1,m=4"), 0.5, 400).ok);
  CHECK(growth_envelope_check(make("flat"), 0.7, 100).ok);

  CHECK_THROWS_AS(growth_envelope_check(rp2, -1.0, 100), argument_error);
  CHECK_THROWS_AS(growth_envelope_check(rp2, 1.0, 0), argument_error);
  const GraphSurface small(Params(2, 1.0), FlatSpec{}, BallDomain{0.9});
  CHECK_THROWS_AS(growth_envelope_check(small, 1.0, 100), argument_error);
}

TEST_CASE("flatness certificate on the flat surface") {
  const FlatnessCertificate c = subharmonicity_certificate(make("flat"));
  CHECK(std::abs(c.eta_bound - 0.6) < 1e-15);  // (n+alpha)/(n+3alpha) at (2,1)
  CHECK(c.eta_hat <= 1e-12);
  CHECK(c.condition_i);
  CHECK(c.condition_ii);
  CHECK(c.overall);
  CHECK(c.spot_checked);
  CHECK(c.spot_ok);
  CHECK(std::abs(c.q_min_spot) < 1e-12);
  for (const double r : c.ratio_samples) CHECK(std::abs(r) < 1e-12);
}

TEST_CASE("flatness certificate rejects the radial quartic on decay") {
  const FlatnessCertificate c = subharmonicity_certificate(make("radial-power:c=1,m=4"));
  CHECK(std::abs(c.eta_hat - 0.5) < 1e-12);
  CHECK(c.condition_i);  // 0.5 < 0.6
  CHECK(!c.condition_ii);
  CHECK(!c.overall);
  CHECK(!c.spot_checked);
  // the curvature ratio saturates at -3/2 instead of decaying
  CHECK(std::abs(c.ratio_samples.back() + 1.5) < 0.01);
}

TEST_CASE("flatness certificate rejects the paraboloid on the modulus") {
  const FlatnessCertificate c = subharmonicity_certificate(make("radial-power:c=0.3,m=2"));
  CHECK(std::abs(c.eta_hat - 1.0) < 1e-12);
  CHECK(!c.condition_i);  // 1 >= 0.6
  CHECK(!c.overall);
}

TEST_CASE("certificate argument validation") {
  const GraphSurface S = make("flat");
  CHECK_THROWS_AS(subharmonicity_certificate(S, 0.0), argument_error);
  CertificateOptions opt;
  opt.kmax = 1;
  CHECK_THROWS_AS(subharmonicity_certificate(S, 1e-3, opt), argument_error);
}

TEST_CASE("certificate search is best-effort and honest") {
  const auto hits = search_subharmonic_surfaces(Params(2, 1.0), 6);
  for (const auto& h : hits) {
    CHECK(h.cert.overall);
    CHECK(!h.spec.empty());
  }
  CHECK_THROWS_AS(search_subharmonic_surfaces(Params(2, 1.0), 0), argument_error);
}

}  // TEST_SUITE
