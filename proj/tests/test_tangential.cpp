#include "core/tangential.hpp"
#include "core/rng.hpp"

#include "doctest.h"

#include <cmath>

using namespace grushin;

namespace {

double rel_err(double a, double b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

const Domain kD = BallDomain{1.25};

}  // namespace

TEST_SUITE("tangential") {

TEST_CASE("flat adjoint of the constant field") {
  // delta_i^* 1 = -alpha x_i / |x|^2 horizontally, 0 vertically
  for (const double alpha : {1.0, 2.0}) {
    const GraphSurface S(Params(2, alpha), FlatSpec{}, kD);
    const SurfaceField one = SurfaceField::constant(2, 1.0);
    SampleRng rng(53);
    for (int k = 0; k < 40; ++k) {
      const Vec x = rng.annulus_point(2, 0.05, 1.2);
      for (int i = 0; i < 2; ++i)
        CHECK(rel_err(adjoint_tangential(S, one, x, i), -alpha * x(i) / x.squaredNorm()) < 1e-12);
      CHECK(std::abs(adjoint_tangential(S, one, x, 2)) < 1e-13);
    }
  }
}

TEST_CASE("adjoint splits into derivative and zeroth-order parts") {
  // delta_i^* psi = -delta_i psi + psi * delta_i^* 1
  const GraphSurface S(Params(2, 1.0), RadialPowerSpec{1.0, 4.0}, kD);
  const SurfaceField one = SurfaceField::constant(2, 1.0);
  const SurfaceField psi =
      SurfaceField::polynomial(2, {{{2, 0}, 1.0}, {{0, 1}, -0.5}, {{1, 1}, 0.25}});
  SampleRng rng(59);
  for (int k = 0; k < 60; ++k) {
    const Vec x = rng.annulus_point(2, 0.05, 1.2);
    const Frame fr = make_frame(S, x);
    const Vec dpsi = tangential_gradient(fr, psi);
    const double p = psi.value(x);
    for (int i = 0; i <= 2; ++i) {
      const double lhs = adjoint_tangential(S, psi, x, i);
      const double rhs = -dpsi(i) + p * adjoint_tangential(S, one, x, i);
      CHECK(rel_err(lhs, rhs) < 1e-11);
    }
  }
}

TEST_CASE("kernel is 1 on the flat surface and bounded everywhere") {
  const GraphSurface flat(Params(2, 1.5), FlatSpec{}, kD);
  const GraphSurface curved[] = {
      GraphSurface(Params(2, 1.0), RadialPowerSpec{0.3, 2.0}, kD),
      GraphSurface(Params(2, 1.0), parse_surface_spec("monomial:1,1=1"), kD),
      GraphSurface(Params(2, 1.0), RadialPowerSpec{1.0, 4.0}, kD),
  };
  SampleRng rng(61);
  for (int k = 0; k < 60; ++k) {
    const Vec x = rng.annulus_point(2, 0.01, 1.2);
    CHECK(rel_err(kernel(flat, x), 1.0) < 1e-13);
    for (const auto& S : curved) {
      const double kv = kernel(S, x);
      const Frame fr = make_frame(S, x);
      CHECK(kv >= 0.0);
      CHECK(kv <= fr.xrho2 * (1.0 + 1e-13));
      CHECK(kv <= 1.0 + 1e-13);
      // Pythagoras split of the X-gradient along / across the normal
      CHECK(rel_err(kv + xrho_dot_nu(fr) * xrho_dot_nu(fr), fr.xrho2) < 1e-12);
      CHECK(rel_err(delta_rho(fr).squaredNorm(), kv) < 1e-12);
      // fused fast path agrees with the two separate evaluations
      double kf = 0.0, vf = 0.0;
      kernel_area(S, x, kf, vf);
      CHECK(rel_err(kf, kv) < 1e-13);
      CHECK(rel_err(vf, area_element(S, x)) < 1e-13);
    }
  }
}

TEST_CASE("tangential gradients are tangential and extension-independent") {
  const GraphSurface S(Params(2, 1.0), RadialPowerSpec{0.3, 2.0}, kD);
  const SurfaceField poly = SurfaceField::polynomial(2, {{{2, 1}, 1.0}, {{1, 0}, 0.5}});
  const AmbientField amb = AmbientField::from_callable(
      S.params(), [](const std::vector<Jet2>& z) { return z[0] * z[0] * z[2] + z[1] * z[2]; });
  const SurfaceField restricted = SurfaceField::restrict_ambient(S, amb);
  SampleRng rng(67);
  for (int k = 0; k < 60; ++k) {
    const Vec x = rng.annulus_point(2, 0.05, 1.2);
    const Frame fr = make_frame(S, x);
    const Vec nu = fr.nu();
    CHECK(std::abs(tangential_gradient(fr, poly).dot(nu)) < 1e-12);
    const Vec ga = tangential_gradient(fr, amb);
    CHECK(std::abs(ga.dot(nu)) < 1e-12);
    // the vertical-constant extension of the restriction has the same
    // projected gradient: the two extensions differ by something vanishing
    // on the surface
    const Vec gr = tangential_gradient(fr, restricted);
    for (int i = 0; i <= 2; ++i) CHECK(rel_err(ga(i), gr(i)) < 1e-11);
  }
}

TEST_CASE("surface operator of the squared gauge on the flat surface") {
  // L(rho^2) = 2 + 2(n + alpha - 1) = 2(n + alpha), constant over the surface
  const std::pair<int, double> cases[] = {{2, 1.0}, {3, 2.0}};
  for (const auto& [n, alpha] : cases) {
    const GraphSurface S(Params(n, alpha), FlatSpec{}, kD);
    const SurfaceField r2 = SurfaceField::rho_power(S, 2.0);
    const double want = 2.0 * (n + alpha);
    SampleRng rng(71);
    for (int k = 0; k < 30; ++k) {
      const Vec x = rng.annulus_point(n, 0.05, 1.2);
      CHECK(rel_err(surface_laplacian(S, r2, x, LaplacianMethod::adjoint), want) < 1e-10);
      CHECK(rel_err(surface_laplacian(S, r2, x, LaplacianMethod::corrected), want) < 1e-10);
      CHECK(rel_err(surface_laplacian(S, r2, x, LaplacianMethod::divergence), want) < 1e-10);
      CHECK(rel_err(radial_surface_laplacian(
                        S, x, [](double t) { return 2.0 * t; }, [](double) { return 2.0; }),
                    want) < 1e-12);
    }
  }
}

TEST_CASE("flat surface operator is the weighted laplacian") {
  // on u = 0: L phi = Delta phi + alpha <x, grad phi> / |x|^2; phi = x_1^2
  for (const double alpha : {1.0, 2.0}) {
    const GraphSurface S(Params(2, alpha), FlatSpec{}, kD);
    const SurfaceField phi = SurfaceField::polynomial(2, {{{2, 0}, 1.0}});
    SampleRng rng(73);
    for (int k = 0; k < 30; ++k) {
      const Vec x = rng.annulus_point(2, 0.05, 1.2);
      const double want = 2.0 + 2.0 * alpha * x(0) * x(0) / x.squaredNorm();
      CHECK(rel_err(surface_laplacian(S, phi, x, LaplacianMethod::adjoint), want) < 1e-11);
      CHECK(rel_err(surface_laplacian(S, phi, x, LaplacianMethod::divergence), want) < 1e-11);
    }
  }
}

TEST_CASE("structural function vanishes on dilation-invariant graphs") {
  const GraphSurface homo[] = {
      GraphSurface(Params(2, 1.0), FlatSpec{}, kD),
      GraphSurface(Params(2, 1.0), RadialPowerSpec{0.3, 2.0}, kD),
      GraphSurface(Params(2, 1.0), RadialPowerSpec{-0.7, 2.0}, kD),
      GraphSurface(Params(2, 1.0), parse_surface_spec("monomial:1,1=1"), kD),
  };
  SampleRng rng(79);
  for (const auto& S : homo) {
    for (int k = 0; k < 100; ++k) {
      const Vec x = rng.annulus_point(2, 0.01, 1.2);
      CHECK(std::abs(q_sigma(S, x)) < 1e-12);
    }
  }
}

TEST_CASE("structural function of the radial quartic in closed form") {
  // u = c|x|^4, n = 2, alpha = 1: with s = |x|,
  //   v = sqrt(s^2 + 16 c^2 s^6),  rho = (s^4 + 4 c^2 s^8)^{1/4},
  //   t = <X rho, nu> = -2 c s^6 / (rho^3 v),
  //   H = (2 c s^4 / v^3)(3 + 16 c^2 s^4),
  //   q = t [ 5 t / rho + 8 c s^2 / v + 2 H ].
  for (const double c : {1.0, 0.4, -0.8}) {
    const GraphSurface S(Params(2, 1.0), RadialPowerSpec{c, 4.0}, kD);
    SampleRng rng(83);
    for (const double s : {0.05, 0.1, 0.3, 0.7}) {
      const double v = std::sqrt(s * s + 16 * c * c * std::pow(s, 6.0));
      const double rho = std::pow(std::pow(s, 4.0) + 4 * c * c * std::pow(s, 8.0), 0.25);
      const double t = -2.0 * c * std::pow(s, 6.0) / (rho * rho * rho * v);
      const double H = 2.0 * c * std::pow(s, 4.0) * (3.0 + 16.0 * c * c * std::pow(s, 4.0)) /
                       (v * v * v);
      const double want = t * (5.0 * t / rho + 8.0 * c * s * s / v + 2.0 * H);
      double q0 = 0.0;
      for (int k = 0; k < 8; ++k) {
        const Vec x = s * rng.direction(2);
        const double q = q_sigma(S, x);
        CHECK(rel_err(q, want) < 1e-12);
        CHECK(rel_err(q, q_sigma(S, x, QVariant::expanded)) < 1e-10);
        if (k == 0) q0 = q;
        CHECK(rel_err(q, q0) < 1e-13);  // radial symmetry: direction independent
      }
    }
  }
}

TEST_CASE("q variants agree on a non-radial surface") {
  CustomSpec cs;
  cs.u = [](const std::vector<Jet2>& z) { return 0.1 * exp(z[0]) * sin(z[1]) - 0.1 * z[1]; };
  cs.label = "warp";
  const GraphSurface S(Params(2, 1.0), cs, kD);
  SampleRng rng(89);
  for (int k = 0; k < 80; ++k) {
    const Vec x = rng.annulus_point(2, 0.05, 1.2);
    CHECK(rel_err(q_sigma(S, x, QVariant::compact), q_sigma(S, x, QVariant::expanded)) < 1e-9);
  }
}

TEST_CASE("normal divergence returns the mean curvature") {
  // sum_i delta_i nu_i = -n H
  const GraphSurface S(Params(2, 1.0), RadialPowerSpec{1.0, 4.0}, kD);
  SampleRng rng(97);
  for (int k = 0; k < 60; ++k) {
    const Vec x = rng.annulus_point(2, 0.05, 1.2);
    const Frame fr = make_frame(S, x);
    double div_nu = 0.0;
    for (int i = 0; i < 2; ++i)
      div_nu += fr.dnu_bar(i, i) - fr.dnu_bar.row(i).dot(fr.nu_bar) * fr.nu_bar(i);
    div_nu += -fr.dnu_last.dot(fr.nu_bar) * fr.nu_last;
    CHECK(rel_err(div_nu, -2.0 * fr.H) < 1e-11);
    CHECK(rel_err(fr.H, mean_curvature(S, x)) < 1e-13);
  }
}

TEST_CASE("frame rejects the degenerate origin") {
  const GraphSurface S(Params(2, 1.0), FlatSpec{}, kD);
  CHECK_THROWS_AS(make_frame(S, v2(0, 0)), domain_error);
  CHECK_THROWS_AS(q_sigma(S, v2(0, 0)), domain_error);
}

}  // TEST_SUITE
