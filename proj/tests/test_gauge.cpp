#include "core/gauge.hpp"
#include "core/rng.hpp"

#include "doctest.h"

#include <cmath>
#include <utility>

using namespace grushin;

namespace {

double rel_err(double a, double b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

double max_rel_err(const Mat& a, const Mat& b) {
  double e = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) e = std::max(e, rel_err(a(i, j), b(i, j)));
  return e;
}

double max_rel_err(const Vec& a, const Vec& b) {
  double e = 0.0;
  for (int i = 0; i < a.size(); ++i) e = std::max(e, rel_err(a(i), b(i)));
  return e;
}

// The gauge expressed purely through second-order jet arithmetic; the
// independent reference every closed form below is certified against.
AmbientField gauge_by_jets(const Params& P) {
  const double beta = P.alpha + 1.0;
  return AmbientField::from_callable(P, [beta](const std::vector<Jet2>& z) {
    const int n = static_cast<int>(z.size()) - 1;
    Jet2 s2 = z[0] * z[0];
    for (int i = 1; i < n; ++i) s2 = s2 + z[i] * z[i];
    return pow(pow(s2, beta) + (beta * beta) * (z[n] * z[n]), 0.5 / beta);
  });
}

Point random_point(SampleRng& rng, int n) {
  return {rng.annulus_point(n, 0.05, 1.0), rng.uniform(-1.0, 1.0)};
}

}  // namespace

TEST_SUITE("gauge") {

TEST_CASE("closed values") {
  Params P(2, 1.0);
  Vec x(2);
  x << 0.3, 0.4;
  CHECK(rho(P, {x, 0.0}) == doctest::Approx(0.5).epsilon(1e-14));
  Vec z = Vec::Zero(2);
  CHECK(rho(P, {z, 0.5}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rho(P, {z, 2.0}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rho(P, {z, 0.0}) == 0.0);

  Params P2(2, 2.0);  // beta = 3
  CHECK(rho(P2, {z, 1.0}) == doctest::Approx(std::pow(9.0, 1.0 / 6.0)).epsilon(1e-14));
}

TEST_CASE("anisotropic homogeneity") {
  SampleRng rng(11);
  const std::pair<int, double> cases[] = {{2, 1.0}, {3, 1.0}, {2, 1.5}};
  for (const auto& [n, alpha] : cases) {
    Params P(n, alpha);
    for (int k = 0; k < 50; ++k) {
      const Point p = random_point(rng, n);
      const double lam = rng.uniform(0.05, 3.0);
      CHECK(rel_err(rho(P, dilate(P, p, lam)), lam * rho(P, p)) < 1e-13);
    }
  }
}

TEST_CASE("closed-form jet certified against jet arithmetic") {
  SampleRng rng(17);
  const std::pair<int, double> cases[] = {{2, 1.0}, {3, 1.0}, {2, 2.0}, {2, 0.5}, {1, 1.5}};
  for (const auto& [n, alpha] : cases) {
    Params P(n, alpha);
    const AmbientField ad = gauge_by_jets(P);
    for (int k = 0; k < 40; ++k) {
      const Point p = random_point(rng, n);
      const AmbientJet cf = rho_jet(P, p);
      const AmbientJet aj = ad.jet(p);
      CHECK(rel_err(cf.value, aj.value) < 1e-12);
      CHECK(max_rel_err(cf.grad, aj.grad) < 1e-10);
      CHECK(max_rel_err(cf.hess, aj.hess) < 1e-10);
    }
  }
}

TEST_CASE("closed-form hessian against central differences") {
  // third route, independent of the jet arithmetic itself
  for (const double alpha : {1.0, 1.5}) {
    Params P(2, alpha);
    Vec x(2);
    x << 0.3, 0.2;
    for (const double y : {0.15, -0.4, 0.0}) {
      const AmbientJet cf = rho_jet(P, {x, y});
      const double h = 3e-5;
      auto at = [&](double d0, double d1, double dy) {
        Vec q(2);
        q << x(0) + d0, x(1) + d1;
        return rho(P, {q, y + dy});
      };
      const double f0 = at(0, 0, 0);
      const double d[3][3] = {{h, 0, 0}, {0, h, 0}, {0, 0, h}};
      for (int i = 0; i < 3; ++i) {
        const double gi = (at(d[i][0], d[i][1], d[i][2]) - at(-d[i][0], -d[i][1], -d[i][2])) / (2 * h);
        CHECK(rel_err(cf.grad(i), gi) < 1e-8);
        for (int j = 0; j < 3; ++j) {
          double fd;
          if (i == j) {
            fd = (at(d[i][0], d[i][1], d[i][2]) - 2 * f0 + at(-d[i][0], -d[i][1], -d[i][2])) / (h * h);
          } else {
            fd = (at(d[i][0] + d[j][0], d[i][1] + d[j][1], d[i][2] + d[j][2]) -
                  at(d[i][0] - d[j][0], d[i][1] - d[j][1], d[i][2] - d[j][2]) -
                  at(d[j][0] - d[i][0], d[j][1] - d[i][1], d[j][2] - d[i][2]) +
                  at(-d[i][0] - d[j][0], -d[i][1] - d[j][1], -d[i][2] - d[j][2])) /
                 (4 * h * h);
          }
          CHECK(rel_err(cf.hess(i, j), fd) < 1e-4);
        }
      }
    }
  }
}

TEST_CASE("x-gradient norm and trace identity") {
  SampleRng rng(23);
  const std::pair<int, double> cases[] = {{2, 1.0}, {3, 2.0}};
  for (const auto& [n, alpha] : cases) {
    Params P(n, alpha);
    const double na = P.homogeneous_order();
    for (int k = 0; k < 60; ++k) {
      const Point p = random_point(rng, n);
      const GaugeDerivs d = gauge_derivatives(P, p);
      const double s2a = std::pow(p.x.squaredNorm(), alpha);
      CHECK(rel_err(d.xgrad_norm2, s2a * std::pow(rho(P, p), -2.0 * alpha)) < 1e-12);
      CHECK(rel_err(d.xgrad.squaredNorm(), d.xgrad_norm2) < 1e-12);
      CHECK(rel_err(d.lrho, na * d.xgrad_norm2 / rho(P, p)) < 1e-11);
      // the frame does not commute: the mixed-entry gap is the commutator term
      for (int i = 0; i < n; ++i) {
        const double da_i =
            alpha * p.x(i) * std::pow(p.x.squaredNorm(), 0.5 * alpha - 1.0);
        const AmbientJet j = rho_jet(P, p);
        CHECK(rel_err(d.xhess(i, n) - d.xhess(n, i), da_i * j.grad(n)) < 1e-11);
      }
    }
  }
}

TEST_CASE("fundamental-solution profile is annihilated away from the pole") {
  SampleRng rng(29);
  const std::pair<int, double> cases[] = {{2, 1.0}, {3, 1.0}, {2, 1.5}};
  for (const auto& [n, alpha] : cases) {
    Params P(n, alpha);
    const AmbientField gamma = AmbientField::fundamental_solution(P);
    for (int k = 0; k < 60; ++k) {
      Point p = random_point(rng, n);
      p.x = p.x * (0.3 / 0.05);  // keep |x| >= 0.3 so derivative scales stay O(1)
      p.x = p.x.norm() > 1.0 ? Vec(p.x / p.x.norm()) : p.x;
      CHECK(std::abs(grushin_operator(P, gamma, p)) < 1e-8);
    }
  }
}

TEST_CASE("fundamental-solution homogeneity and values") {
  Params P(2, 1.0);
  Vec x(2);
  x << 0.3, 0.4;
  CHECK(fundamental_solution(P, {x, 0.0}) == doctest::Approx(4.0).epsilon(1e-13));
  SampleRng rng(31);
  const double e = 1.0 - P.n - P.alpha;
  for (int k = 0; k < 30; ++k) {
    const Point p = random_point(rng, 2);
    const double lam = rng.uniform(0.1, 2.5);
    CHECK(rel_err(fundamental_solution(P, dilate(P, p, lam)),
                  std::pow(lam, e) * fundamental_solution(P, p)) < 1e-12);
  }
}

TEST_CASE("radial chain rule matches jet composition") {
  Params P(2, 1.0);
  const AmbientField direct = AmbientField::radial(
      P, [](double t) { return std::sin(t); }, [](double t) { return std::cos(t); },
      [](double t) { return -std::sin(t); });
  const double beta = P.alpha + 1.0;
  const AmbientField composed = AmbientField::from_callable(P, [beta](const std::vector<Jet2>& z) {
    Jet2 s2 = z[0] * z[0] + z[1] * z[1];
    return sin(pow(pow(s2, beta) + (beta * beta) * (z[2] * z[2]), 0.5 / beta));
  });
  SampleRng rng(37);
  for (int k = 0; k < 40; ++k) {
    const Point p = random_point(rng, 2);
    const AmbientJet a = direct.jet(p);
    const AmbientJet b = composed.jet(p);
    CHECK(rel_err(a.value, b.value) < 1e-12);
    CHECK(max_rel_err(a.grad, b.grad) < 1e-10);
    CHECK(max_rel_err(a.hess, b.hess) < 1e-9);
  }
}

TEST_CASE("rejections") {
  Params P(2, 1.0);
  const Vec z = Vec::Zero(2);
  CHECK(is_origin({z, 0.0}));
  CHECK_FALSE(is_origin({z, 1e-9}));
  CHECK_THROWS_AS(rho_jet(P, {z, 0.0}), domain_error);
  CHECK_THROWS_AS(fundamental_solution(P, {z, 0.0}), domain_error);
  Vec w(3);
  w << 1, 2, 3;
  CHECK_THROWS_AS(rho(P, {w, 0.0}), argument_error);
  Vec x(2);
  x << 0.3, 0.4;
  CHECK_THROWS_AS(dilate(P, {x, 0.0}, 0.0), argument_error);
  CHECK_THROWS_AS(dilate(P, {x, 0.0}, -1.0), argument_error);
  CHECK_THROWS_AS(Params(0, 1.0), argument_error);
  CHECK_THROWS_AS(Params(2, 0.0), argument_error);
}

}  // TEST_SUITE
