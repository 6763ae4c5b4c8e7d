#include "core/solver.hpp"
#include "core/tangential.hpp"

#include "doctest.h"

#include <cmath>

using namespace grushin;

namespace {

GraphSurface flat2() { return GraphSurface(Params(2, 1.0), FlatSpec{}, BallDomain{1.25}); }

Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

BoxMask unit_box(double a, double b) { return BoxMask{v2(a, a), v2(b, b)}; }

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("constants are reproduced exactly") {
  const GraphSurface S = flat2();

  const SolveSolution box = solve_dirichlet(S, unit_box(0.1, 0.9), 24, [](const Vec&) { return 5.0; });
  CHECK(box.unknowns > 0);
  CHECK(box.residual < 1e-10);
  for (int j = 0; j < box.ny; ++j)
    for (int i = 0; i < box.nx; ++i)
      if (box.is_active(i, j)) CHECK(std::abs(box.value(i, j) - 5.0) < 1e-10);

  const SolveSolution disk =
      solve_dirichlet(S, DiskMask{1.0}, 32, [](const Vec&) { return 2.0; });
  for (int j = 0; j < disk.ny; ++j)
    for (int i = 0; i < disk.nx; ++i)
      if (disk.is_active(i, j)) CHECK(std::abs(disk.value(i, j) - 2.0) < 1e-10);

  // the interpolant of a constant grid is that constant, with flat derivatives
  const SurfaceField F = disk.interpolant();
  const UJet j = F.jet(v2(0.3, -0.2), 2);
  CHECK(std::abs(j.value - 2.0) < 1e-11);
  CHECK(j.grad.norm() < 1e-9);
}

TEST_CASE("annulus problem against the radial closed form") {
  // flat surface, alpha = 1: radial solutions of the weighted operator solve
  // F'' + 2 F'/s = 0, i.e. F = A + B / s. Levels 2 (inner, s = 0.2) and
  // 1 (outer, s = 1) give F = 0.75 + 0.25 / s.
  const GraphSurface S = flat2();
  const auto g = [](const Vec& x) { return x.norm() < 0.6 ? 2.0 : 1.0; };
  const SolveSolution sol = solve_dirichlet(S, AnnulusMask{0.2, 1.0}, 96, g);
  CHECK(sol.residual < 1e-9);

  double sup = 0.0;
  for (int j = 0; j < sol.ny; ++j)
    for (int i = 0; i < sol.nx; ++i) {
      if (!sol.is_active(i, j)) continue;
      const double s = sol.node(i, j).norm();
      if (s < 0.25 || s > 0.95) continue;  // avoid boundary-data nodes
      sup = std::max(sup, std::abs(sol.value(i, j) - (0.75 + 0.25 / s)));
    }
  CHECK(sup < 3e-3);
  CHECK(sup > 0.0);

  // (0.5, 0) is a lattice node at this resolution: h = 1/48, index (72, 48)
  const SurfaceField F = sol.interpolant();
  CHECK(std::abs(F.value(v2(0.5, 0.0)) - 1.25) < 5e-5);
  CHECK(std::abs(F.value(v2(0.5, 0.0)) - sol.value(72, 48)) < 1e-12);

  // the hole is not part of the solved region
  CHECK_THROWS_AS(F.value(v2(0.0, 0.0)), domain_error);
  CHECK_THROWS_AS(F.value(v2(2.0, 0.0)), domain_error);
}

TEST_CASE("interpolated operator residual decays at the scheme's rate") {
  const GraphSurface S = flat2();
  const auto g = [](const Vec& x) { return x.norm() < 0.6 ? 2.0 : 1.0; };
  const SolveSolution c64 = solve_dirichlet(S, AnnulusMask{0.2, 1.0}, 64, g);
  const SolveSolution c128 = solve_dirichlet(S, AnnulusMask{0.2, 1.0}, 128, g);
  const double r64 = residual_check(S, c64);
  const double r128 = residual_check(S, c128);
  CHECK(r128 > 0.0);
  CHECK(r128 < 1.0);
  // second-order scheme: halving h should cut the residual by about 4
  CHECK(r64 / r128 > 2.0);
  CHECK(r64 / r128 < 10.0);
}

TEST_CASE("argument validation") {
  const GraphSurface S = flat2();
  const GraphSurface S3(Params(3, 1.0), FlatSpec{}, BallDomain{1.25});
  const auto g = [](const Vec&) { return 1.0; };

  CHECK_THROWS_AS(solve_dirichlet(S3, DiskMask{1.0}, 16, g), argument_error);
  CHECK_THROWS_AS(solve_dirichlet(S, DiskMask{1.0}, 3, g), argument_error);
  CHECK_THROWS_AS(solve_dirichlet(S, DiskMask{1.0}, 16, BoundaryFn{}), argument_error);
  CHECK_THROWS_AS(solve_dirichlet(S, DiskMask{-1.0}, 16, g), argument_error);
  CHECK_THROWS_AS(solve_dirichlet(S, AnnulusMask{0.5, 0.2}, 16, g), argument_error);
  CHECK_THROWS_AS(solve_dirichlet(S, AnnulusMask{0.0, 1.0}, 16, g), argument_error);
  CHECK_THROWS_AS(solve_dirichlet(S, BoxMask{v2(0, 0), v2(1, 2)}, 16, g), argument_error);
  CHECK_THROWS_AS(solve_dirichlet(S, BoxMask{v2(1, 1), v2(0, 0)}, 16, g), argument_error);

  const SolveSolution tiny = solve_dirichlet(S, unit_box(0, 1), 4, g);
  CHECK_THROWS_AS(residual_check(S, tiny), argument_error);  // 5 nodes per axis

  const SolveSolution sol = solve_dirichlet(S, unit_box(0.1, 0.9), 16, g);
  Vec p3(3);
  p3 << 0.5, 0.5, 0.5;
  CHECK_THROWS_AS(sol.interpolant().value(p3), argument_error);
}

}  // TEST_SUITE
