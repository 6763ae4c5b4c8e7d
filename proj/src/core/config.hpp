#pragma once

#include "core/quadrature.hpp"
#include "core/solver.hpp"
#include "core/surface.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace grushin {

// Batch-run configuration: a plain sectioned key = value text format.
// Unknown sections or keys are rejected (configuration errors must be loud).
// Schema (defaults in parentheses):
//
//   [params]      n (2), alpha (1)
//   [surface]     spec ("flat"), domain ("ball:1.25")
//   [field]       spec ("")  constant:<c> | polynomial:<terms> | rho-power:<k> | solution
//   [suites]      identities, qsigma, profile, mvf, solve, certificate (all false)
//   [sampling]    seed (20240817), points (120), directions (16)
//   [identities]  tol (1e-8)
//   [qsigma]      tol (1e-8), rmax (1.0), radii (8)
//   [profile]     r_grid (comma list, required by profile/mvf)
//   [mvf]         mode (harmonic|sub|super, default harmonic), tol (1e-3)
//   [quadrature]  rel_tol (1e-8), abs_tol (1e-12), max_evals (20000000), workers (1)
//   [solve]       mask ("disk:1" | "annulus:<R0>,<R1>" | "box:<lo0>,<lo1>,<hi0>,<hi1>"),
//                 cells (64), boundary ("constant:<v>" | "levels:<vin>,<vout>" |
//                 "polynomial:<terms>")
//   [certificate] tol (1e-3)
//   [expect]      qsigma (classification name), certificate (true/false)
//   [output]      json ("report.json"), csv ("profile.csv")

struct FieldSpec {
  enum class Kind { none, constant, polynomial, rho_power, solution };
  Kind kind = Kind::none;
  double value = 0.0;  // constant value, or gauge power exponent
  std::vector<MonomialTerm> terms;
  std::string text;
};

struct BoundarySpec {
  enum class Kind { constant, levels, polynomial };
  Kind kind = Kind::constant;
  double v0 = 0.0, v1 = 0.0;  // constant value, or inner/outer levels
  std::vector<MonomialTerm> terms;
  std::string text = "constant:0";
};

struct SuiteSelection {
  bool identities = false, qsigma = false, profile = false, mvf = false, solve = false,
       certificate = false;
  bool any() const { return identities || qsigma || profile || mvf || solve || certificate; }
};

struct RunConfig {
  Params params{2, 1.0};
  SurfaceSpec surface = FlatSpec{};
  Domain domain = BallDomain{1.25};
  FieldSpec field;
  SuiteSelection suites;
  std::vector<double> r_grid;

  std::uint64_t seed = 20240817ULL;
  int points = 120;
  int directions = 16;

  double identities_tol = 1e-8;
  double qsigma_tol = 1e-8;
  double qsigma_rmax = 1.0;
  int qsigma_radii = 8;
  MVFMode mvf_mode = MVFMode::harmonic;
  double mvf_tol = 1e-3;
  double certificate_tol = 1e-3;

  QuadratureOptions quad;

  SolveMask mask = DiskMask{1.0};
  int cells = 64;
  BoundarySpec boundary;

  std::optional<std::string> expect_qsigma;
  std::optional<bool> expect_certificate;

  std::string json_path = "report.json";
  std::string csv_path = "profile.csv";
};

// Both throw argument_error with a line-anchored diagnostic on any problem.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
RunConfig parse_config_file(const std::string& path);

// Enable exactly the named suite (repeatable); unknown name -> argument_error.
void select_suite(RunConfig& cfg, const std::string& name);

// Structural checks that need the whole config (suite dependencies etc.).
void validate_config(const RunConfig& cfg);

}  // namespace grushin
