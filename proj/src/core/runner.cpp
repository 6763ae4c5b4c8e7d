#include "core/runner.hpp"

#include "core/analysis.hpp"
#include "core/identities.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

namespace grushin {

namespace {

using ordered_json = nlohmann::ordered_json;

// JSON has no infinities; keep the report well-formed and deterministic.
ordered_json json_num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "infinity" : "-infinity";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int env_workers(int fallback) {
  const char* e = std::getenv("GRUSHIN_WORKERS");
  if (!e || !*e) return fallback;
  char* end = nullptr;
  const long w = std::strtol(e, &end, 10);
  if (end == e || *end != '\0' || w < 1 || w > 64)
    throw argument_error("GRUSHIN_WORKERS must be an integer in [1, 64]");
  return static_cast<int>(w);
}

double fit_ball(const Domain& d, int n, double want) {
  double r = want;
  for (int k = 0; k < 60; ++k) {
    if (domain_contains_ball(d, n, r)) return r;
    r *= 0.5;
  }
  throw argument_error("surface domain admits no sampling ball");
}

BoundaryFn make_boundary(const BoundarySpec& b, const SolveMask& mask) {
  switch (b.kind) {
    case BoundarySpec::Kind::constant: {
      const double v = b.v0;
      return [v](const Vec&) { return v; };
    }
    case BoundarySpec::Kind::levels: {
      double split = 0.0;  // inner value inside the split radius, outer beyond
      if (const auto* a = std::get_if<AnnulusMask>(&mask)) split = 0.5 * (a->R0 + a->R1);
      const double vin = b.v0, vout = b.v1;
      return [split, vin, vout](const Vec& x) { return x.norm() <= split ? vin : vout; };
    }
    case BoundarySpec::Kind::polynomial:
    default: {
      const std::vector<MonomialTerm> terms = b.terms;
      return [terms](const Vec& x) {
        UJet j;
        monomial_jet(terms, x, 0, j);
        return j.value;
      };
    }
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw io_error("failed writing '" + path + "'");
}

std::string resolve_path(const std::string& configured, const std::string& out_dir) {
  if (configured.empty()) return "";
  std::filesystem::path p(configured);
  if (!out_dir.empty() && p.is_relative()) p = std::filesystem::path(out_dir) / p;
  return p.string();
}

}  // namespace

RunResult run_config(const RunConfig& cfg, const std::string& out_dir) {
  validate_config(cfg);
  QuadratureOptions quad = cfg.quad;
  quad.workers = env_workers(quad.workers);

  GraphSurface S(cfg.params, cfg.surface, cfg.domain);
  const int n = cfg.params.n;

  if (cfg.suites.profile || cfg.suites.mvf) {
    try {
      for (const double r : cfg.r_grid) validate_radius(S, r);
    } catch (const domain_error& e) {
      throw argument_error(e.what());  // inadmissible radii are config errors
    }
  }

  bool verdict_fail = false;

  // --- suites, dependency order -------------------------------------------
  std::vector<IdentityResult> ids;
  if (cfg.suites.identities) {
    IdentityOptions io;
    io.points = cfg.points;
    io.seed = cfg.seed;
    io.rmax = fit_ball(cfg.domain, n, 1.0);
    io.rmin = io.rmax / 10.0;
    ids = run_identities(S, io);
    for (const auto& r : ids) verdict_fail = verdict_fail || !(r.max_err <= cfg.identities_tol);
  }

  std::optional<HarmonicityVerdict> qs;
  if (cfg.suites.qsigma) {
    SampleSpec ss;
    ss.radii = dyadic_radii(fit_ball(cfg.domain, n, cfg.qsigma_rmax), cfg.qsigma_radii);
    ss.directions = cfg.directions;
    ss.seed = cfg.seed;
    qs = classify_harmonicity(S, ss, cfg.qsigma_tol);
    if (cfg.expect_qsigma && *cfg.expect_qsigma != to_string(qs->classification))
      verdict_fail = true;
  }

  std::optional<SolveSolution> sol;
  double solve_op_residual = 0.0;
  if (cfg.suites.solve) {
    sol = solve_dirichlet(S, cfg.mask, cfg.cells, make_boundary(cfg.boundary, cfg.mask));
    solve_op_residual = residual_check(S, *sol);
  }

  std::optional<ProfileResult> prof;
  if (cfg.suites.profile) prof = constant_profile(S, cfg.r_grid, quad);

  std::optional<MeanValueReport> mvf;
  if (cfg.suites.mvf) {
    SurfaceField f;
    switch (cfg.field.kind) {
      case FieldSpec::Kind::constant:
        f = SurfaceField::constant(n, cfg.field.value);
        break;
      case FieldSpec::Kind::polynomial:
        f = SurfaceField::polynomial(n, cfg.field.terms);
        break;
      case FieldSpec::Kind::rho_power:
        f = SurfaceField::rho_power(S, cfg.field.value);
        break;
      case FieldSpec::Kind::solution:
        f = sol->interpolant();
        break;
      default:
        throw argument_error("mvf suite needs a field spec");
    }
    mvf = check_mvf(S, f, cfg.r_grid, cfg.mvf_mode, cfg.mvf_tol, quad);
    verdict_fail = verdict_fail || !mvf->all_pass;
  }

  std::optional<FlatnessCertificate> cert;
  if (cfg.suites.certificate) {
    CertificateOptions co;
    co.directions = std::max(cfg.directions, 8);
    co.q_tol = cfg.qsigma_tol;
    co.seed = cfg.seed;
    cert = subharmonicity_certificate(S, cfg.certificate_tol, co);
    if (cfg.expect_certificate && *cfg.expect_certificate != cert->overall) verdict_fail = true;
    if (cert->spot_checked && !cert->spot_ok) verdict_fail = true;
  }

  // --- report ---------------------------------------------------------------
  ordered_json rep;
  rep["meta"] = {{"n", n}, {"alpha", cfg.params.alpha}, {"surface", S.name()}, {"seed", cfg.seed}};
  if (cfg.suites.identities) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : ids) arr.push_back({{"name", r.name}, {"max_err", json_num(r.max_err)}});
    rep["identities"] = std::move(arr);
    rep["identities_tol"] = cfg.identities_tol;
  }
  if (qs) {
    rep["qsigma"] = {{"classification", to_string(qs->classification)},
                     {"min", json_num(qs->q_min)},
                     {"max", json_num(qs->q_max)},
                     {"tol", qs->tol}};
  }
  if (prof) {
    ordered_json arr = ordered_json::array();
    for (const auto& s : prof->samples)
      arr.push_back({{"r", s.r}, {"c_r", json_num(s.c)}, {"err", json_num(s.c_err)}});
    rep["profile"] = std::move(arr);
    rep["C"] = json_num(prof->C);
    rep["profile_info"] = {{"c_rmin", json_num(prof->c_rmin)},
                           {"c_extrapolated", json_num(prof->c_extrapolated)},
                           {"used_extrapolation", prof->used_extrapolation},
                           {"is_constant", prof->is_constant},
                           {"spread", json_num(prof->spread)}};
  } else if (mvf) {
    rep["C"] = json_num(mvf->C);
  }
  if (mvf) {
    ordered_json arr = ordered_json::array();
    for (const auto& row : mvf->rows)
      arr.push_back({{"r", row.r},
                     {"M", json_num(row.M)},
                     {"f0", json_num(mvf->f0)},
                     {"verdict", to_string(row.verdict)},
                     {"err", json_num(row.err)}});
    rep["mvf"] = std::move(arr);
    rep["mvf_info"] = {{"mode", to_string(mvf->mode)},
                       {"tol", mvf->tol},
                       {"scale", json_num(mvf->scale)},
                       {"all_pass", mvf->all_pass}};
  }
  if (cert) {
    ordered_json ratios = ordered_json::array();
    for (const double v : cert->ratio_samples) ratios.push_back(json_num(v));
    ordered_json radii = ordered_json::array();
    for (const double v : cert->radii) radii.push_back(v);
    rep["certificate"] = {{"eta_hat", json_num(cert->eta_hat)},
                          {"eta_bound", json_num(cert->eta_bound)},
                          {"condition_i", cert->condition_i},
                          {"radii", std::move(radii)},
                          {"ratio_samples", std::move(ratios)},
                          {"condition_ii", cert->condition_ii},
                          {"overall", cert->overall},
                          {"tol", cert->tol},
                          {"spot_checked", cert->spot_checked},
                          {"q_min_spot", json_num(cert->q_min_spot)},
                          {"spot_ok", cert->spot_ok}};
  }
  if (sol) {
    rep["solve"] = {{"cells", cfg.cells},
                    {"unknowns", sol->unknowns},
                    {"h", json_num(sol->h)},
                    {"residual", json_num(sol->residual)},
                    {"operator_residual", json_num(solve_op_residual)}};
  }

  RunResult out;
  out.exit_code = verdict_fail ? 1 : 0;
  out.json = rep.dump(2) + "\n";

  if (prof || mvf) {
    std::string csv = "r,c_r,C,M_f_r,f0,verdict,err_est\n";
    const std::size_t rows = cfg.r_grid.size();
    for (std::size_t i = 0; i < rows; ++i) {
      const double r = cfg.r_grid[i];
      double c = 0.0, C = 0.0, err = 0.0;
      std::string M, f0, verdict;
      if (mvf) {
        c = mvf->profile.samples[i].c;
        C = mvf->C;
        M = fmt(mvf->rows[i].M);
        f0 = fmt(mvf->f0);
        verdict = to_string(mvf->rows[i].verdict);
        err = mvf->rows[i].err;
      } else {
        c = prof->samples[i].c;
        C = prof->C;
        err = prof->samples[i].c_err;
      }
      csv += fmt(r) + "," + fmt(c) + "," + fmt(C) + "," + M + "," + f0 + "," + verdict + "," +
             fmt(err) + "\n";
    }
    out.csv = std::move(csv);
  }

  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw io_error("cannot create output directory '" + out_dir + "'");
  }
  out.json_path = resolve_path(cfg.json_path, out_dir);
  out.csv_path = out.csv.empty() ? "" : resolve_path(cfg.csv_path, out_dir);
  if (!out.json_path.empty()) write_file(out.json_path, out.json);
  if (!out.csv_path.empty()) write_file(out.csv_path, out.csv);

  return out;
}

}  // namespace grushin
