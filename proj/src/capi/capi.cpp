#include "grushin/grushin.h"

#include "core/quadrature.hpp"
#include "core/runner.hpp"
#include "core/tangential.hpp"

#include <new>
#include <string>

struct grushin_params {
  grushin::Params p;
};
struct grushin_surface {
  grushin::GraphSurface s;
};
struct grushin_run {
  grushin::RunResult r;
};

namespace {

thread_local std::string t_last_error;

template <typename Fn>
grushin_status guarded(Fn&& fn) {
  try {
    fn();
    return GRUSHIN_OK;
  } catch (const grushin::argument_error& e) {
    t_last_error = e.what();
    return GRUSHIN_ERR_ARGUMENT;
  } catch (const grushin::domain_error& e) {
    t_last_error = e.what();
    return GRUSHIN_ERR_DOMAIN;
  } catch (const grushin::numeric_error& e) {
    t_last_error = e.what();
    return GRUSHIN_ERR_NUMERIC;
  } catch (const grushin::io_error& e) {
    t_last_error = e.what();
    return GRUSHIN_ERR_IO;
  } catch (const std::invalid_argument& e) {
    t_last_error = e.what();
    return GRUSHIN_ERR_ARGUMENT;
  } catch (const std::out_of_range& e) {
    t_last_error = e.what();
    return GRUSHIN_ERR_ARGUMENT;
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return GRUSHIN_ERR_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return GRUSHIN_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown failure";
    return GRUSHIN_ERR_INTERNAL;
  }
}

grushin_status need(bool ok, const char* what) {
  if (ok) return GRUSHIN_OK;
  t_last_error = what;
  return GRUSHIN_ERR_ARGUMENT;
}

grushin::Vec to_vec(const double* x, int n) {
  grushin::Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = x[i];
  return v;
}

grushin_status run_common(const char* text_or_path, bool is_path, const char* origin,
                          const char* const* suites, int nsuites, const char* out_dir,
                          int* exit_code, grushin_run** out) {
  if (auto st = need(text_or_path && exit_code && out, "null argument"); st != GRUSHIN_OK) return st;
  if (auto st = need(nsuites == 0 || suites, "null suites array with nsuites > 0"); st != GRUSHIN_OK)
    return st;
  *out = nullptr;
  return guarded([&] {
    grushin::RunConfig cfg = is_path
                                 ? grushin::parse_config_file(text_or_path)
                                 : grushin::parse_config_text(text_or_path,
                                                              origin && *origin ? origin : "<config>");
    if (nsuites > 0) {
      cfg.suites = {};
      for (int i = 0; i < nsuites; ++i) {
        if (!suites[i]) throw grushin::argument_error("null suite name");
        grushin::select_suite(cfg, suites[i]);
      }
      grushin::validate_config(cfg);
    }
    auto* run = new grushin_run{grushin::run_config(cfg, out_dir ? out_dir : "")};
    *exit_code = run->r.exit_code;
    *out = run;
  });
}

}  // namespace

extern "C" {

const char* grushin_last_error(void) { return t_last_error.c_str(); }

grushin_status grushin_params_create(int n, double alpha, grushin_params** out) {
  if (auto st = need(out != nullptr, "null output pointer"); st != GRUSHIN_OK) return st;
  *out = nullptr;
  return guarded([&] { *out = new grushin_params{grushin::Params(n, alpha)}; });
}

void grushin_params_destroy(grushin_params* p) { delete p; }

grushin_status grushin_gauge(const grushin_params* p, const double* x, double y, double* rho) {
  if (auto st = need(p && x && rho, "null argument"); st != GRUSHIN_OK) return st;
  return guarded([&] { *rho = grushin::rho(p->p, grushin::Point(to_vec(x, p->p.n), y)); });
}

grushin_status grushin_fundamental_solution(const grushin_params* p, const double* x, double y,
                                            double* gamma) {
  if (auto st = need(p && x && gamma, "null argument"); st != GRUSHIN_OK) return st;
  return guarded(
      [&] { *gamma = grushin::fundamental_solution(p->p, grushin::Point(to_vec(x, p->p.n), y)); });
}

grushin_status grushin_surface_create(const grushin_params* p, const char* spec,
                                      const char* domain, grushin_surface** out) {
  if (auto st = need(p && spec && domain && out, "null argument"); st != GRUSHIN_OK) return st;
  *out = nullptr;
  return guarded([&] {
    grushin::SurfaceSpec sp = grushin::parse_surface_spec(spec);
    grushin::Domain dom;
    const std::string d(domain);
    if (d.rfind("ball:", 0) == 0) {
      const double R = std::stod(d.substr(5));
      if (!(R > 0.0)) throw grushin::argument_error("domain ball radius must be > 0");
      dom = grushin::BallDomain{R};
    } else if (d.rfind("box:", 0) == 0) {
      std::vector<double> c;
      std::size_t pos = 4;
      while (pos < d.size()) {
        std::size_t used = 0;
        c.push_back(std::stod(d.substr(pos), &used));
        pos += used;
        if (pos < d.size() && d[pos] == ',') ++pos;
      }
      if (static_cast<int>(c.size()) != 2 * p->p.n)
        throw grushin::argument_error("domain box needs 2n coordinates");
      grushin::Vec lo(p->p.n), hi(p->p.n);
      for (int i = 0; i < p->p.n; ++i) {
        lo(i) = c[i];
        hi(i) = c[p->p.n + i];
      }
      dom = grushin::BoxDomain{lo, hi};
    } else {
      throw grushin::argument_error("domain must be 'ball:<R>' or 'box:<lo...,hi...>'");
    }
    *out = new grushin_surface{grushin::GraphSurface(p->p, sp, dom)};
  });
}

void grushin_surface_destroy(grushin_surface* s) { delete s; }

const char* grushin_surface_name(const grushin_surface* s) {
  return s ? s->s.name().c_str() : "";
}

grushin_status grushin_surface_height(const grushin_surface* s, const double* x, double* u) {
  if (auto st = need(s && x && u, "null argument"); st != GRUSHIN_OK) return st;
  return guarded([&] { *u = s->s.u(to_vec(x, s->s.params().n)); });
}

grushin_status grushin_area_element(const grushin_surface* s, const double* x, double* v) {
  if (auto st = need(s && x && v, "null argument"); st != GRUSHIN_OK) return st;
  return guarded([&] { *v = grushin::area_element(s->s, to_vec(x, s->s.params().n)); });
}

grushin_status grushin_normal(const grushin_surface* s, const double* x, double* nu) {
  if (auto st = need(s && x && nu, "null argument"); st != GRUSHIN_OK) return st;
  return guarded([&] {
    const int n = s->s.params().n;
    const grushin::AlphaNormal an = grushin::alpha_normal(s->s, to_vec(x, n));
    for (int i = 0; i < n; ++i) nu[i] = an.nu_bar(i);
    nu[n] = an.nu_last;
  });
}

grushin_status grushin_mean_curvature(const grushin_surface* s, const double* x, double* H) {
  if (auto st = need(s && x && H, "null argument"); st != GRUSHIN_OK) return st;
  return guarded([&] { *H = grushin::mean_curvature(s->s, to_vec(x, s->s.params().n)); });
}

grushin_status grushin_q_sigma(const grushin_surface* s, const double* x, double* q) {
  if (auto st = need(s && x && q, "null argument"); st != GRUSHIN_OK) return st;
  return guarded([&] { *q = grushin::q_sigma(s->s, to_vec(x, s->s.params().n)); });
}

grushin_status grushin_profile_value(const grushin_surface* s, double r, double rel_tol, double* c,
                                     double* err) {
  if (auto st = need(s && c, "null argument"); st != GRUSHIN_OK) return st;
  return guarded([&] {
    grushin::QuadratureOptions opt;
    if (rel_tol > 0.0) opt.rel_tol = rel_tol;
    const grushin::RadiusSample sample = grushin::profile_sample(s->s, nullptr, r, opt);
    *c = sample.c;
    if (err) *err = sample.c_err;
  });
}

grushin_status grushin_run_config_file(const char* path, const char* const* suites, int nsuites,
                                       const char* out_dir, int* exit_code, grushin_run** out) {
  return run_common(path, true, nullptr, suites, nsuites, out_dir, exit_code, out);
}

grushin_status grushin_run_config_text(const char* text, const char* origin,
                                       const char* const* suites, int nsuites, const char* out_dir,
                                       int* exit_code, grushin_run** out) {
  return run_common(text, false, origin, suites, nsuites, out_dir, exit_code, out);
}

const char* grushin_run_json(const grushin_run* r) { return r ? r->r.json.c_str() : ""; }
const char* grushin_run_csv(const grushin_run* r) { return r ? r->r.csv.c_str() : ""; }
const char* grushin_run_json_path(const grushin_run* r) { return r ? r->r.json_path.c_str() : ""; }
const char* grushin_run_csv_path(const grushin_run* r) { return r ? r->r.csv_path.c_str() : ""; }

void grushin_run_destroy(grushin_run* r) { delete r; }

}  // extern "C"
