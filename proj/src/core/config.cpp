#include "core/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace grushin {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

struct RawEntry {
  std::string value;
  int line = 0;
  bool used = false;
};

class RawConfig {
 public:
  RawConfig(const std::string& text, std::string origin) : origin_(std::move(origin)) {
    std::istringstream in(text);
    std::string line, section;
    int no = 0;
    while (std::getline(in, line)) {
      ++no;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(no, "unterminated section header");
        section = lower(trim(line.substr(1, line.size() - 2)));
        if (section.empty()) fail(no, "empty section name");
        continue;
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos) fail(no, "expected key = value");
      if (section.empty()) fail(no, "key outside any [section]");
      const std::string key = lower(trim(line.substr(0, eq)));
      if (key.empty()) fail(no, "empty key");
      const std::string full = section + "." + key;
      if (entries_.count(full)) fail(no, "duplicate key '" + full + "'");
      entries_[full] = RawEntry{trim(line.substr(eq + 1)), no, false};
    }
  }

  const std::string* take(const std::string& full) {
    auto it = entries_.find(full);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second.value;
  }

  void finish() const {
    for (const auto& [k, e] : entries_)
      if (!e.used) fail(e.line, "unknown key '" + k + "'");
  }

  [[noreturn]] void fail(int line, const std::string& what) const {
    throw argument_error(origin_ + ":" + std::to_string(line) + ": " + what);
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
  std::map<std::string, RawEntry> entries_;
};

[[noreturn]] void bad_value(const std::string& key, const std::string& v, const char* want) {
  throw argument_error("config key '" + key + "': cannot read '" + v + "' as " + want);
}

double as_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(d))
    bad_value(key, v, "a finite number");
  return d;
}

long as_long(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE) bad_value(key, v, "an integer");
  return x;
}

std::uint64_t as_u64(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE) bad_value(key, v, "an unsigned integer");
  return static_cast<std::uint64_t>(x);
}

bool as_bool(const std::string& key, const std::string& v) {
  const std::string s = lower(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  bad_value(key, v, "a boolean");
}

std::vector<double> as_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) bad_value(key, v, "a comma-separated number list");
    out.push_back(as_double(key, item));
  }
  if (out.empty()) bad_value(key, v, "a comma-separated number list");
  return out;
}

std::vector<MonomialTerm> as_terms(const std::string& key, const std::string& v) {
  // reuse the surface-spec monomial grammar: "1,0=2;0,1=-0.5"
  try {
    SurfaceSpec s = parse_surface_spec("monomial:" + v);
    return std::get<MonomialSpec>(s).terms;
  } catch (const argument_error& e) {
    throw argument_error("config key '" + key + "': " + e.what());
  }
}

Domain as_domain(const std::string& key, const std::string& v, int n) {
  const std::string s = trim(v);
  if (s.rfind("ball:", 0) == 0) {
    const double R = as_double(key, trim(s.substr(5)));
    if (!(R > 0.0)) bad_value(key, v, "a ball with positive radius");
    return BallDomain{R};
  }
  if (s.rfind("box:", 0) == 0) {
    const std::vector<double> c = as_list(key, s.substr(4));
    if (static_cast<int>(c.size()) != 2 * n) bad_value(key, v, "a box with 2n coordinates");
    Vec lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      lo(i) = c[i];
      hi(i) = c[n + i];
      if (!(lo(i) < hi(i))) bad_value(key, v, "a box with lo < hi");
    }
    return BoxDomain{lo, hi};
  }
  bad_value(key, v, "'ball:<R>' or 'box:<lo...,hi...>'");
}

SolveMask as_mask(const std::string& key, const std::string& v) {
  const std::string s = trim(v);
  if (s.rfind("disk:", 0) == 0) return DiskMask{as_double(key, trim(s.substr(5)))};
  if (s.rfind("annulus:", 0) == 0) {
    const std::vector<double> c = as_list(key, s.substr(8));
    if (c.size() != 2) bad_value(key, v, "'annulus:<R0>,<R1>'");
    return AnnulusMask{c[0], c[1]};
  }
  if (s.rfind("box:", 0) == 0) {
    const std::vector<double> c = as_list(key, s.substr(4));
    if (c.size() != 4) bad_value(key, v, "'box:<lo0>,<lo1>,<hi0>,<hi1>'");
    Vec lo(2), hi(2);
    lo << c[0], c[1];
    hi << c[2], c[3];
    return BoxMask{lo, hi};
  }
  bad_value(key, v, "'disk:<R>', 'annulus:<R0>,<R1>' or 'box:...'");
}

FieldSpec as_field(const std::string& key, const std::string& v) {
  FieldSpec f;
  f.text = trim(v);
  const std::string s = f.text;
  if (s == "solution") {
    f.kind = FieldSpec::Kind::solution;
  } else if (s.rfind("constant:", 0) == 0) {
    f.kind = FieldSpec::Kind::constant;
    f.value = as_double(key, trim(s.substr(9)));
  } else if (s.rfind("rho-power:", 0) == 0) {
    f.kind = FieldSpec::Kind::rho_power;
    f.value = as_double(key, trim(s.substr(10)));
    if (!(f.value >= 1.0)) bad_value(key, v, "a gauge power with exponent >= 1");
  } else if (s.rfind("polynomial:", 0) == 0) {
    f.kind = FieldSpec::Kind::polynomial;
    f.terms = as_terms(key, s.substr(11));
  } else {
    bad_value(key, v, "'constant:<c>', 'polynomial:<terms>', 'rho-power:<k>' or 'solution'");
  }
  return f;
}

BoundarySpec as_boundary(const std::string& key, const std::string& v) {
  BoundarySpec b;
  b.text = trim(v);
  const std::string s = b.text;
  if (s.rfind("constant:", 0) == 0) {
    b.kind = BoundarySpec::Kind::constant;
    b.v0 = as_double(key, trim(s.substr(9)));
  } else if (s.rfind("levels:", 0) == 0) {
    const std::vector<double> c = as_list(key, s.substr(7));
    if (c.size() != 2) bad_value(key, v, "'levels:<inner>,<outer>'");
    b.kind = BoundarySpec::Kind::levels;
    b.v0 = c[0];
    b.v1 = c[1];
  } else if (s.rfind("polynomial:", 0) == 0) {
    b.kind = BoundarySpec::Kind::polynomial;
    b.terms = as_terms(key, s.substr(11));
  } else {
    bad_value(key, v, "'constant:<v>', 'levels:<vin>,<vout>' or 'polynomial:<terms>'");
  }
  return b;
}

MVFMode as_mode(const std::string& key, const std::string& v) {
  const std::string s = lower(trim(v));
  if (s == "harmonic") return MVFMode::harmonic;
  if (s == "sub" || s == "subharmonic") return MVFMode::subharmonic;
  if (s == "super" || s == "superharmonic") return MVFMode::superharmonic;
  bad_value(key, v, "'harmonic', 'sub' or 'super'");
}

}  // namespace

void select_suite(RunConfig& cfg, const std::string& name) {
  const std::string s = lower(trim(name));
  if (s == "identities")
    cfg.suites.identities = true;
  else if (s == "qsigma")
    cfg.suites.qsigma = true;
  else if (s == "profile")
    cfg.suites.profile = true;
  else if (s == "mvf")
    cfg.suites.mvf = true;
  else if (s == "solve")
    cfg.suites.solve = true;
  else if (s == "certificate")
    cfg.suites.certificate = true;
  else
    throw argument_error("unknown suite '" + name + "'");
}

void validate_config(const RunConfig& cfg) {
  if (!cfg.r_grid.empty()) {
    for (const double r : cfg.r_grid)
      if (!(r > 0.0) || !std::isfinite(r)) throw argument_error("r_grid radii must be positive");
    for (std::size_t i = 1; i < cfg.r_grid.size(); ++i)
      if (!(cfg.r_grid[i] > cfg.r_grid[i - 1]))
        throw argument_error("r_grid must be strictly increasing");
  }
  if ((cfg.suites.profile || cfg.suites.mvf) && cfg.r_grid.empty())
    throw argument_error("profile/mvf suites need a non-empty [profile] r_grid");
  if (cfg.suites.mvf && cfg.field.kind == FieldSpec::Kind::none)
    throw argument_error("mvf suite needs a [field] spec");
  if (cfg.suites.mvf && cfg.field.kind == FieldSpec::Kind::solution && !cfg.suites.solve)
    throw argument_error("field 'solution' needs the solve suite enabled");
  if (cfg.field.kind == FieldSpec::Kind::solution && cfg.params.n != 2)
    throw argument_error("field 'solution' needs n = 2");
  if (cfg.suites.solve && cfg.params.n != 2) throw argument_error("solve suite needs n = 2");
  if (cfg.suites.solve && cfg.cells < 4) throw argument_error("solve needs cells >= 4");
  if (cfg.points < 1) throw argument_error("sampling points must be >= 1");
  if (cfg.directions < 1) throw argument_error("sampling directions must be >= 1");
  if (!(cfg.identities_tol > 0.0) || !(cfg.qsigma_tol > 0.0) || !(cfg.mvf_tol > 0.0) ||
      !(cfg.certificate_tol > 0.0))
    throw argument_error("tolerances must be > 0");
  if (!(cfg.qsigma_rmax > 0.0)) throw argument_error("qsigma rmax must be > 0");
  if (cfg.qsigma_radii < 1) throw argument_error("qsigma radii count must be >= 1");
  if (!(cfg.quad.rel_tol >= 0.0) || !(cfg.quad.abs_tol >= 0.0))
    throw argument_error("quadrature tolerances must be >= 0");
  if (cfg.quad.max_evals < 1000) throw argument_error("quadrature max_evals must be >= 1000");
  if (cfg.quad.workers < 1 || cfg.quad.workers > 64)
    throw argument_error("quadrature workers must be in [1, 64]");
  if (cfg.expect_qsigma) {
    const std::string& e = *cfg.expect_qsigma;
    if (e != "harmonic" && e != "subharmonic" && e != "superharmonic" && e != "indefinite")
      throw argument_error("expect.qsigma must name a classification");
  }
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RawConfig raw(text, origin);
  RunConfig cfg;

  int n = 2;
  double alpha = 1.0;
  if (const auto* v = raw.take("params.n")) {
    const long x = as_long("params.n", *v);
    if (x < 1 || x > 16) throw argument_error("params.n must be in [1, 16]");
    n = static_cast<int>(x);
  }
  if (const auto* v = raw.take("params.alpha")) alpha = as_double("params.alpha", *v);
  cfg.params = Params(n, alpha);

  if (const auto* v = raw.take("surface.spec")) cfg.surface = parse_surface_spec(*v);
  if (const auto* v = raw.take("surface.domain"))
    cfg.domain = as_domain("surface.domain", *v, cfg.params.n);

  if (const auto* v = raw.take("field.spec")) cfg.field = as_field("field.spec", *v);

  const std::pair<const char*, bool SuiteSelection::*> suite_keys[] = {
      {"suites.identities", &SuiteSelection::identities}, {"suites.qsigma", &SuiteSelection::qsigma},
      {"suites.profile", &SuiteSelection::profile},       {"suites.mvf", &SuiteSelection::mvf},
      {"suites.solve", &SuiteSelection::solve},           {"suites.certificate", &SuiteSelection::certificate}};
  for (const auto& [key, member] : suite_keys)
    if (const auto* v = raw.take(key)) cfg.suites.*member = as_bool(key, *v);

  if (const auto* v = raw.take("sampling.seed")) cfg.seed = as_u64("sampling.seed", *v);
  if (const auto* v = raw.take("sampling.points"))
    cfg.points = static_cast<int>(as_long("sampling.points", *v));
  if (const auto* v = raw.take("sampling.directions"))
    cfg.directions = static_cast<int>(as_long("sampling.directions", *v));

  if (const auto* v = raw.take("identities.tol")) cfg.identities_tol = as_double("identities.tol", *v);
  if (const auto* v = raw.take("qsigma.tol")) cfg.qsigma_tol = as_double("qsigma.tol", *v);
  if (const auto* v = raw.take("qsigma.rmax")) cfg.qsigma_rmax = as_double("qsigma.rmax", *v);
  if (const auto* v = raw.take("qsigma.radii"))
    cfg.qsigma_radii = static_cast<int>(as_long("qsigma.radii", *v));

  if (const auto* v = raw.take("profile.r_grid")) cfg.r_grid = as_list("profile.r_grid", *v);

  if (const auto* v = raw.take("mvf.mode")) cfg.mvf_mode = as_mode("mvf.mode", *v);
  if (const auto* v = raw.take("mvf.tol")) cfg.mvf_tol = as_double("mvf.tol", *v);

  if (const auto* v = raw.take("quadrature.rel_tol")) cfg.quad.rel_tol = as_double("quadrature.rel_tol", *v);
  if (const auto* v = raw.take("quadrature.abs_tol")) cfg.quad.abs_tol = as_double("quadrature.abs_tol", *v);
  if (const auto* v = raw.take("quadrature.max_evals")) {
    const long x = as_long("quadrature.max_evals", *v);
    if (x < 0) throw argument_error("quadrature.max_evals must be >= 0");
    cfg.quad.max_evals = static_cast<std::size_t>(x);
  }
  if (const auto* v = raw.take("quadrature.workers"))
    cfg.quad.workers = static_cast<int>(as_long("quadrature.workers", *v));

  if (const auto* v = raw.take("solve.mask")) cfg.mask = as_mask("solve.mask", *v);
  if (const auto* v = raw.take("solve.cells")) cfg.cells = static_cast<int>(as_long("solve.cells", *v));
  if (const auto* v = raw.take("solve.boundary")) cfg.boundary = as_boundary("solve.boundary", *v);

  if (const auto* v = raw.take("certificate.tol"))
    cfg.certificate_tol = as_double("certificate.tol", *v);

  if (const auto* v = raw.take("expect.qsigma")) cfg.expect_qsigma = lower(trim(*v));
  if (const auto* v = raw.take("expect.certificate"))
    cfg.expect_certificate = as_bool("expect.certificate", *v);

  if (const auto* v = raw.take("output.json")) cfg.json_path = trim(*v);
  if (const auto* v = raw.take("output.csv")) cfg.csv_path = trim(*v);

  raw.finish();
  validate_config(cfg);
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw argument_error("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace grushin
