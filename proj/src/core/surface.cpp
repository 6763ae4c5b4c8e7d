#include "core/surface.hpp"

#include <cstdio>
#include <sstream>

namespace grushin {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

bool is_even_integer(double m) {
  const double r = std::round(m);
  return std::abs(m - r) < 1e-12 && std::llround(r) % 2 == 0;
}

}  // namespace

bool domain_contains(const Domain& d, const Vec& x) {
  if (const auto* b = std::get_if<BallDomain>(&d)) return x.norm() <= b->R;
  const auto& bx = std::get<BoxDomain>(d);
  return (x.array() >= bx.lo.array()).all() && (x.array() <= bx.hi.array()).all();
}

void domain_bounds(const Domain& d, int n, Vec& lo, Vec& hi) {
  if (const auto* b = std::get_if<BallDomain>(&d)) {
    lo = Vec::Constant(n, -b->R);
    hi = Vec::Constant(n, b->R);
  } else {
    const auto& bx = std::get<BoxDomain>(d);
    lo = bx.lo;
    hi = bx.hi;
  }
}

bool domain_contains_ball(const Domain& d, int n, double r) {
  if (const auto* b = std::get_if<BallDomain>(&d)) return r <= b->R;
  const auto& bx = std::get<BoxDomain>(d);
  for (int i = 0; i < n; ++i)
    if (bx.lo(i) > -r || bx.hi(i) < r) return false;
  return true;
}

GraphSurface::GraphSurface(Params P, SurfaceSpec spec, Domain domain)
    : P_(P), domain_(std::move(domain)), name_(spec_name(spec)) {
  const int n = P_.n;
  {
    Vec lo, hi;
    domain_bounds(domain_, n, lo, hi);
    if (!domain_contains(domain_, Vec::Zero(n)))
      throw argument_error("GraphSurface: domain must contain 0 in its interior");
    for (int i = 0; i < n; ++i)
      if (!(lo(i) < 0.0 && hi(i) > 0.0))
        throw argument_error("GraphSurface: domain must contain 0 in its interior");
  }

  if (std::holds_alternative<FlatSpec>(spec)) {
    eval_ = [n](const Vec&, int order, UJet& j) {
      j.value = 0.0;
      if (order >= 1) j.grad = Vec::Zero(n);
      if (order >= 2) j.hess = Mat::Zero(n, n);
    };
  } else if (const auto* rp = std::get_if<RadialPowerSpec>(&spec)) {
    const double c = rp->c, m = rp->m;
    if (!(m >= 2.0))
      throw argument_error("radial-power: exponent m = " + num(m) +
                           " gives a graph that is not C^2 at 0 (need m >= 2)");
    if (!is_even_integer(m) && m < P_.alpha + 1.0)
      throw argument_error("radial-power: fractional exponent m = " + num(m) +
                           " in (2, alpha+1) has marginal regularity at 0 and is rejected");
    // u = c (|x|^2)^{m/2}; differentiating the scalar profile in t = |x|^2
    // avoids cancellation near x = 0.
    eval_ = [n, c, m](const Vec& x, int order, UJet& j) {
      const double t = x.squaredNorm();
      j.value = c * std::pow(t, 0.5 * m);
      if (order < 1) return;
      if (t == 0.0) {
        j.grad = Vec::Zero(n);
        if (order >= 2) j.hess = (m == 2.0) ? Mat(2.0 * c * Mat::Identity(n, n)) : Mat(Mat::Zero(n, n));
        return;
      }
      const double p1 = c * m * std::pow(t, 0.5 * m - 1.0);
      j.grad = p1 * x;
      if (order >= 2) {
        const double p2 = (m == 2.0) ? 0.0 : c * m * (m - 2.0) * std::pow(t, 0.5 * m - 2.0);
        j.hess = p1 * Mat::Identity(n, n) + p2 * (x * x.transpose());
      }
    };
  } else if (const auto* mo = std::get_if<MonomialSpec>(&spec)) {
    for (const auto& t : mo->terms) {
      if (static_cast<int>(t.exponents.size()) != n)
        throw argument_error("monomial: exponent tuple size must equal n");
      for (int e : t.exponents)
        if (e < 0) throw argument_error("monomial: exponents must be >= 0");
    }
    const auto terms = mo->terms;
    eval_ = [terms](const Vec& x, int order, UJet& j) { monomial_jet(terms, x, order, j); };
  } else {
    const auto& cu = std::get<CustomSpec>(spec);
    if (!cu.u) throw argument_error("custom surface: missing callable");
    eval_ = [n, f = cu.u](const Vec& x, int order, UJet& j) {
      std::vector<Jet2> vars;
      vars.reserve(n);
      for (int i = 0; i < n; ++i) vars.push_back(Jet2::variable(x(i), i, n));
      const Jet2 r = f(vars);
      j.value = r.v;
      if (order >= 1) j.grad = r.g;
      if (order >= 2) j.hess = r.h;
    };
  }
}

double GraphSurface::u(const Vec& x) const {
  check_dim(P_, x, "GraphSurface::u");
  UJet j;
  eval_(x, 0, j);
  return j.value;
}

UJet GraphSurface::u_jet(const Vec& x, int order) const {
  check_dim(P_, x, "GraphSurface::u_jet");
  UJet j;
  eval_(x, order, j);
  return j;
}

void monomial_jet(const std::vector<MonomialTerm>& terms, const Vec& x, int order, UJet& j) {
  const int n = static_cast<int>(x.size());
  j.value = 0.0;
  if (order >= 1) j.grad = Vec::Zero(n);
  if (order >= 2) j.hess = Mat::Zero(n, n);
  for (const auto& t : terms) {
    double val = t.coeff;
    for (int i = 0; i < n; ++i) val *= ipow(x(i), t.exponents[i]);
    j.value += val;
    if (order < 1) continue;
    for (int i = 0; i < n; ++i) {
      const int ei = t.exponents[i];
      if (ei == 0) continue;
      double gi = t.coeff * ei * ipow(x(i), ei - 1);
      for (int k = 0; k < n; ++k)
        if (k != i) gi *= ipow(x(k), t.exponents[k]);
      j.grad(i) += gi;
      if (order < 2) continue;
      for (int l = i; l < n; ++l) {
        const int el = t.exponents[l];
        double hil;
        if (l == i) {
          if (ei < 2) continue;
          hil = t.coeff * ei * (ei - 1) * ipow(x(i), ei - 2);
          for (int k = 0; k < n; ++k)
            if (k != i) hil *= ipow(x(k), t.exponents[k]);
        } else {
          if (el == 0) continue;
          hil = t.coeff * ei * el * ipow(x(i), ei - 1) * ipow(x(l), el - 1);
          for (int k = 0; k < n; ++k)
            if (k != i && k != l) hil *= ipow(x(k), t.exponents[k]);
        }
        j.hess(i, l) += hil;
        if (l != i) j.hess(l, i) += hil;
      }
    }
  }
}

SurfaceSpec parse_surface_spec(const std::string& s) {
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (head == "flat") return FlatSpec{};
  if (head == "radial-power") {
    RadialPowerSpec rp;
    bool have_c = false, have_m = false;
    std::istringstream is(rest);
    std::string kv;
    while (std::getline(is, kv, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw argument_error("radial-power: expected key=value, got '" + kv + "'");
      const std::string k = kv.substr(0, eq);
      const double v = std::stod(kv.substr(eq + 1));
      if (k == "c") rp.c = v, have_c = true;
      else if (k == "m") rp.m = v, have_m = true;
      else throw argument_error("radial-power: unknown key '" + k + "'");
    }
    if (!have_c || !have_m) throw argument_error("radial-power: needs c= and m=");
    return rp;
  }
  if (head == "monomial") {
    MonomialSpec mo;
    std::istringstream is(rest);
    std::string term;
    while (std::getline(is, term, ';')) {
      if (term.empty()) continue;
      const auto eq = term.find('=');
      if (eq == std::string::npos) throw argument_error("monomial: expected exps=coeff, got '" + term + "'");
      MonomialTerm t;
      t.coeff = std::stod(term.substr(eq + 1));
      std::istringstream es(term.substr(0, eq));
      std::string e;
      while (std::getline(es, e, ',')) t.exponents.push_back(std::stoi(e));
      mo.terms.push_back(std::move(t));
    }
    if (mo.terms.empty()) throw argument_error("monomial: no terms given");
    return mo;
  }
  throw argument_error("unknown surface spec '" + s + "' (expected flat / radial-power / monomial)");
}

std::string spec_name(const SurfaceSpec& spec) {
  if (std::holds_alternative<FlatSpec>(spec)) return "flat";
  if (const auto* rp = std::get_if<RadialPowerSpec>(&spec))
    return "radial-power:c=" + num(rp->c) + ",m=" + num(rp->m);
  if (const auto* mo = std::get_if<MonomialSpec>(&spec)) {
    std::string s = "monomial:";
    bool first_term = true;
    for (const auto& t : mo->terms) {
      if (!first_term) s += ";";
      first_term = false;
      for (size_t i = 0; i < t.exponents.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(t.exponents[i]);
      }
      s += "=" + num(t.coeff);
    }
    return s;
  }
  return std::get<CustomSpec>(spec).label;
}

GraphSurface make_surface(const Params& P, const SurfaceSpec& spec, const Domain& domain) {
  return GraphSurface(P, spec, domain);
}

double area_element(const GraphSurface& S, const Vec& x) {
  const UJet j = S.u_jet(x, 1);
  const double a2 = std::pow(x.squaredNorm(), S.params().alpha);
  return std::sqrt(j.grad.squaredNorm() + a2);
}

AlphaNormal alpha_normal(const GraphSurface& S, const Vec& x) {
  const UJet j = S.u_jet(x, 1);
  const double a = std::pow(x.squaredNorm(), 0.5 * S.params().alpha);
  const double v = std::sqrt(j.grad.squaredNorm() + a * a);
  if (v < 1e-150)
    throw domain_error("alpha_normal: direction undefined where |grad u| and |x|^alpha both vanish");
  return {-j.grad / v, a / v};
}

double mean_curvature(const GraphSurface& S, const Vec& x) {
  const Params& P = S.params();
  const double s2 = x.squaredNorm();
  if (s2 <= 0.0) throw domain_error("mean_curvature: needs x != 0");
  const UJet j = S.u_jet(x, 2);
  const double a2 = std::pow(s2, P.alpha);
  const double v = std::sqrt(j.grad.squaredNorm() + a2);
  // grad v = (hess u * grad u + alpha |x|^{2(alpha-1)} x) / v
  const Vec dv = (j.hess * j.grad + P.alpha * std::pow(s2, P.alpha - 1.0) * x) / v;
  return (j.hess.trace() / v - j.grad.dot(dv) / (v * v)) / P.n;
}

double euler_residual(const GraphSurface& S, const Vec& x) {
  const UJet j = S.u_jet(x, 1);
  return j.grad.dot(x) - (S.params().alpha + 1.0) * j.value;
}

}  // namespace grushin
