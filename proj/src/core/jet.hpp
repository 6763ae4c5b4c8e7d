#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "core/params.hpp"

namespace grushin {

// Forward-mode jets. Jet2 carries value/gradient/Hessian w.r.t. m seed
// variables and propagates them through arithmetic exactly (equivalent to
// dual numbers nested to order two). It serves two roles:
//   * independent differentiation oracle for the closed-form derivatives,
//   * exact differentiation of user-supplied callables (surfaces, fields),
// so nothing in the library ever falls back to finite differences.

struct Jet1 {
  double v = 0.0;
  Vec g;

  Jet1() = default;
  Jet1(double value, Vec grad) : v(value), g(std::move(grad)) {}
  static Jet1 constant(double c, int m) { return {c, Vec::Zero(m)}; }
};

inline Jet1 operator+(const Jet1& a, const Jet1& b) { return {a.v + b.v, a.g + b.g}; }
inline Jet1 operator-(const Jet1& a, const Jet1& b) { return {a.v - b.v, a.g - b.g}; }
inline Jet1 operator-(const Jet1& a) { return {-a.v, -a.g}; }
inline Jet1 operator*(const Jet1& a, const Jet1& b) { return {a.v * b.v, a.v * b.g + b.v * a.g}; }
inline Jet1 operator*(double c, const Jet1& a) { return {c * a.v, c * a.g}; }
inline Jet1 operator*(const Jet1& a, double c) { return c * a; }
inline Jet1 operator+(const Jet1& a, double c) { return {a.v + c, a.g}; }
inline Jet1 operator-(const Jet1& a, double c) { return {a.v - c, a.g}; }
inline Jet1 operator/(const Jet1& a, const Jet1& b) {
  const double iv = 1.0 / b.v;
  return {a.v * iv, (a.g - (a.v * iv) * b.g) * iv};
}

struct Jet2 {
  double v = 0.0;
  Vec g;
  Mat h;

  Jet2() = default;
  Jet2(double value, Vec grad, Mat hess) : v(value), g(std::move(grad)), h(std::move(hess)) {}

  static Jet2 constant(double c, int m) { return {c, Vec::Zero(m), Mat::Zero(m, m)}; }
  static Jet2 variable(double x, int i, int m) {
    Jet2 j = constant(x, m);
    j.g(i) = 1.0;
    return j;
  }
  int dim() const { return static_cast<int>(g.size()); }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) { return {a.v + b.v, a.g + b.g, a.h + b.h}; }
inline Jet2 operator-(const Jet2& a, const Jet2& b) { return {a.v - b.v, a.g - b.g, a.h - b.h}; }
inline Jet2 operator-(const Jet2& a) { return {-a.v, -a.g, -a.h}; }
inline Jet2 operator+(const Jet2& a, double c) { return {a.v + c, a.g, a.h}; }
inline Jet2 operator+(double c, const Jet2& a) { return a + c; }
inline Jet2 operator-(const Jet2& a, double c) { return {a.v - c, a.g, a.h}; }
inline Jet2 operator-(double c, const Jet2& a) { return {c - a.v, -a.g, -a.h}; }
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.v * b.v, a.v * b.g + b.v * a.g,
          a.v * b.h + b.v * a.h + a.g * b.g.transpose() + b.g * a.g.transpose()};
}
inline Jet2 operator*(double c, const Jet2& a) { return {c * a.v, c * a.g, c * a.h}; }
inline Jet2 operator*(const Jet2& a, double c) { return c * a; }

// Composition with a scalar C^2 function given f(a), f'(a), f''(a).
inline Jet2 compose(const Jet2& a, double f, double fp, double fpp) {
  return {f, fp * a.g, fp * a.h + fpp * (a.g * a.g.transpose())};
}

inline Jet2 inverse(const Jet2& a) {
  const double iv = 1.0 / a.v;
  return compose(a, iv, -iv * iv, 2.0 * iv * iv * iv);
}
inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * inverse(b); }
inline Jet2 operator/(double c, const Jet2& b) { return c * inverse(b); }
inline Jet2 operator/(const Jet2& a, double c) { return (1.0 / c) * a; }

inline Jet2 pow(const Jet2& a, double e) {
  const double f = std::pow(a.v, e);
  const double fp = e * std::pow(a.v, e - 1.0);
  const double fpp = e * (e - 1.0) * std::pow(a.v, e - 2.0);
  return compose(a, f, fp, fpp);
}
inline Jet2 sqrt(const Jet2& a) {
  const double f = std::sqrt(a.v);
  return compose(a, f, 0.5 / f, -0.25 / (f * a.v));
}
inline Jet2 exp(const Jet2& a) {
  const double f = std::exp(a.v);
  return compose(a, f, f, f);
}
inline Jet2 log(const Jet2& a) {
  const double iv = 1.0 / a.v;
  return compose(a, std::log(a.v), iv, -iv * iv);
}
inline Jet2 sin(const Jet2& a) { return compose(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Jet2 cos(const Jet2& a) { return compose(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }

// |w|^2 for a vector of jets; the workhorse for radial expressions.
template <typename It>
inline Jet2 squared_norm(It first, It last) {
  Jet2 s = Jet2::constant(0.0, first->dim());
  for (It it = first; it != last; ++it) s = s + (*it) * (*it);
  return s;
}

}  // namespace grushin
