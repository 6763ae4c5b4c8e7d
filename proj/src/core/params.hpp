#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace grushin {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Thrown when an argument is structurally invalid (bad sizes, bad spec strings,
// out-of-range configuration values).
class argument_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a point lies outside the mathematical domain of an operation
// (e.g. derivative quantities at the degenerate origin).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Thrown when a numeric routine cannot reach its target (budget exhaustion in
// a context where a partial result cannot be returned, singular systems, ...).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a report or output file cannot be written.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ambient space parameters: R^n_x x R_y carrying the vector fields
//   X_i = d/dx_i (i = 1..n),   X_{n+1} = |x|^alpha d/dy.
struct Params {
  int n = 2;
  double alpha = 1.0;

  Params() = default;
  Params(int n_, double alpha_) : n(n_), alpha(alpha_) {
    if (n < 1) throw argument_error("Params: n must be >= 1, got " + std::to_string(n));
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw argument_error("Params: alpha must be a finite real > 0, got " + std::to_string(alpha));
  }
  // Homogeneous dimension n + alpha appears as the exponent of the volume
  // growth of gauge balls on a graph through the origin.
  double homogeneous_order() const { return static_cast<double>(n) + alpha; }
};

// Ambient point xi = (x, y).
struct Point {
  Vec x;
  double y = 0.0;

  Point() = default;
  Point(Vec x_, double y_) : x(std::move(x_)), y(y_) {}
};

inline void check_dim(const Params& p, const Vec& x, const char* who) {
  if (x.size() != p.n)
    throw argument_error(std::string(who) + ": x has dimension " + std::to_string(x.size()) +
                         ", expected " + std::to_string(p.n));
}

}  // namespace grushin
