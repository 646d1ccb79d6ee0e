#pragma once
// Shared numeric vocabulary: tagged extended reals, error types, small
// one-dimensional helpers used across the toolkit.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gls {

/// Raised when inputs violate a documented precondition (CLI exit 2).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure fails to converge (CLI exit 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kLn2 = 0.69314718055994530942;
inline constexpr double kLn10 = 2.30258509299404568402;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kE = 2.71828182845904523536;

/// Non-negative real or a tagged +infinity. Stored profiles never hold a raw
/// floating-point infinity.
struct Extended {
  double value = 0.0;
  bool infinite = false;

  static Extended finite(double v) { return {v, false}; }
  static Extended infinity() { return {0.0, true}; }

  [[nodiscard]] bool is_finite() const { return !infinite; }
  [[nodiscard]] double as_double() const { return infinite ? kInf : value; }
};

inline bool operator<(const Extended& x, const Extended& y) {
  if (x.infinite) return false;
  if (y.infinite) return true;
  return x.value < y.value;
}

/// log(exp(x) + exp(y)) without overflow; -inf is the additive identity.
inline double log_add(double x, double y) {
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  if (x < y) std::swap(x, y);
  return x + std::log1p(std::exp(y - x));
}

double log_sum_exp(std::span<const double> xs);

/// Aitken delta-squared acceleration of the last three terms of a sequence.
/// Returns the last term with `converged == false` when the sequence is not
/// geometrically convergent (denominator vanishes or changes sign pattern).
struct LimitEstimate {
  double value = kNaN;
  bool converged = false;
};
LimitEstimate aitken_limit(std::span<const double> seq);

/// Golden-section search for a maximum of `f` on [lo, hi].
struct MaxResult {
  double x = kNaN;
  double fx = -kInf;
};
template <class F>
MaxResult golden_max(F&& f, double lo, double hi, double xtol = 1e-12, int max_iter = 200) {
  const double r = 0.61803398874989484820;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > xtol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? MaxResult{c, fc} : MaxResult{d, fd};
}

/// Bisection for a root of a monotone function with f(lo), f(hi) of opposite sign.
template <class F>
double bisect(F&& f, double lo, double hi, double rel_tol = 1e-15, int max_iter = 400) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> geomspace(double lo, double hi, std::size_t n);
std::vector<double> linspace(double lo, double hi, std::size_t n);

inline double rel_diff(double x, double y) {
  const double s = std::max(std::abs(x), std::abs(y));
  return s == 0.0 ? 0.0 : std::abs(x - y) / s;
}

/// Relative quadrature target: GLS_TOL when set to a positive number, else 1e-9.
double quadrature_rel_tol();

}  // namespace gls
