#include "gls/common.hpp"

#include <algorithm>
#include <cstdlib>

namespace gls {

double log_sum_exp(std::span<const double> xs) {
  double m = -kInf;
  for (double x : xs) m = std::max(m, x);
  if (m == -kInf || m == kInf) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

LimitEstimate aitken_limit(std::span<const double> seq) {
  if (seq.empty()) return {};
  const std::size_t n = seq.size();
  if (n < 3) return {seq.back(), false};
  const double x0 = seq[n - 3], x1 = seq[n - 2], x2 = seq[n - 1];
  const double d1 = x1 - x0, d2 = x2 - x1;
  const double scale = std::max({std::abs(x0), std::abs(x1), std::abs(x2), 1e-300});
  if (std::abs(d2) <= 1e-14 * scale) return {x2, true};
  const double denom = d2 - d1;
  // Geometric convergence needs |d2| < |d1| with matching sign pattern.
  if (denom == 0.0 || std::abs(d2) >= std::abs(d1)) return {x2, false};
  const double acc = x2 - d2 * d2 / denom;
  if (!std::isfinite(acc)) return {x2, false};
  return {acc, true};
}

std::vector<double> geomspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = hi;
  return out;
}

double quadrature_rel_tol() {
  static const double tol = [] {
    const char* env = std::getenv("GLS_TOL");
    if (env == nullptr) return 1e-9;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || !(v > 0.0) || !std::isfinite(v)) return 1e-9;
    return v;
  }();
  return tol;
}

}  // namespace gls
