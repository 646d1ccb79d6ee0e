// Reference kernels. Every SIMD variant is tested against these.

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace gls::kernels::detail {

double scalar_pow_sum(const double* x, const double* w, std::size_t n, double p, double inv_scale) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::abs(x[i]) * inv_scale;
    if (v < 1e-300) continue;
    const double t = std::exp(p * std::log(v));
    s += (w != nullptr ? w[i] : 1.0) * t;
  }
  return s;
}

double scalar_max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

double scalar_dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void scalar_pairwise_mean(const double* in, double* out, std::size_t n_out) {
  for (std::size_t i = 0; i < n_out; ++i) out[i] = (in[2 * i] + in[2 * i + 1]) * 0.5;
}

void scalar_max_inplace(double* acc, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = std::max(acc[i], src[i]);
}

double scalar_trig_sum(const double* c, std::size_t n, std::size_t first, double x, bool sine) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = static_cast<double>(first + k) * x;
    s += c[k] * (sine ? std::sin(a) : std::cos(a));
  }
  return s;
}

}  // namespace gls::kernels::detail
