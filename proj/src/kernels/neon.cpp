// NEON kernels for aarch64. Freestanding-safe: only <arm_neon.h> and the
// fixed-width C headers, with sin/cos declared directly.

#include <arm_neon.h>

#include <stddef.h>
#include <stdint.h>

extern "C" double sin(double);
extern "C" double cos(double);

namespace gls::kernels::detail {
namespace {

inline float64x2_t log2x(float64x2_t x) {
  const uint64x2_t bits = vreinterpretq_u64_f64(x);
  float64x2_t m = vreinterpretq_f64_u64(
      vorrq_u64(vandq_u64(bits, vdupq_n_u64(0x000FFFFFFFFFFFFFULL)), vdupq_n_u64(0x3FF0000000000000ULL)));
  float64x2_t e = vsubq_f64(vcvtq_f64_u64(vshrq_n_u64(bits, 52)), vdupq_n_f64(1023.0));
  const uint64x2_t big = vcgtq_f64(m, vdupq_n_f64(1.41421356237309504880));
  m = vbslq_f64(big, vmulq_f64(m, vdupq_n_f64(0.5)), m);
  e = vbslq_f64(big, vaddq_f64(e, vdupq_n_f64(1.0)), e);
  const float64x2_t f = vsubq_f64(m, vdupq_n_f64(1.0));
  const float64x2_t s = vdivq_f64(f, vaddq_f64(f, vdupq_n_f64(2.0)));
  const float64x2_t z = vmulq_f64(s, s);
  float64x2_t poly = vdupq_n_f64(1.0 / 21.0);
  const double inv[] = {1.0 / 19.0, 1.0 / 17.0, 1.0 / 15.0, 1.0 / 13.0, 1.0 / 11.0,
                        1.0 / 9.0,  1.0 / 7.0,  1.0 / 5.0,  1.0 / 3.0};
  for (double c : inv) poly = vfmaq_f64(vdupq_n_f64(c), poly, z);
  poly = vmulq_f64(poly, z);
  const float64x2_t two_s = vaddq_f64(s, s);
  const float64x2_t logm = vfmaq_f64(two_s, two_s, poly);
  const float64x2_t hi = vfmaq_f64(logm, e, vdupq_n_f64(6.93147180369123816490e-01));
  return vfmaq_f64(hi, e, vdupq_n_f64(1.90821492927058770002e-10));
}

inline float64x2_t exp2x(float64x2_t y) {
  const uint64x2_t under = vcltq_f64(y, vdupq_n_f64(-708.0));
  y = vmaxq_f64(y, vdupq_n_f64(-708.0));
  const float64x2_t n = vrndnq_f64(vmulq_f64(y, vdupq_n_f64(1.44269504088896340736)));
  float64x2_t r = vfmsq_f64(y, n, vdupq_n_f64(6.93147180369123816490e-01));
  r = vfmsq_f64(r, n, vdupq_n_f64(1.90821492927058770002e-10));
  const double coef[] = {1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0, 1.0 / 362880.0,
                         1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,     1.0 / 120.0,
                         1.0 / 24.0,        1.0 / 6.0,        0.5,             1.0,
                         1.0};
  float64x2_t p = vdupq_n_f64(1.0 / 6227020800.0);
  for (double c : coef) p = vfmaq_f64(vdupq_n_f64(c), p, r);
  const int64x2_t ni = vaddq_s64(vcvtq_s64_f64(n), vdupq_n_s64(1023));
  const float64x2_t pow2 = vreinterpretq_f64_s64(vshlq_n_s64(ni, 52));
  const float64x2_t out = vmulq_f64(p, pow2);
  return vreinterpretq_f64_u64(vbicq_u64(vreinterpretq_u64_f64(out), under));
}

inline float64x2_t pow_block(float64x2_t v, float64x2_t vp) {
  const uint64x2_t tiny = vcltq_f64(v, vdupq_n_f64(1e-300));
  const float64x2_t safe = vbslq_f64(tiny, vdupq_n_f64(1.0), v);
  const float64x2_t out = exp2x(vmulq_f64(vp, log2x(safe)));
  return vreinterpretq_f64_u64(vbicq_u64(vreinterpretq_u64_f64(out), tiny));
}

}  // namespace

double neon_pow_sum(const double* x, const double* w, size_t n, double p, double inv_scale) {
  const float64x2_t vp = vdupq_n_f64(p), vs = vdupq_n_f64(inv_scale);
  float64x2_t acc = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t t = pow_block(vmulq_f64(vabsq_f64(vld1q_f64(x + i)), vs), vp);
    acc = w != nullptr ? vfmaq_f64(acc, vld1q_f64(w + i), t) : vaddq_f64(acc, t);
  }
  if (i < n) {
    const double xb[2] = {x[i], 0.0};
    const double wb[2] = {w != nullptr ? w[i] : 1.0, 0.0};
    acc = vfmaq_f64(acc, vld1q_f64(wb), pow_block(vmulq_f64(vabsq_f64(vld1q_f64(xb)), vs), vp));
  }
  return vaddvq_f64(acc);
}

double neon_max_abs(const double* x, size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(x + i)));
  double r = vmaxvq_f64(m);
  for (; i < n; ++i) {
    const double a = x[i] < 0.0 ? -x[i] : x[i];
    r = a > r ? a : r;
  }
  return r;
}

double neon_dot(const double* x, const double* y, size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void neon_pairwise_mean(const double* in, double* out, size_t n_out) {
  const float64x2_t half = vdupq_n_f64(0.5);
  size_t i = 0;
  for (; i + 2 <= n_out; i += 2)
    vst1q_f64(out + i, vmulq_f64(vpaddq_f64(vld1q_f64(in + 2 * i), vld1q_f64(in + 2 * i + 2)), half));
  for (; i < n_out; ++i) out[i] = (in[2 * i] + in[2 * i + 1]) * 0.5;
}

void neon_max_inplace(double* acc, const double* src, size_t n) {
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(acc + i), s = vld1q_f64(src + i);
    vst1q_f64(acc + i, vbslq_f64(vcltq_f64(a, s), s, a));
  }
  for (; i < n; ++i) acc[i] = acc[i] < src[i] ? src[i] : acc[i];
}

double neon_trig_sum(const double* c, size_t n, size_t first, double x, bool sine) {
  constexpr size_t kAnchor = 256;
  const float64x2_t rc = vdupq_n_f64(cos(2.0 * x)), rs = vdupq_n_f64(sin(2.0 * x));
  float64x2_t acc = vdupq_n_f64(0.0);
  size_t k = 0;
  while (k + 2 <= n) {
    const double a0 = static_cast<double>(first + k) * x, a1 = static_cast<double>(first + k + 1) * x;
    const double c0[2] = {cos(a0), cos(a1)}, s0[2] = {sin(a0), sin(a1)};
    float64x2_t vc = vld1q_f64(c0), vs = vld1q_f64(s0);
    const size_t stop = k + kAnchor < n ? k + kAnchor : n;
    for (; k + 2 <= stop; k += 2) {
      acc = vfmaq_f64(acc, vld1q_f64(c + k), sine ? vs : vc);
      const float64x2_t nc = vfmsq_f64(vmulq_f64(vc, rc), vs, rs);
      const float64x2_t ns = vfmaq_f64(vmulq_f64(vs, rc), vc, rs);
      vc = nc;
      vs = ns;
    }
  }
  double s = vaddvq_f64(acc);
  for (; k < n; ++k) {
    const double a = static_cast<double>(first + k) * x;
    s += c[k] * (sine ? sin(a) : cos(a));
  }
  return s;
}

}  // namespace gls::kernels::detail
