// AVX2 + FMA kernels. Compiled with -mavx2 -mfma; only called after a
// runtime CPU check.

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstdint>

namespace gls::kernels::detail {
namespace {

// log(x) for normal x > 0: x = 2^e * m with m in [sqrt(1/2), sqrt(2)),
// log m = 2 atanh(f / (2 + f)), f = m - 1.
inline __m256d log4(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
  // Biased exponent as double through the 2^52 trick.
  const __m256i eb = _mm256_srli_epi64(bits, 52);
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(eb, magic)), _mm256_set1_pd(4503599627370496.0));
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));
  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.41421356237309504880), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));
  const __m256d f = _mm256_sub_pd(m, _mm256_set1_pd(1.0));
  const __m256d s = _mm256_div_pd(f, _mm256_add_pd(f, _mm256_set1_pd(2.0)));
  const __m256d z = _mm256_mul_pd(s, s);
  __m256d poly = _mm256_set1_pd(1.0 / 21.0);
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 19.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 17.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 15.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 13.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 11.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 9.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 7.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 5.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 3.0));
  poly = _mm256_mul_pd(poly, z);
  // 2s + 2s*z*poly
  const __m256d two_s = _mm256_add_pd(s, s);
  const __m256d logm = _mm256_fmadd_pd(two_s, poly, two_s);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  return _mm256_add_pd(_mm256_fmadd_pd(e, ln2_hi, logm), _mm256_mul_pd(e, ln2_lo));
}

// exp(y) for y in [-708, 0]; lanes below -708 return 0.
inline __m256d exp4(__m256d y) {
  const __m256d under = _mm256_cmp_pd(y, _mm256_set1_pd(-708.0), _CMP_LT_OQ);
  y = _mm256_max_pd(y, _mm256_set1_pd(-708.0));
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(y, _mm256_set1_pd(1.44269504088896340736)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93147180369123816490e-01), y);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.90821492927058770002e-10), r);
  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  // 2^n: (n + 1023) placed in the exponent field.
  const __m256d t = _mm256_add_pd(n, _mm256_set1_pd(4503599627370496.0 + 1023.0));
  const __m256i pow2 = _mm256_slli_epi64(_mm256_castpd_si256(t), 52);
  const __m256d out = _mm256_mul_pd(p, _mm256_castsi256_pd(pow2));
  return _mm256_andnot_pd(under, out);
}

inline __m256d abs4(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d pow_block(__m256d v, __m256d vp) {
  const __m256d tiny = _mm256_cmp_pd(v, _mm256_set1_pd(1e-300), _CMP_LT_OQ);
  const __m256d safe = _mm256_blendv_pd(v, _mm256_set1_pd(1.0), tiny);
  const __m256d out = exp4(_mm256_mul_pd(vp, log4(safe)));
  return _mm256_andnot_pd(tiny, out);
}

}  // namespace

double avx2_pow_sum(const double* x, const double* w, std::size_t n, double p, double inv_scale) {
  const __m256d vp = _mm256_set1_pd(p);
  const __m256d vs = _mm256_set1_pd(inv_scale);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_mul_pd(abs4(_mm256_loadu_pd(x + i)), vs);
    const __m256d t = pow_block(v, vp);
    acc = w != nullptr ? _mm256_fmadd_pd(_mm256_loadu_pd(w + i), t, acc) : _mm256_add_pd(acc, t);
  }
  if (i < n) {
    alignas(32) double xb[4] = {0.0, 0.0, 0.0, 0.0};
    alignas(32) double wb[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t k = 0; i + k < n; ++k) {
      xb[k] = x[i + k];
      wb[k] = w != nullptr ? w[i + k] : 1.0;
    }
    const __m256d v = _mm256_mul_pd(abs4(_mm256_load_pd(xb)), vs);
    acc = _mm256_fmadd_pd(_mm256_load_pd(wb), pow_block(v, vp), acc);
  }
  return hsum(acc);
}

double avx2_max_abs(const double* x, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, abs4(_mm256_loadu_pd(x + i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = lanes[0];
  for (int k = 1; k < 4; ++k) r = lanes[k] > r ? lanes[k] : r;
  for (; i < n; ++i) {
    const double a = std::abs(x[i]);
    r = a > r ? a : r;
  }
  return r;
}

double avx2_dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void avx2_pairwise_mean(const double* in, double* out, std::size_t n_out) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n_out; i += 4) {
    const __m256d a = _mm256_loadu_pd(in + 2 * i);
    const __m256d b = _mm256_loadu_pd(in + 2 * i + 4);
    // hadd -> [a0+a1, b0+b1, a2+a3, b2+b3]; reorder lanes to 0,2,1,3.
    const __m256d h = _mm256_permute4x64_pd(_mm256_hadd_pd(a, b), 0xD8);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(h, half));
  }
  for (; i < n_out; ++i) out[i] = (in[2 * i] + in[2 * i + 1]) * 0.5;
}

void avx2_max_inplace(double* acc, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // max_pd returns the second operand on ties and NaN; match std::max(acc, src).
    const __m256d a = _mm256_loadu_pd(acc + i);
    const __m256d s = _mm256_loadu_pd(src + i);
    const __m256d take = _mm256_cmp_pd(a, s, _CMP_LT_OQ);
    _mm256_storeu_pd(acc + i, _mm256_blendv_pd(a, s, take));
  }
  for (; i < n; ++i) acc[i] = acc[i] < src[i] ? src[i] : acc[i];
}

double avx2_trig_sum(const double* c, std::size_t n, std::size_t first, double x, bool sine) {
  // Lane j carries angle (first + k0 + j) x; each step rotates by 4x.
  constexpr std::size_t kAnchor = 256;
  const double cs4 = std::cos(4.0 * x), sn4 = std::sin(4.0 * x);
  const __m256d rc = _mm256_set1_pd(cs4), rs = _mm256_set1_pd(sn4);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  while (k + 4 <= n) {
    alignas(32) double c0[4], s0[4];
    for (int j = 0; j < 4; ++j) {
      const double a = static_cast<double>(first + k + static_cast<std::size_t>(j)) * x;
      c0[j] = std::cos(a);
      s0[j] = std::sin(a);
    }
    __m256d vc = _mm256_load_pd(c0), vs = _mm256_load_pd(s0);
    const std::size_t stop = k + kAnchor < n ? k + kAnchor : n;
    for (; k + 4 <= stop; k += 4) {
      const __m256d coef = _mm256_loadu_pd(c + k);
      acc = _mm256_fmadd_pd(coef, sine ? vs : vc, acc);
      const __m256d nc = _mm256_fmsub_pd(vc, rc, _mm256_mul_pd(vs, rs));
      const __m256d ns = _mm256_fmadd_pd(vs, rc, _mm256_mul_pd(vc, rs));
      vc = nc;
      vs = ns;
    }
  }
  double s = hsum(acc);
  for (; k < n; ++k) {
    const double a = static_cast<double>(first + k) * x;
    s += c[k] * (sine ? std::sin(a) : std::cos(a));
  }
  return s;
}

}  // namespace gls::kernels::detail
