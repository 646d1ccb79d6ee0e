#pragma once
// Data-parallel inner loops. Every kernel has a scalar reference version and
// optional AVX2 / NEON variants; `kernels::active()` picks one at runtime.
//
// Set GLS_KERNELS=scalar to force the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace gls::kernels {

/// Function table shared by all variants. Raw pointer/length pairs keep the
/// SIMD translation units free of library headers.
struct KernelTable {
  std::string_view name;
  /// sum_i w_i * (|x_i| * inv_scale)^p ; w == nullptr means unit weights.
  /// Callers guarantee |x_i| * inv_scale <= 1.
  double (*pow_sum)(const double* x, const double* w, std::size_t n, double p, double inv_scale);
  double (*max_abs)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// out[i] = (in[2i] + in[2i+1]) / 2 for i < n_out.
  void (*pairwise_mean)(const double* in, double* out, std::size_t n_out);
  /// acc[i] = max(acc[i], src[i]).
  void (*max_inplace)(double* acc, const double* src, std::size_t n);
  /// sum_k c_k * trig((first + k) * x), trig = sin when `sine`, else cos.
  double (*trig_sum)(const double* c, std::size_t n, std::size_t first, double x, bool sine);
};

const KernelTable& scalar();
/// nullptr when the variant is not compiled in or the CPU lacks support.
const KernelTable* avx2();
const KernelTable* neon();
const KernelTable& active();

// Convenience wrappers over the active table.
double pow_sum(std::span<const double> x, std::span<const double> w, double p, double inv_scale);
double max_abs(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
void pairwise_mean(std::span<const double> in, std::span<double> out);
void max_inplace(std::span<double> acc, std::span<const double> src);
double trig_sum(std::span<const double> c, std::size_t first, double x, bool sine);

}  // namespace gls::kernels
