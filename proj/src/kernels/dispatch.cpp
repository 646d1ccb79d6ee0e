// Runtime selection of the kernel table.

#include <cstdlib>
#include <cstring>

#include "gls/common.hpp"
#include "gls/kernels.hpp"

namespace gls::kernels {
namespace detail {

#define GLS_DECLARE_VARIANT(prefix)                                                                     \
  double prefix##_pow_sum(const double*, const double*, std::size_t, double, double);                   \
  double prefix##_max_abs(const double*, std::size_t);                                                  \
  double prefix##_dot(const double*, const double*, std::size_t);                                       \
  void prefix##_pairwise_mean(const double*, double*, std::size_t);                                     \
  void prefix##_max_inplace(double*, const double*, std::size_t);                                       \
  double prefix##_trig_sum(const double*, std::size_t, std::size_t, double, bool);

GLS_DECLARE_VARIANT(scalar)
#if defined(GLS_HAVE_AVX2)
GLS_DECLARE_VARIANT(avx2)
#endif
#if defined(GLS_HAVE_NEON)
GLS_DECLARE_VARIANT(neon)
#endif

#undef GLS_DECLARE_VARIANT

}  // namespace detail

#define GLS_TABLE(prefix)                                                                         \
  KernelTable {                                                                                   \
    #prefix, detail::prefix##_pow_sum, detail::prefix##_max_abs, detail::prefix##_dot,            \
        detail::prefix##_pairwise_mean, detail::prefix##_max_inplace, detail::prefix##_trig_sum \
  }

const KernelTable& scalar() {
  static const KernelTable t = GLS_TABLE(scalar);
  return t;
}

const KernelTable* avx2() {
#if defined(GLS_HAVE_AVX2)
  static const KernelTable t = GLS_TABLE(avx2);
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? &t : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon() {
#if defined(GLS_HAVE_NEON)
  static const KernelTable t = GLS_TABLE(neon);
  return &t;
#else
  return nullptr;
#endif
}

#undef GLS_TABLE

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("GLS_KERNELS");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar();
    if (const KernelTable* t = avx2()) return t;
    if (const KernelTable* t = neon()) return t;
    return &scalar();
  }();
  return *chosen;
}

double pow_sum(std::span<const double> x, std::span<const double> w, double p, double inv_scale) {
  require(w.empty() || w.size() == x.size(), "pow_sum: weight length mismatch");
  return active().pow_sum(x.data(), w.empty() ? nullptr : w.data(), x.size(), p, inv_scale);
}

double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }

double dot(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "dot: length mismatch");
  return active().dot(x.data(), y.data(), x.size());
}

void pairwise_mean(std::span<const double> in, std::span<double> out) {
  require(in.size() >= 2 * out.size(), "pairwise_mean: input too short");
  active().pairwise_mean(in.data(), out.data(), out.size());
}

void max_inplace(std::span<double> acc, std::span<const double> src) {
  require(acc.size() == src.size(), "max_inplace: length mismatch");
  active().max_inplace(acc.data(), src.data(), acc.size());
}

double trig_sum(std::span<const double> c, std::size_t first, double x, bool sine) {
  return active().trig_sum(c.data(), c.size(), first, x, sine);
}

}  // namespace gls::kernels
