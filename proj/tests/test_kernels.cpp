#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gls/common.hpp"
#include "gls/kernels.hpp"

using namespace gls;

namespace {

std::vector<double> random_vec(std::size_t n, double lo, double hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<const kernels::KernelTable*> variants() {
  std::vector<const kernels::KernelTable*> out;
  if (auto* t = kernels::avx2()) out.push_back(t);
  if (auto* t = kernels::neon()) out.push_back(t);
  out.push_back(&kernels::active());
  return out;
}

}  // namespace

TEST_CASE("scalar pow_sum matches std::pow") {
  const std::vector<double> x{0.5, -0.25, 1.0, 0.0, 1e-320};
  const std::vector<double> w{1.0, 2.0, 3.0, 4.0, 5.0};
  const double expect = std::pow(0.5, 2.5) + 2 * std::pow(0.25, 2.5) + 3.0;
  CHECK(kernels::scalar().pow_sum(x.data(), w.data(), x.size(), 2.5, 1.0) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("SIMD variants agree with the scalar reference") {
  const auto& ref = kernels::scalar();
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1001u}) {
    const auto x = random_vec(n, -3.0, 3.0, 11 + static_cast<unsigned>(n));
    const auto y = random_vec(n, -1.0, 1.0, 97 + static_cast<unsigned>(n));
    const auto w = random_vec(n, 0.0, 2.0, 5 + static_cast<unsigned>(n));
    for (const auto* t : variants()) {
      CAPTURE(t->name);
      CAPTURE(n);
      const double inv = 1.0 / 3.0;
      for (double p : {1.0001, 1.5, 2.0, 7.3, 40.0, 400.0}) {
        const double a = ref.pow_sum(x.data(), w.data(), n, p, inv);
        const double b = t->pow_sum(x.data(), w.data(), n, p, inv);
        CHECK(rel_diff(a, b) <= 1e-13);
        CHECK(rel_diff(ref.pow_sum(x.data(), nullptr, n, p, inv), t->pow_sum(x.data(), nullptr, n, p, inv)) <= 1e-13);
      }
      CHECK(ref.max_abs(x.data(), n) == t->max_abs(x.data(), n));
      CHECK(std::abs(ref.dot(x.data(), y.data(), n) - t->dot(x.data(), y.data(), n)) <= 1e-12 * (1.0 + n));

      std::vector<double> o1(n / 2), o2(n / 2);
      ref.pairwise_mean(x.data(), o1.data(), n / 2);
      t->pairwise_mean(x.data(), o2.data(), n / 2);
      CHECK(o1 == o2);

      auto a1 = y, a2 = y;
      ref.max_inplace(a1.data(), x.data(), n);
      t->max_inplace(a2.data(), x.data(), n);
      CHECK(a1 == a2);
    }
  }
}

TEST_CASE("pow_sum handles tiny and underflowing values") {
  std::vector<double> x{1e-300, 1e-200, 0.0, 0.999999, 1.0};
  for (const auto* t : variants()) {
    const double ref = kernels::scalar().pow_sum(x.data(), nullptr, x.size(), 5.0, 1.0);
    CHECK(rel_diff(ref, t->pow_sum(x.data(), nullptr, x.size(), 5.0, 1.0)) <= 1e-14);
  }
}

TEST_CASE("trig_sum matches a naive sum over long ranges") {
  const auto c = random_vec(3000, -1.0, 1.0, 42);
  for (const auto* t : variants()) {
    CAPTURE(t->name);
    for (double x : {1e-6, 0.001, 0.37, 1.9, 3.1}) {
      for (bool sine : {true, false}) {
        double naive = 0.0, mag = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
          const double a = static_cast<double>(1 + k) * x;
          naive += c[k] * (sine ? std::sin(a) : std::cos(a));
          mag += std::abs(c[k]);
        }
        CHECK(std::abs(t->trig_sum(c.data(), c.size(), 1, x, sine) - naive) <= 1e-12 * mag);
      }
    }
  }
}

TEST_CASE("span wrappers validate lengths") {
  std::vector<double> a(4), b(3);
  CHECK_THROWS_AS(kernels::dot(a, b), PreconditionError);
  CHECK(kernels::active().name.size() > 0);
}
