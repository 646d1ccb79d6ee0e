#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gls/common.hpp"
#include "gls/quadrature.hpp"

using namespace gls;

TEST_CASE("GK15 integrates smooth functions") {
  const auto r = integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
  const auto s = integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12);
  CHECK(s.value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("log-space segment integral matches the direct one") {
  auto F = [](double t) { return -t * t; };
  const auto r = integrate_log(F, -3.0, 2.0, 1e-12);
  const double ref = 0.5 * std::sqrt(kPi) * (std::erf(2.0) + std::erf(3.0));
  CHECK(std::exp(r.log_value) == doctest::Approx(ref).epsilon(1e-11));
}

TEST_CASE("line integral of a Gaussian and of huge log values") {
  const auto g = integrate_exp_line([](double t) { return -0.5 * t * t; }, -kInf, kInf, {}, 1e-11);
  CHECK_FALSE(g.divergent);
  CHECK(std::exp(g.log_value) == doctest::Approx(std::sqrt(2 * kPi)).epsilon(1e-10));
  // exp(1000 - (t-5)^2) overflows in linear space.
  const auto h = integrate_exp_line([](double t) { return 1000.0 - (t - 5) * (t - 5); }, -kInf, kInf, {}, 1e-11);
  CHECK(h.log_value == doctest::Approx(1000.0 + 0.5 * std::log(kPi)).epsilon(1e-13));
}

TEST_CASE("slowly decaying exponential tails converge; flat ones diverge") {
  // int_{-inf}^0 e^{eps t} dt = 1/eps
  for (double eps : {1.0, 1e-3, 1e-6}) {
    const auto r = integrate_exp_line([eps](double t) { return eps * t; }, -kInf, 0.0, {}, 1e-10);
    CHECK_FALSE(r.divergent);
    CHECK(std::exp(r.log_value) == doctest::Approx(1.0 / eps).epsilon(1e-8));
  }
  const auto d = integrate_exp_line([](double) { return 0.0; }, -kInf, 0.0, {}, 1e-10);
  CHECK(d.divergent);
  const auto d2 = integrate_exp_line([](double t) { return -1e-3 * t; }, -kInf, 0.0, {}, 1e-10);
  CHECK(d2.divergent);
}

TEST_CASE("narrow peaks far from the scan window are found") {
  // Peak of width 1e-6 at t = 40.
  auto F = [](double t) { return -0.5 * (t - 40.0) * (t - 40.0) * 1e12; };
  const auto r = integrate_exp_line(F, -kInf, kInf, {}, 1e-10);
  CHECK(std::exp(r.log_value) == doctest::Approx(std::sqrt(2 * kPi) * 1e-6).epsilon(1e-8));
}

TEST_CASE("breakpoints split panels at kinks") {
  auto F = [](double t) { return t < 0.0 ? t : -2.0 * t; };
  const double br[] = {0.0};
  const auto r = integrate_exp_line(F, -kInf, kInf, br, 1e-12);
  CHECK(std::exp(r.log_value) == doctest::Approx(1.5).epsilon(1e-11));
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  const Rule& r = gauss_legendre(10);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * std::pow(r.x[i], 18);
  CHECK(s == doctest::Approx(2.0 / 19.0).epsilon(1e-14));
  double w = 0.0;
  for (double x : gauss_legendre(64).w) w += x;
  CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("helpers") {
  const double xs[] = {1000.0, 1000.0};
  CHECK(log_sum_exp(xs) == doctest::Approx(1000.0 + std::log(2.0)));
  const double seq[] = {1.5, 1.25, 1.125};
  const auto lim = aitken_limit(seq);
  CHECK(lim.converged);
  CHECK(lim.value == doctest::Approx(1.0));
  const auto m = golden_max([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0);
  CHECK(m.x == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}
