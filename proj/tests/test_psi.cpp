#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gls/psi.hpp"

using namespace gls;

TEST_CASE("zeta family root and values") {
  const Psi z = zeta_make(1, 3, 1, 1);
  REQUIRE(z.zeta());
  CHECK(z.zeta()->h == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(zeta_value(*z.zeta(), 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(zeta_value(*z.zeta(), 1.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(z(1.5) == doctest::Approx(2.0).epsilon(1e-15));  // psi = 1/zeta

  // (h-1) = 1/h  <=>  h^2 - h - 1 = 0
  const ZetaParams zi = zeta_params(1, kInf, 1, -1);
  CHECK(zi.h == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-12));
}

TEST_CASE("zeta root residual and regime errors") {
  for (auto [a, b, al, be] : {std::tuple{1.0, 3.0, 1.0, 1.0}, {2.0, 4.0, 0.5, 2.0}, {1.0, kInf, 2.0, -0.5},
                              {1.5, 7.0, 3.0, 0.25}}) {
    const ZetaParams z = zeta_params(a, b, al, be);
    const double lhs = std::pow(z.h - a, al);
    const double rhs = std::isfinite(b) ? std::pow(b - z.h, be) : std::pow(z.h, be);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(lhs, rhs));
  }
  CHECK_THROWS_AS(zeta_make(1, 3, 0, 1), PreconditionError);
  CHECK_THROWS_AS(zeta_make(1, kInf, 1, 0.5), PreconditionError);
  CHECK_THROWS_AS(zeta_make(0.5, 3, 1, 1), PreconditionError);
}

TEST_CASE("zeta envelope constants") {
  std::vector<double> g;
  for (int i = 1; i <= 101; ++i) g.push_back(1.0 + 2.0 * i / 102.0);
  const auto e = zeta_envelope_check(zeta_params(1, 3, 1, 1), g);
  CHECK(e.lo >= 0.5);
  CHECK(e.hi <= 2.0);
  const auto gi = linspace(1.01, 50, 200);
  const auto ei = zeta_envelope_check(zeta_params(1, kInf, 1, -1), gi);
  CHECK(ei.lo > 0.0);
  CHECK(std::isfinite(ei.hi));
  const double at_h[] = {2.0};
  CHECK(zeta_envelope_check(zeta_params(1, 3, 1, 1), at_h).lo == doctest::Approx(1.0));
}

TEST_CASE("zeta weights blow up at singular endpoints") {
  const Psi z = zeta_make(1, 3, 1, 1);
  double prev = 0.0;
  for (double p : lower_ladder(1, 3)) {
    CHECK(z(p) > prev);
    prev = z(p);
  }
  CHECK(prev > 1e5);
  prev = 0.0;
  for (double p : upper_ladder(1, 3)) {
    CHECK(z(p) > prev);
    prev = z(p);
  }
  CHECK(prev > 1e5);
}

TEST_CASE("psi transforms") {
  const Psi one = psi_constant(1, kInf);
  CHECK(psi_transform(one, {TransformRule::lambda_gamma, 2, 1, 1})(2.0) == doctest::Approx(4.0));

  const Psi lin = psi_closed("p", 1, 2, [](double p) { return std::log(p); });
  const Psi c = psi_transform(lin, {TransformRule::conjugate_index});
  CHECK(c.a() == doctest::Approx(2.0));
  CHECK(c.b() == kInf);
  CHECK_THROWS_AS(c(1.5), PreconditionError);
  CHECK(c(3.0) == doctest::Approx(1.5));

  const Psi z = zeta_make(2, 4, 1, 1);
  const Psi z11 = psi_transform(z, {TransformRule::lambda_gamma, 2, 1, 1});
  double lo = kInf, hi = 0;
  for (double p : linspace(2.001, 3.999, 500)) {
    const double r = z11(p) / z(p);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(hi / lo < 4.1);

  // lambda = gamma = 0 is the identity.
  const Psi id = psi_transform(z, {TransformRule::lambda_gamma, 2, 0, 0});
  for (double p : linspace(2.01, 3.99, 50)) CHECK(id(p) == z(p));

  const Psi m = psi_transform(zeta_make(1, 3, 1, 1), {TransformRule::mult_s, 4});
  CHECK(m.a() == doctest::Approx(1.0));
  CHECK(m.b() == doctest::Approx(12.0 / 7.0));
  CHECK(m(1.5) == doctest::Approx(zeta_make(1, 3, 1, 1)(1.5 * 4 / 2.5)));

  const Psi cv = psi_transform(zeta_make(1, 3, 1, 1), {TransformRule::conv_s, 3});
  // t = 3/2, support (1*1.5/0.5, inf) = (3, inf)
  CHECK(cv.a() == doctest::Approx(3.0));
  CHECK(cv.b() == kInf);
  CHECK(cv(6.0) == doctest::Approx(zeta_make(1, 3, 1, 1)(6.0 * 1.5 / 7.5)));
  CHECK_THROWS_AS(psi_transform(zeta_make(2, 4, 1, 1), {TransformRule::conv_s, 3}), PreconditionError);
}

TEST_CASE("domination relation") {
  const auto d = psi_dominates(zeta_make(1, 3, 1, 1), zeta_make(1, 3, 2, 2));
  CHECK(d.dominates);
  const auto same = psi_dominates(zeta_make(1, 3, 1, 1), zeta_make(1, 3, 1, 1));
  CHECK_FALSE(same.dominates);

  const Psi nu1 = zeta_make(1, kInf, 1, -1);
  const Psi nu2 = psi_transform(nu1, {TransformRule::lambda_gamma, 2, 0, 1});
  const auto r = psi_dominates(nu1, nu2, 1e-4);
  CHECK(r.lower.applicable);
  CHECK(r.lower.vanishes);
  CHECK(r.lower.last_ratio <= 0.01);
  CHECK_FALSE(r.upper.vanishes);  // ratio (p-1)/p -> 1 at infinity
  CHECK_FALSE(r.dominates);

  CHECK_THROWS_AS(psi_dominates(zeta_make(1, 3, 1, 1), zeta_make(1, 4, 1, 1)), PreconditionError);
}

TEST_CASE("p log psi convexity") {
  const auto grid = linspace(1.1, 20, 60);
  const Psi h1 = psi_closed("h1", 1, kInf, [](double p) { return (std::log(2.0) + std::lgamma(p + 1)) / p; });
  CHECK(plog_convexity_check(h1, grid).convex);
  const Psi bad = psi_closed("exp(-p^2)", 1, kInf, [](double p) { return -p * p; });
  CHECK_FALSE(plog_convexity_check(bad, grid).convex);
  const auto c = plog_convexity_check(psi_constant(1, kInf), grid);
  CHECK(c.convex);
  CHECK(c.max_violation == doctest::Approx(0.0).epsilon(1e-12));

  // Products of moment functions stay in the class.
  const Psi h2 = psi_closed("h2", 1, kInf, [](double p) { return (std::log(2.0) + std::lgamma(p / 2 + 1)) / p; });
  CHECK(plog_convexity_check(psi_product(h1, h2), grid).convex);
}

TEST_CASE("tabulated psi interpolates in log space") {
  const auto p = linspace(1.0, 5.0, 21);
  std::vector<double> v;
  for (double x : p) v.push_back(std::exp(0.3 * x * x));
  const Psi t = psi_tabulated(p, v);
  for (std::size_t i = 1; i + 1 < p.size(); ++i) CHECK(t(p[i]) == doctest::Approx(v[i]).epsilon(1e-12));
  CHECK(t(2.05) == doctest::Approx(std::exp(0.3 * 2.05 * 2.05)).epsilon(1e-4));
  for (double x : linspace(1.01, 4.99, 100)) CHECK(t(x) > 0.0);
}
