#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gls/catalog.hpp"
#include "gls/quadrature.hpp"
#include "gls/tail.hpp"

using namespace gls;

namespace {

double closed_norm(const CatalogFunction& f, double p) { return std::exp(f.log_moment(p)); }

// Direct x-space integral of |f|^p over the level set, substituting x = e^y.
double direct_outer_moment(double a, double gamma, double p) {
  auto g = [&](double y) { return y <= 0.0 ? 0.0 : 2.0 * std::exp((1.0 - p / a) * y) * std::pow(y, p * gamma); };
  return integrate(g, 0.0, 1.0, 1e-12).value + integrate(g, 1.0, 2000.0, 1e-12).value;
}

}  // namespace

TEST_CASE("lp norms of simple tails") {
  CHECK(Tail::indicator(4).lp_norm(2).as_double() == doctest::Approx(2.0).epsilon(1e-10));
  const auto h1 = catalog_make("h_m(m=1)");
  CHECK(h1.tail->lp_norm(2).as_double() == doctest::Approx(2.0).epsilon(1e-9));
  const auto f21 = catalog_make("f_a_gamma(a=2,gamma=1)");
  CHECK(std::pow(f21.tail->lp_norm(3).as_double(), 3) == doctest::Approx(192.0).epsilon(1e-8));
  CHECK(direct_outer_moment(2, 1, 3) == doctest::Approx(192.0).epsilon(1e-8));
  CHECK(Tail::zero().log_lp_norm(2) == -kInf);
  CHECK_THROWS_AS((void)Tail::indicator(1).lp_norm(0.5), PreconditionError);
}

TEST_CASE("divergent moments are reported as infinite") {
  const auto f = catalog_make("f_a_gamma(a=2,gamma=0)");
  CHECK_FALSE(f.tail->lp_norm(2).is_finite());
  CHECK_FALSE(f.tail->lp_norm(1.5).is_finite());
  CHECK(f.tail->lp_norm(2.5).is_finite());
  const auto g = catalog_make("g_b_nu(b=3,nu=0)");
  CHECK_FALSE(g.tail->lp_norm(3).is_finite());
  CHECK_FALSE(g.tail->lp_norm(4).is_finite());
  CHECK(g.tail->lp_norm(2.9).is_finite());
}

TEST_CASE("catalog tails match analytic level sets") {
  for (double m : {1.0, 2.0, 4.0}) {
    const auto h = catalog_make(Call{"h_m", {{"m", m}}});
    for (double u : {0.01, 0.3, 1.0, 1.7, 3.0}) {
      // |log|x||^(1/m) > u  <=>  |x| < exp(-u^m)
      CHECK((*h.tail)(u) == doctest::Approx(2.0 * std::exp(-std::pow(u, m))).epsilon(1e-10));
    }
  }
  const auto f = catalog_make("f_a_gamma(a=2,gamma=0)");
  for (double u : {0.1, 0.5, 0.9}) {
    // |x|^(-1/2) > u on |x| >= 1  <=>  1 <= |x| < u^-2
    CHECK((*f.tail)(u) == doctest::Approx(2.0 * (std::pow(u, -2.0) - 1.0)).epsilon(1e-10));
  }
  CHECK((*f.tail)(1.0) == 0.0);
  CHECK((*f.tail)(1.5) == 0.0);

  const auto g = catalog_make("g_b_nu(b=2,nu=1)");
  for (double u : {0.5, 2.0, 10.0}) {
    // |x|^(-1/2) |log|x|| > u on |x| < 1: measure found by bisection in y = -log|x|.
    const double y = bisect([&](double yy) { return std::exp(yy / 2) * yy - u; }, 1e-12, 200.0, 1e-15);
    CHECK((*g.tail)(u) == doctest::Approx(2.0 * std::exp(-y)).epsilon(1e-9));
  }
}

TEST_CASE("closed-form moments agree with tail quadrature") {
  struct Case {
    const char* spec;
    double lo, hi;
  };
  const Case cases[] = {
      {"h_m(m=1)", 1.0, 30.0},          {"h_m(m=2)", 1.0, 30.0},
      {"h_m(m=4)", 1.0, 30.0},          {"f_a_gamma(a=1,gamma=0)", 1.05, 20.0},
      {"f_a_gamma(a=2,gamma=1)", 2.05, 20.0}, {"f_a_gamma(a=1.5,gamma=-0.2)", 1.55, 4.9},
      {"g_b_nu(b=4,nu=0.5)", 1.0, 3.95}, {"log_singular(d=1)", 1.0, 20.0},
      {"f_ab_gamma_nu(a=1,b=3,gamma=0.5,nu=1)", 1.05, 2.95},
      {"g_a_gamma_m(a=2,gamma=0.3,m=2)", 2.05, 15.0},
  };
  for (const auto& c : cases) {
    const auto f = catalog_make(c.spec);
    REQUIRE(f.has_closed_moments());
    for (double p : linspace(c.lo, c.hi, 25)) {
      INFO(std::string(c.spec) << " p=" << p);
      CHECK(rel_diff(f.tail->lp_norm(p).as_double(), closed_norm(f, p)) < 1e-6);
    }
  }
}

TEST_CASE("two-sided family pairs each Gamma factor with its own power") {
  // Oracle: independent x-space integral of the outer part.
  const double a = 1.0, gamma = 0.5;
  for (double p : {1.2, 1.6, 2.5}) {
    const double direct = direct_outer_moment(a, gamma, p);
    const double paired = 2.0 * std::tgamma(p * gamma + 1) * std::pow(p / a - 1, -(p * gamma + 1));
    CHECK(direct == doctest::Approx(paired).epsilon(1e-8));
  }
}

TEST_CASE("lyapunov interpolation") {
  CHECK(lyapunov_interpolate(1, 1, 1, 3, 2) == doctest::Approx(1.0));
  // Indicator: |f|_p = delta^(1/p) is exactly log-convex in 1/p.
  const double bound = lyapunov_interpolate(16, 4, 1, 2, 4.0 / 3.0);
  CHECK(bound == doctest::Approx(std::pow(16.0, 0.75)));
  CHECK(bound == doctest::Approx(Tail::indicator(16).lp_norm(4.0 / 3.0).as_double()).epsilon(1e-9));
  CHECK_THROWS_AS(lyapunov_interpolate(1, 1, 2, 1, 1.5), PreconditionError);
  CHECK_THROWS_AS(lyapunov_interpolate(1, 1, 1, 3, 4), PreconditionError);

  const char* specs[] = {"h_m(m=1)", "h_m(m=3)", "f_a_gamma(a=1,gamma=1)", "g_b_nu(b=5,nu=0)", "indicator(delta=0.5)"};
  std::mt19937 rng(7);
  for (const char* s : specs) {
    const auto f = catalog_make(s);
    const double lo = std::max(1.0, f.p_lo) + 0.05, hi = std::min(12.0, f.p_hi - 0.05);
    std::uniform_real_distribution<double> U(lo, hi);
    for (int k = 0; k < 10; ++k) {
      double q[3] = {U(rng), U(rng), U(rng)};
      std::sort(q, q + 3);
      if (q[2] - q[0] < 1e-3) continue;
      const double n1 = f.tail->lp_norm(q[0]).as_double(), n2 = f.tail->lp_norm(q[2]).as_double();
      INFO(std::string(s) << " " << q[0] << " " << q[1] << " " << q[2]);
      CHECK(f.tail->lp_norm(q[1]).as_double() <= lyapunov_interpolate(n1, n2, q[0], q[2], q[1]) + 1e-9);
    }
  }
}

TEST_CASE("truncation") {
  CHECK(Tail::indicator(1).truncated(2).is_zero());
  const auto f = catalog_make("f_a_gamma(a=2,gamma=0)");
  const Tail t = tail_truncate(*f.tail, 0.5);
  CHECK(t(0.1) == doctest::Approx((*f.tail)(0.5)));
  CHECK(t(0.1) == doctest::Approx(6.0));
  CHECK(t(0.7) == doctest::Approx((*f.tail)(0.7)));

  for (const char* s : {"h_m(m=1)", "f_a_gamma(a=1,gamma=1)", "g_b_nu(b=3,nu=1)"}) {
    const auto g = catalog_make(s);
    for (double N : {0.5, 1.0, 4.0}) {
      const Tail tr = g.tail->truncated(N);
      for (double p : {1.5, 2.0, 2.5}) {
        if (p <= g.p_lo || p >= g.p_hi) continue;
        CHECK(tr.lp_norm(p).as_double() <= g.tail->lp_norm(p).as_double() * (1 + 1e-9));
      }
    }
  }
}

TEST_CASE("lp norm is monotone in distribution") {
  // h_2 <= h_1 pointwise above u = 1 only, so compare scaled copies and
  // truncations, which are ordered for every u.
  const auto h = catalog_make("h_m(m=2)");
  const Tail big = h.tail->scaled(1.5);
  const Tail part = h.tail->below(2.0);
  for (double u : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    CHECK(part(u) <= (*h.tail)(u));
    CHECK((*h.tail)(u) <= big(u));
  }
  for (double p : {1.0, 2.0, 5.0, 11.0}) {
    CHECK(part.lp_norm(p).as_double() <= h.tail->lp_norm(p).as_double() * (1 + 1e-12));
    CHECK(h.tail->lp_norm(p).as_double() <= big.lp_norm(p).as_double() * (1 + 1e-12));
    CHECK(big.lp_norm(p).as_double() == doctest::Approx(1.5 * h.tail->lp_norm(p).as_double()).epsilon(1e-9));
  }
}

TEST_CASE("step tails") {
  const Tail s = Tail::step({1.0, 3.0, 2.0}, {1.0, 0.5, 2.0});
  CHECK(s(0.5) == doctest::Approx(3.5));
  CHECK(s(2.5) == doctest::Approx(0.5));
  CHECK(s(3.0) == 0.0);
  const double l2 = std::sqrt(1.0 + 0.5 * 9 + 2 * 4);
  CHECK(s.lp_norm(2).as_double() == doctest::Approx(l2).epsilon(1e-13));
  // Step + step over disjoint supports stays a step with pooled masses.
  const Tail d = Tail::disjoint_sum(s, Tail::indicator(1));
  CHECK(d.kind() == TailKind::piecewise_step);
  CHECK(d.lp_norm(2).as_double() == doctest::Approx(std::sqrt(l2 * l2 + 1)).epsilon(1e-13));
  CHECK(s.scaled(2).lp_norm(3).as_double() == doctest::Approx(2 * s.lp_norm(3).as_double()).epsilon(1e-13));
}

TEST_CASE("finite endpoint norms bound the interior") {
  // sup_{p in [a,b]} |f|_p <= max(|f|_a, |f|_b) by log-convexity.
  const auto f = catalog_make("h_m(m=1)");
  const double na = f.tail->lp_norm(1.5).as_double(), nb = f.tail->lp_norm(6).as_double();
  for (double p : linspace(1.5, 6, 40)) CHECK(f.tail->lp_norm(p).as_double() <= std::max(na, nb) * (1 + 1e-9));
}

TEST_CASE("catalog validation") {
  CHECK_THROWS_AS(catalog_make("nope(x=1)"), PreconditionError);
  CHECK_THROWS_AS(catalog_make("f_a_gamma(a=2,gamma=-1)"), PreconditionError);
  CHECK_THROWS_AS(catalog_make("g_b_nu(b=2,nu=-0.6)"), PreconditionError);
  CHECK_THROWS_AS(catalog_make("h_m(m=1,k=2)"), PreconditionError);
  CHECK(catalog_make("f_a_gamma(a=2,gamma=0)").name() == "f_a_gamma(a=2,gamma=0)");
}
