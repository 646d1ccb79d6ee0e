#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gls/operators.hpp"
#include "gls/quadrature.hpp"

using namespace gls;

namespace {

// Windowed oracle: substitution x = u^m on (0, 1), Gauss panels on (1, X),
// two integration-by-parts terms beyond X.
double fab_oracle(double a, double b, double t) {
  const Rule& gl = gauss_legendre(20);
  const double m = b / (b - 1.0), r = 1.0 / a, X = 2000.0, w = 0.25;
  double inner = 0.0;
  for (double u0 = 0.0; u0 < 1.0; u0 += 1.0 / 64)
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      const double u = u0 + (gl.x[i] + 1.0) / 128.0;
      inner += gl.w[i] / 128.0 * m * std::cos(t * std::pow(u, m));
    }
  double outer = 0.0;
  for (double x0 = 1.0; x0 < X; x0 += w)
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      const double x = x0 + 0.5 * w * (gl.x[i] + 1.0);
      outer += 0.5 * w * gl.w[i] * std::pow(x, -r) * std::cos(t * x);
    }
  outer += -std::pow(X, -r) * std::sin(t * X) / t + r * std::pow(X, -r - 1) * std::cos(t * X) / (t * t);
  return 2.0 * (inner + outer);
}

double ratio_at(const Psi& x, const Psi& y, double p) { return std::exp(x.log_at(p) - y.log_at(p)); }

}  // namespace

TEST_CASE("fourier transform maps constant psi on (1,2] to (2,inf)") {
  const Psi img = operator_psi_image(operator_parse("fourier-transform"), psi_constant(1, 2));
  CHECK(img.a() == 2.0);
  CHECK(std::isinf(img.b()));
  for (double p : {2.5, 10.0, 1e4}) CHECK(img(p) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)operator_psi_image(operator_parse("fourier-transform"), psi_constant(1.5, 3)), PreconditionError);
}

TEST_CASE("singular map with lambda = gamma = 0 is the identity") {
  const Psi z = zeta_make(1, 4, 1, 2);
  const Psi img = operator_psi_image(operator_parse("singular(lambda=0,gamma=0)"), z);
  for (double p : linspace(1.01, 3.99, 40)) CHECK(img.log_at(p) == z.log_at(p));
}

TEST_CASE("riesz image is equivalent to the source inside (1, inf)") {
  const Psi z = zeta_make(1.5, 4, 1, 1);
  const Psi img = operator_psi_image(operator_parse("riesz-partial-sum"), z);
  double lo = kInf, hi = 0, bound = 0;
  for (double p : linspace(1.5001, 3.9999, 200)) {
    const double r = ratio_at(img, z, p);
    CHECK(r == doctest::Approx(p * p / (p - 1)).epsilon(1e-12));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    bound = std::max(bound, p * p / (p - 1));
  }
  CHECK(hi / lo <= bound);
  const Psi mx = operator_psi_image(operator_parse("maximal-fourier"), z);
  CHECK(ratio_at(mx, z, 2.0) == doctest::Approx(16.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)operator_psi_image(operator_parse("riesz-partial-sum"), psi_constant(0.5, 2)), PreconditionError);
}

TEST_CASE("zeta parameters of the singular image") {
  SUBCASE("a = 1, b finite: alpha gains gamma") {
    const auto z = zeta_params(1, 3, 1, 1);
    const auto w = operator_zeta_image(z, 1, 2);
    CHECK(w.alpha == 3.0);
    CHECK(w.beta == 1.0);
    const Psi img = operator_psi_image({OperatorKind::singular, 1, 2}, zeta_make(1, 3, 1, 1));
    const Psi eq = zeta_make(w.a, w.b, w.alpha, w.beta);
    // The ratio settles to a positive constant at both ends.
    for (const auto& lad : {lower_ladder(1, 3, 1e-8), upper_ladder(1, 3, 1e-8)}) {
      const double r1 = ratio_at(img, eq, lad[lad.size() - 2]), r2 = ratio_at(img, eq, lad.back());
      CHECK(r2 > 0.0);
      CHECK(r1 == doctest::Approx(r2).epsilon(1e-5));
    }
  }
  SUBCASE("b = inf: the power at infinity gains lambda") {
    const auto w = operator_zeta_image(zeta_params(1.5, kInf, 1, -1), 2, 1);
    CHECK(w.alpha == 1.0);
    CHECK(w.beta == -3.0);
    const Psi img = operator_psi_image({OperatorKind::singular, 2, 1}, zeta_make(1.5, kInf, 1, -1));
    const Psi eq = zeta_make(w.a, w.b, w.alpha, w.beta);
    CHECK(ratio_at(img, eq, 1e6) == doctest::Approx(ratio_at(img, eq, 1e7)).epsilon(1e-5));
  }
  SUBCASE("a = 1, b = inf: both change") {
    const auto w = operator_zeta_image(zeta_params(1, kInf, 1, -1), 1, 1);
    CHECK(w.alpha == 2.0);
    CHECK(w.beta == -2.0);
  }
  SUBCASE("interior exponents leave the parameters unchanged") {
    const auto w = operator_zeta_image(zeta_params(1.5, 4, 1, 2), 3, 3);
    CHECK(w.alpha == 1.0);
    CHECK(w.beta == 2.0);
  }
}

TEST_CASE("convolution and multiplication maps and parsing") {
  const Psi z = zeta_make(1, 4, 1, 1);
  const Psi c = operator_psi_image(operator_parse("convolution(s=2)"), z);
  const Psi m = operator_psi_image(operator_parse("multiplication(s=3)"), z);
  CHECK(c.a() == 2.0);
  CHECK(m.b() <= 3.0);
  CHECK(operator_name(operator_parse("singular(lambda=1,gamma=3)")) == "singular(lambda=1,gamma=3)");
  CHECK(operator_name(operator_parse("maximal-fourier")) == "maximal-fourier");
  CHECK_THROWS_AS((void)operator_parse("hardy"), PreconditionError);
  CHECK_THROWS_AS((void)operator_parse("singular(lambda=1)"), PreconditionError);
  CHECK_THROWS_AS((void)operator_parse("convolution(s=2,t=1)"), PreconditionError);
}

TEST_CASE("riesz growth audit") {
  SUBCASE("finite series, M beyond the top harmonic") {
    const auto f = series_trig_poly(SeriesKind::sine, {1, 0.5, 0.25});
    const auto r = riesz_growth_audit(f, {2, 4}, {3, 10});
    for (const auto& row : r.rows) CHECK(row.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("f_1: normalized ratio bounded, remainders decreasing") {
    const auto r = riesz_growth_audit(series_f_d(1), {2, 4, 8, 16, 32}, {16, 256, 4096}, true);
    CHECK(r.max_normalized < 1.0);
    for (const auto& row : r.rows) CHECK(row.max_ratio <= 1.0 + 1e-9);
    std::vector<double> rem4;
    for (const auto& [M, p, v] : r.remainders)
      if (p == 4) rem4.push_back(v);
    REQUIRE(rem4.size() == 3);
    CHECK(rem4[1] < rem4[0]);
    CHECK(rem4[2] < rem4[1]);
  }
  CHECK_THROWS_AS((void)riesz_growth_audit(series_trig_poly(SeriesKind::sine, {0}), {2}, {1}), PreconditionError);
  CHECK_THROWS_AS((void)riesz_growth_audit(series_f_d(1), {}, {1}), PreconditionError);
}

TEST_CASE("fourier transform of f_ab against a windowed quadrature") {
  for (auto [a, b] : {std::pair{1.5, 3.0}, std::pair{1.0, 2.0}}) {
    for (double t : {0.5, 2.0, 7.0}) {
      INFO(a << " " << t);
      CHECK(fourier_transform_fab(a, b, t) == doctest::Approx(fab_oracle(a, b, t)).epsilon(1e-7));
      CHECK(fourier_transform_fab(a, b, -t) == fourier_transform_fab(a, b, t));
    }
  }
  CHECK_THROWS_AS((void)fourier_transform_fab(2, 2, 1), PreconditionError);
  CHECK_THROWS_AS((void)fourier_transform_fab(0.5, 2, 1), PreconditionError);
}

TEST_CASE("parseval for f_ab") {
  // int |f|^2 = 2 (3 + 3) for (a, b) = (1.5, 3).
  CHECK(fourier_fab_l2_squared(1.5, 3) == doctest::Approx(24 * kPi).epsilon(1e-6));
  CHECK_THROWS_AS((void)fourier_fab_l2_squared(2.5, 3), PreconditionError);
}

TEST_CASE("transform is comparable to the conjugate-index function") {
  std::vector<double> tg;
  for (int i = -30; i <= 30; ++i) tg.push_back(std::pow(10.0, i / 10.0));
  const auto h12 = fourier_transform_halfline_example(1, 2, tg);
  CHECK(h12.converged);
  CHECK(h12.t_compare_from == 1.0);
  CHECK(h12.ratio_lo > 0.0);
  CHECK(h12.ratio_hi / h12.ratio_lo < 10.0);
  CHECK(std::isfinite(h12.g_norm));

  const double a = 1.2, b = 6.0;
  const auto h = fourier_transform_halfline_example(a, b, tg);
  CHECK(h.ratio_lo > 0.0);
  CHECK(std::isfinite(h.ratio_hi));
  CHECK(std::isfinite(h.g_norm));
  for (const auto& [t, F, c] : h.samples) CHECK(F > 0.0);
  // Limits of F / f_{A,B} at both ends.
  const double s = 1 - 1 / b;
  const double at_inf = 2 * std::tgamma(s) * std::cos(kPi * s / 2);
  const double at_zero = 2 * std::tgamma(1 - 1 / a) * std::sin(kPi / (2 * a));
  CHECK(fourier_transform_fab(a, b, 1e6) * std::pow(1e6, s) == doctest::Approx(at_inf).epsilon(1e-5));
  CHECK(fourier_transform_fab(a, b, 1e-30) * std::pow(1e-30, 1 - 1 / a) == doctest::Approx(at_zero).epsilon(1e-4));
}

TEST_CASE("young inequality on the circle") {
  const Tail arc = Tail::indicator(1.0);
  const auto y = circle_convolution_bound(arc, arc, 2, 4);
  CHECK(y.q == doctest::Approx(4.0 / 3));
  CHECK(y.holds);
  // The convolution is a tent of height 1 and base 2.
  CHECK(y.lhs == doctest::Approx(std::pow(0.4, 0.25)).epsilon(1e-3));
  CHECK(y.rhs == doctest::Approx(1.0).epsilon(1e-3));

  const auto z = circle_convolution_bound(arc, Tail::zero(), 2, 4);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  CHECK(z.holds);

  const Tail st = Tail::step({3, 1, 0.5}, {0.2, 1.0, 2.0});
  const auto s0 = circle_convolution_bound(st, arc, 1.5, 3), s1 = circle_convolution_bound(st, arc, 1.5, 3, 1.3);
  CHECK(s1.lhs == doctest::Approx(s0.lhs).epsilon(1e-12));
  CHECK(s1.rhs == doctest::Approx(s0.rhs).epsilon(1e-12));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.01, 1.0);
  for (int k = 0; k < 40; ++k) {
    const Tail f = Tail::step({U(rng) * 5, U(rng), U(rng)}, {U(rng), U(rng), U(rng)});
    const Tail g = Tail::step({U(rng) * 5, U(rng)}, {U(rng) * 2, U(rng) * 2});
    const double s = 1.1 + 2 * U(rng), r = s + 0.1 + 5 * U(rng);
    CHECK(circle_convolution_bound(f, g, s, r, 6 * U(rng), 1L << 12).holds);
  }
  CHECK_THROWS_AS((void)circle_convolution_bound(arc, arc, 3, 2), PreconditionError);
  CHECK_THROWS_AS((void)circle_convolution_bound(Tail::indicator(7), arc, 2, 4), PreconditionError);
}

TEST_CASE("fourier series of log(pi/|x|) does not converge in G(psi)") {
  const auto d = fourier_divergence_demo(log_model_psi(), {16, 256});
  CHECK(d.match_lo == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.match_hi == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.g0_distance == doctest::Approx(1.0).epsilon(1e-3));
  REQUIRE(d.gaps.size() == 2);
  for (const auto& g : d.gaps) {
    CHECK(g.gap >= 0.5 * d.g0_distance);
    CHECK(std::isfinite(g.sup_partial));
  }
  CHECK(d.gaps[1].sup_partial > d.gaps[0].sup_partial);
  CHECK_THROWS_AS((void)fourier_divergence_demo(psi_constant(1, kInf), {16}), PreconditionError);
  const Psi sq = psi_closed("p^2", 1, kInf, [](double p) { return 2 * std::log(p); });
  CHECK_THROWS_AS((void)fourier_divergence_demo(sq, {16}), PreconditionError);
  // psi(p) = p is equivalent to the moments; the distance to G0 is 1/e.
  const Psi lin = psi_closed("p", 1, kInf, [](double p) { return std::log(p); });
  const auto dl = fourier_divergence_demo(lin, {64});
  CHECK(dl.g0_distance == doctest::Approx(1 / kE).epsilon(1e-2));
  CHECK(dl.min_gap >= 0.5 * dl.g0_distance);

  const auto poly = fourier_gaps(series_trig_poly(SeriesKind::cosine, {1, 1}), log_model_psi(), {2, 5}, {2, 4});
  for (const auto& g : poly) CHECK(g.gap == 0.0);
}
