#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <random>

#include "gls/martingale.hpp"
#include "gls/quadrature.hpp"
#include "gls/sup_search.hpp"

using namespace gls;

namespace {

// Moment envelope of x^{-1/b} on [0,1]: |f|_p = (1 - p/b)^{-1/p}.
Psi power_envelope(double b) {
  return psi_closed("moments", 1.0, b, [b](double p) { return -std::log1p(-p / b) / p; });
}

// nu = psi (p-1)^{-(1+D)} (b-p)^{-D}: the G(1,b) convergence space with shift D.
Psi shifted(const Psi& psi, double D) {
  const double b = psi.b();
  return psi_closed("shifted", 1.0, b, [psi, D, b](double p) {
    return psi.log_at(p) - (1.0 + D) * std::log(p - 1.0) - D * std::log(b - p);
  });
}

// int |x^{-1/2} - m| over [lo, hi], from the primitive 2 sqrt(x).
double abs_dev_sqrt(double lo, double hi, double m) {
  const double xs = std::clamp(1.0 / (m * m), lo, hi);
  auto P = [](double x) { return 2.0 * std::sqrt(x); };
  return (P(xs) - P(lo) - m * (xs - lo)) + (m * (hi - xs) - (P(hi) - P(xs)));
}

}  // namespace

TEST_CASE("conditional expectations on dyadic cells") {
  for (int n : {0, 3, 7}) {
    for (double v : condition_on_dyadic(unit_function("const(c=2.5)"), n)) CHECK(v == 2.5);
  }
  CHECK(condition_on_dyadic(unit_function("half_indicator()"), 0)[0] == 0.5);
  const auto id = condition_on_dyadic(unit_function("identity()"), 5);
  for (std::size_t k = 0; k < id.size(); ++k) CHECK(id[k] == doctest::Approx((2.0 * k + 1) / 64.0).epsilon(1e-15));

  // Aligned step functions are reproduced exactly.
  const std::vector<double> v = {1, 3, 2, 5, 4, 0, 2, 6};
  CHECK(condition_on_dyadic(unit_step(v), 3) == v);
  const auto fine = condition_on_dyadic(unit_step(v), 5);
  for (std::size_t k = 0; k < fine.size(); ++k) CHECK(fine[k] == v[k / 4]);

  // Primitive-based cell means against adaptive quadrature of the values.
  for (const char* s : {"g_b_nu(b=2,nu=0)", "g_b_nu(b=4,nu=1)", "power(r=2.5)"}) {
    INFO(s);
    const auto f = unit_function(s);
    const auto m = condition_on_dyadic(f, 6);
    for (int k : {1, 17, 63}) {
      const double lo = k / 64.0, hi = (k + 1) / 64.0;
      CHECK(m[k] == doctest::Approx(integrate(f.value, lo, hi, 1e-13).value * 64.0).epsilon(1e-10));
    }
  }
  // First cell of x^{-1/2}: 2 sqrt(h) / h.
  CHECK(condition_on_dyadic(unit_function("g_b_nu(b=2)"), 4)[0] == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("martingale identity and Jensen contraction") {
  for (const char* s : {"identity()", "power(r=2)", "g_b_nu(b=2,nu=0)", "g_b_nu(b=4,nu=1)", "step(v0=1,v1=3,v2=2,v3=5)"}) {
    INFO(s);
    const auto m = dyadic_martingale(unit_function(s), 12);
    CHECK(m.depth() == 12);
    CHECK(m.martingale_identity());
    for (double p : {1.0, 1.5, 1.9}) {
      const double fp = m.source.tail.lp_norm(p).as_double();
      for (int n = 0; n <= 12; ++n) CHECK(m.level_tail(n).lp_norm(p).as_double() <= fp * (1 + 1e-9));
    }
  }
  auto m = dyadic_martingale(unit_function("identity()"), 4);
  m.levels[2][1] += 1e-12;
  CHECK_FALSE(m.martingale_identity());
}

TEST_CASE("difference moments against exact integrals") {
  // |x - 1/2|_p^p = 2^{-p} / (p + 1).
  const auto id = dyadic_martingale(unit_function("identity()"), 6);
  for (double p : {1.0, 1.5, 3.0})
    CHECK(std::exp(id.difference_log_moment(0)(p)) == doctest::Approx(0.5 * std::pow(p + 1, -1 / p)).epsilon(1e-9));
  // Per cell |x - m|_1 = h / 4 for the identity at level n.
  CHECK(std::exp(id.difference_log_moment(6)(1.0)) == doctest::Approx(1.0 / 256).epsilon(1e-9));

  // x^{-1/2} at p = 1, every level: sum of exact per-cell absolute deviations.
  const auto g = dyadic_martingale(unit_function("g_b_nu(b=2,nu=0)"), 8);
  for (int n : {0, 3, 8}) {
    INFO(n);
    const double h = std::ldexp(1.0, -n);
    double s = 0;
    for (std::size_t k = 0; k < g.levels[n].size(); ++k) s += abs_dev_sqrt(k * h, (k + 1) * h, g.levels[n][k]);
    CHECK(std::exp(g.difference_log_moment(n)(1.0)) == doctest::Approx(s).epsilon(1e-7));
  }
  // Level 0 at p = 1 is exactly 1 (split at x = 1/4).
  CHECK(std::exp(g.difference_log_moment(0)(1.0)) == doctest::Approx(1.0).epsilon(1e-9));
  // The moment diverges at p = b.
  CHECK(g.difference_log_moment(5)(2.0) == kInf);

  // (x^2 - m)^2 integrated exactly on each cell.
  const auto q = dyadic_martingale(unit_function("power(r=2)"), 5);
  double s = 0;
  const double h = 1.0 / 32;
  for (int k = 0; k < 32; ++k) {
    const double a = k * h, b = a + h, m = q.levels[5][k];
    s += (std::pow(b, 5) - std::pow(a, 5)) / 5 - 2 * m * (b * b * b - a * a * a) / 3 + m * m * h;
  }
  CHECK(std::exp(q.difference_log_moment(5)(2.0)) == doctest::Approx(std::sqrt(s)).epsilon(1e-10));

  // Aligned steps: zero from the step resolution on.
  const auto st = dyadic_martingale(unit_step({1, 3, 2, 5, 4, 0, 2, 6}), 6);
  CHECK(st.difference_log_moment(2)(2.0) > -kInf);
  for (int n = 3; n <= 6; ++n) CHECK(st.difference_log_moment(n)(2.0) == -kInf);
}

TEST_CASE("L_p convergence of the martingale") {
  for (const char* s : {"identity()", "power(r=2)"}) {
    INFO(s);
    const auto m = dyadic_martingale(unit_function(s), 12);
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
      const auto l = lp_convergence_ladder(m, p);
      for (std::size_t n = 1; n < l.size(); ++n) CHECK(l[n] < l[n - 1]);
      CHECK(l.back() < 1e-3 * l.front());
    }
  }
  // Singular generators: the first cell dominates, |f_n - f|_p ~ h^{1/p - 1/b}.
  const auto g = dyadic_martingale(unit_function("g_b_nu(b=2,nu=0)"), 12);
  for (double p : {1.2, 1.5}) {
    const auto l = lp_convergence_ladder(g, p);
    for (std::size_t n = 1; n < l.size(); ++n) CHECK(l[n] < l[n - 1]);
    CHECK(l[12] / l[11] == doctest::Approx(std::pow(2.0, -(1 / p - 0.5))).epsilon(0.02));
  }
}

TEST_CASE("Doob maximal inequality") {
  const std::vector<double> ps = {1.5, 2, 4};
  const auto c = doob_audit(dyadic_martingale(unit_function("const(c=3)"), 12), ps);
  for (const auto& r : c.rows) CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-14));

  // f = x, p = 2: the running max evaluated directly on the finest cells.
  const auto m = dyadic_martingale(unit_function("identity()"), 12);
  const auto a = doob_audit(m, {2.0});
  double s = 0;
  for (std::size_t j = 0; j < 4096; ++j) {
    double mx = 0;
    for (int n = 0; n <= 12; ++n) mx = std::max(mx, m.levels[n][j >> (12 - n)]);
    s += mx * mx / 4096;
  }
  CHECK(a.rows[0].max_norm == doctest::Approx(std::sqrt(s)).epsilon(1e-12));
  CHECK(a.rows[0].max_norm <= 2 * a.rows[0].sup_level);
  CHECK(a.holds);

  // Depth 0: both sides are |f_0|_p.
  const auto one = doob_audit(dyadic_martingale(unit_function("g_b_nu(b=2)"), 0), ps);
  for (const auto& r : one.rows) CHECK(r.max_norm == doctest::Approx(r.sup_level).epsilon(1e-14));

  CHECK_THROWS_AS((void)doob_audit(m, {1.0}), PreconditionError);
  CHECK_THROWS_AS((void)doob_audit(dyadic_martingale(unit_step({1, -1}), 3), {2.0}), PreconditionError);
}

TEST_CASE("upcrossing counts and bound") {
  const auto low = dyadic_martingale(unit_function("const(c=0.5)"), 12);
  const auto u0 = upcrossing_audit(low, 1, 2, 2);
  CHECK(u0.mean_upcrossings == 0.0);
  CHECK(u0.holds);

  // Paths 1.5 -> 1.5 -> {0, 3}: half the mass crosses (1.5, 2.5) once.
  const auto alt = dyadic_martingale(unit_step({0, 3, 0, 3}), 2);
  CHECK(alt.levels[0][0] == 1.5);
  const auto u1 = upcrossing_audit(alt, 1.5, 2.5, 2);
  CHECK(u1.mean_upcrossings == 0.5);
  CHECK(u1.mean_upcrossings <= u1.doob_bound);
  CHECK(u1.holds);

  // The bound falls as d - c grows.
  double prev = kInf;
  for (double d : {2.0, 3.0, 5.0, 9.0}) {
    const double b = upcrossing_audit(alt, 1.5, d, 2).bound;
    CHECK(b < prev);
    prev = b;
  }
  CHECK_THROWS_AS((void)upcrossing_audit(alt, 2, 2, 2), PreconditionError);
  CHECK_THROWS_AS((void)upcrossing_audit(alt, 1, 2, 0.5), PreconditionError);
}

TEST_CASE("Doob and upcrossing audits on the martingale test set") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 4.0);
  std::vector<double> steps(64);
  for (double& v : steps) v = U(rng);
  std::vector<DyadicMartingale> set;
  for (const char* s : {"const(c=1)", "identity()", "half_indicator()", "power(r=2)", "g_b_nu(b=2,nu=0)",
                        "g_b_nu(b=4,nu=1)"})
    set.push_back(dyadic_martingale(unit_function(s), 12));
  set.push_back(dyadic_martingale(unit_step(steps), 12));
  for (const auto& m : set) {
    INFO(m.source.label);
    CHECK(doob_audit(m, {1.5, 2, 4}).holds);
    for (double p : {1.5, 2.0, 4.0})
      for (auto [c, d] : {std::pair{0.25, 0.75}, std::pair{1.0, 2.0}, std::pair{0.5, 4.0}}) {
        const auto u = upcrossing_audit(m, c, d, p);
        CHECK(u.holds);
        CHECK(u.mean_upcrossings <= u.doob_bound * (1 + 1e-12));
      }
  }
}

TEST_CASE("convergence ladder in a dominated space") {
  const Psi psi = power_envelope(2);
  const Psi nu = shifted(psi, 1.0);
  const auto st = dyadic_martingale(unit_step({1, 3, 2, 5, 4, 0, 2, 6}), 12);
  const auto r0 = martingale_convergence(st, psi, nu);
  for (int n = 3; n <= 12; ++n) CHECK(r0.ladder[n] == 0.0);
  CHECK(r0.trend_to_zero);

  const auto id = dyadic_martingale(unit_function("identity()"), 12);
  const auto r1 = martingale_convergence(id, psi, nu);
  CHECK(r1.monotone_after_3);
  CHECK(r1.final_ratio < 1e-3);
  CHECK(std::isfinite(r1.running_max_norm));

  // Endpoint split bound for the same sequence: uniform G(psi_{0,1}) bound
  // ||f_n - f|| <= ||max f_n|| + ||f||.
  const Psi psi01 = psi_transform(psi, Transform{TransformRule::lambda_gamma, 2.0, 0.0, 1.0});
  const double B = r1.running_max_norm + g_norm(id.source.tail, psi01).value.as_double();
  std::vector<std::pair<double, double>> grid;
  for (double p : endpoint_grid(1.0, 2.0, 41)) grid.emplace_back(p, std::exp(id.difference_log_moment(12)(p)));
  CHECK(convergence_bound_check(grid, nu, psi01, B, 1e-3).verdict == Tri::yes);

  // Not dominated: nu = psi itself.
  CHECK_THROWS_AS((void)martingale_convergence(id, psi, psi), PreconditionError);
}

TEST_CASE("singular generator converges slowly in the shifted space") {
  const Psi psi = power_envelope(2);
  const auto g = dyadic_martingale(unit_function("g_b_nu(b=2,nu=0)"), 12);
  const auto r = martingale_convergence(g, psi, shifted(psi, 1.0));
  CHECK(r.monotone_after_3);
  CHECK(r.final_ratio < 1.0);
  CHECK(r.sup_level_norm <= 1.0 + 1e-9);
}

TEST_CASE("bounded martingale that does not converge") {
  const Psi psi = psi_closed("half-power", 1.0, 2.0, [](double p) { return -0.5 * std::log1p(-p / 2); });
  const auto r = martingale_divergence(unit_function("g_b_nu(b=2,nu=0)"), psi, 12);
  CHECK(r.g0_distance == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.uniform_bound);
  CHECK(r.gaps.size() == 13);
  for (double gap : r.gaps) {
    CHECK(gap >= 0.3);
    CHECK(gap <= r.g_norm_f + r.sup_level_norm);
  }
  CHECK(r.min_gap >= 0.25 * r.g0_distance);
  CHECK_THROWS_AS((void)martingale_divergence(unit_function("identity()"), psi, 12), PreconditionError);
}

TEST_CASE("unit function grammar") {
  CHECK(unit_function("step(v0=1,v1=2)").steps.size() == 2);
  CHECK_THROWS_AS((void)unit_function("step(v0=1,v1=2,v2=3)"), PreconditionError);
  CHECK_THROWS_AS((void)unit_function("step(v0=1,v2=2)"), PreconditionError);
  CHECK_THROWS_AS((void)unit_function("g_b_nu(b=1)"), PreconditionError);
  CHECK_THROWS_AS((void)unit_function("power(r=0)"), PreconditionError);
  CHECK_THROWS_AS((void)unit_function("nope()"), PreconditionError);
  CHECK_THROWS_AS((void)dyadic_martingale(unit_function("identity()"), 30), PreconditionError);
}
