#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gls/duality.hpp"

using namespace gls;

namespace {

std::vector<double> decades(int lo, int hi) {
  std::vector<double> r;
  for (int k = lo; k <= hi; ++k) r.push_back(std::pow(10.0, k));
  return r;
}

}  // namespace

TEST_CASE("envelope of a constant weight") {
  const auto e = orlicz_envelope(psi_constant(1, 2));
  CHECK(e.n(0.0) == 0.0);
  for (double u : {0.01, 0.3, 0.9}) CHECK(e.n(u) == doctest::Approx(u).epsilon(1e-6));
  for (double u : {1.5, 3.0, 40.0}) CHECK(e.n(u) == doctest::Approx(u * u).epsilon(1e-6));
  CHECK(e.n(-3.0) == doctest::Approx(9.0).epsilon(1e-6));
  CHECK_THROWS_AS(orlicz_envelope(psi_constant(1, kInf)), PreconditionError);
}

TEST_CASE("envelope is convex and satisfies Young") {
  const auto e = orlicz_envelope(zeta_make(1, 3, 1, 1));
  const auto u = geomspace(1e-2, 1e2, 41);
  std::vector<double> n;
  for (double x : u) n.push_back(e.n(x));
  CHECK(convexity_defect(u, n) <= 1e-9);
  for (double z : {0.1, 1.0, 5.0})
    for (double w : {0.05, 0.7, 3.0, 30.0}) CHECK(w * z <= e.n(z) + e.conjugate(w) + 1e-9 * (1 + w * z));
}

TEST_CASE("Young equality at the derivative") {
  const auto e = orlicz_envelope(zeta_make(1, 3, 1, 1));
  for (double z : {0.5, 2.0, 6.0}) {
    const double h = 1e-4 * z;
    const double u = (e.n(z + h) - e.n(z - h)) / (2 * h);
    CHECK(u * z - e.n(z) == doctest::Approx(e.conjugate(u)).epsilon(1e-6));
  }
}

TEST_CASE("biconjugate returns the envelope") {
  const auto e = orlicz_envelope(zeta_make(1, 3, 1, 1));
  for (double z : {0.5, 1.0, 2.0, 4.0}) {
    const MaxResult m = golden_max([&](double s) { return std::exp(s) * z - e.conjugate(std::exp(s)); }, -8, 8, 1e-10);
    CHECK(m.fx == doctest::Approx(e.n(z)).epsilon(1e-5));
  }
}

TEST_CASE("ladder verdicts") {
  CHECK(ladder_verdict({1, 2, 3, 4, 5}) == Verdict::diverges);
  CHECK(ladder_verdict({1, 1.5, 1.75, 1.8, 1.8001}) == Verdict::converges);
  CHECK(ladder_verdict({2, 2, 2, 2}) == Verdict::converges);
  CHECK(ladder_verdict({1, 2}) == Verdict::inconclusive);
  CHECK(ladder_verdict({1, 2, 2.2, 3, 3.05}) == Verdict::inconclusive);
}

TEST_CASE("fundamental Orlicz function inverts phi") {
  const Psi z = zeta_make(1, 3, 1, 1);
  const FundamentalOrlicz fo(z, 60);
  for (double s : {-40.0, -3.3, 0.0, 7.1, 50.0}) {
    const double lphi = log_fundamental(z, s);
    CHECK(fo.log_phi(s) == doctest::Approx(lphi).epsilon(1e-5));
    CHECK(fo.log_delta_for(-lphi) == doctest::Approx(s).epsilon(1e-5));
  }
}

TEST_CASE("Orlicz non-equivalence witness") {
  const Psi z = zeta_make(1, 3, 1, 1);
  const auto g = generating_function(1, 3, 1, 1);
  const auto r = orlicz_nonequiv_witness(z, *g.tail, {1.0, 0.5, 0.25, 0.1}, decades(1, 12));
  CHECK(r.matches);
  CHECK(r.verdict == Verdict::diverges);
  for (const auto& l : r.ladders) CHECK(l.verdict == Verdict::diverges);

  const auto b = orlicz_nonequiv_witness(z, Tail::indicator(1), {1.0, 0.5}, decades(1, 8), false);
  CHECK(b.verdict == Verdict::converges);
  CHECK_THROWS_AS(orlicz_nonequiv_witness(z, Tail::indicator(1), {1.0}, decades(1, 8)), PreconditionError);
}

TEST_CASE("Marcinkiewicz non-equivalence witness") {
  const Psi z = zeta_make(1, 3, 1, 1);
  const auto r = marcinkiewicz_nonequiv_witness(z);
  CHECK(r.verdict == Verdict::diverges);
  CHECK(r.norm.value.infinite);
  // Extending the p-range never lowers the supremum.
  double run = 0.0;
  for (const auto& [p, v] : r.norm.upper.ladder) {
    const double next = std::max(run, v.as_double());
    CHECK(next >= run);
    run = next;
  }
  // Dropping large values lowers every moment.
  for (double p : {1.5, 2.0, 2.5})
    CHECK(r.tail.below(100.0).lp_norm(p).as_double() <= r.tail.lp_norm(p).as_double() * (1 + 1e-9));
  CHECK_THROWS_AS(marcinkiewicz_nonequiv_witness(psi_constant(1, 3)), PreconditionError);
}

TEST_CASE("adjoint necessary condition") {
  const Psi z = zeta_make(1, 3, 1, 1);
  const auto grid = geomspace(1e-6, 1e12, 73);
  const auto ind = adjoint_condition_ratio(Tail::indicator(1), z, grid);
  CHECK(ind.max_ratio.is_finite());
  CHECK(ind.verdict == Verdict::converges);

  // f_{2,0} lies in L_q for q > 2, inside the admissible window (3/2, inf).
  const auto f = catalog_make("f_a_gamma(a=2,gamma=0)");
  const auto fin = adjoint_condition_ratio(*f.tail, z, grid);
  CHECK(fin.max_ratio.is_finite());
  CHECK(fin.verdict == Verdict::converges);

  const auto heavy = adjoint_condition_ratio(log_heavy_tail(1.5), z, grid);
  CHECK(heavy.verdict == Verdict::diverges);
  CHECK_THROWS_AS(adjoint_condition_ratio(log_heavy_tail(0.5), z, grid), PreconditionError);
}

TEST_CASE("finite envelope modular implies membership") {
  const Psi z = zeta_make(1, 3, 1, 1);
  const auto e = orlicz_envelope(z);
  auto log_n = [&](double lw) { return e.log_n(std::exp(lw)); };
  for (const char* s : {"h_m(m=1)", "h_m(m=2)", "indicator(delta=2)"}) {
    const auto f = catalog_make(s);
    const auto m = modular_ladder(log_n, *f.tail, 0.5, decades(1, 8), 16);
    INFO(s);
    CHECK(m.verdict == Verdict::converges);
    CHECK(g_norm(*f.tail, z).value.is_finite());
  }
}
