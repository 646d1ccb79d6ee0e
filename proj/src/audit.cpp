#include "gls/audit.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gls/catalog.hpp"
#include "gls/gnorm.hpp"
#include "gls/martingale.hpp"
#include "gls/operators.hpp"
#include "gls/series.hpp"
#include "gls/tail_bridge.hpp"

namespace gls {

namespace {

Json num_array(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(json_number(x));
  return a;
}

double band(const std::vector<double>& xs) {
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  return *hi / *lo;
}

CriterionResult closed_moments() {
  struct Case {
    const char* spec;
    double lo, hi;
  };
  const Case cases[] = {
      {"h_m(m=1)", 1.0, 30.0},
      {"h_m(m=2)", 1.0, 30.0},
      {"h_m(m=4)", 1.0, 30.0},
      {"f_a_gamma(a=1,gamma=0)", 1.05, 20.0},
      {"f_a_gamma(a=2,gamma=1)", 2.05, 20.0},
      {"f_a_gamma(a=1.5,gamma=-0.2)", 1.55, 4.9},
  };
  CriterionResult r{1, "closed-form moments match tail quadrature", true, Json::object()};
  Json rows = Json::array();
  for (const auto& c : cases) {
    const auto f = catalog_make(c.spec);
    double worst = 0.0;
    for (double p : linspace(c.lo, c.hi, 25))
      worst = std::max(worst, rel_diff(f.tail->lp_norm(p).as_double(), std::exp(f.log_moment(p))));
    const bool ok = worst < 1e-6;
    r.passed = r.passed && ok;
    rows.push_back({{"function", f.name()}, {"p_lo", c.lo}, {"p_hi", c.hi}, {"points", 25},
                    {"max_rel_diff", json_number(worst)}, {"passed", ok}});
  }
  r.detail["tolerance"] = 1e-6;
  r.detail["cases"] = rows;
  return r;
}

CriterionResult fundamental_oracle() {
  CriterionResult r{2, "fundamental function: closed form against grid oracle", true, Json::object()};
  Json rows = Json::array();
  for (const char* spec : {"zeta(a=1,b=3,alpha=1,beta=1)", "zeta(a=1,b=inf,alpha=1,beta=-1)"}) {
    const Psi z = psi_parse(spec);
    int agree = 0, flagged = 0, unflagged = 0;
    Json flags = Json::array();
    for (double e = -8.0; e <= 8.0 + 1e-9; e += 0.25) {
      const auto fp = fundamental_phi(z, std::pow(10.0, e));
      const double d = fp.closed_phi ? rel_diff(*fp.closed_phi, fp.phi) : kInf;
      if (d <= 1e-6) {
        ++agree;
      } else if (fp.flagged && fp.closed_branch) {
        ++flagged;
        flags.push_back({{"delta", fp.delta}, {"rel_diff", json_number(d)},
                         {"closed_branch", to_string(*fp.closed_branch)}});
      } else {
        ++unflagged;
      }
    }
    r.passed = r.passed && unflagged == 0;
    rows.push_back({{"psi", spec}, {"agree", agree}, {"flagged", flagged}, {"unflagged", unflagged},
                    {"flagged_points", flags}});
  }
  r.detail["tolerance"] = 1e-6;
  r.detail["log10_delta_grid"] = {-8.0, 8.0, 0.25};
  r.detail["psi"] = rows;
  return r;
}

CriterionResult small_delta_asymptotic() {
  CriterionResult r{3, "fundamental function as delta -> 0", true, Json::object()};
  const Psi z = zeta_make(1, 3, 1, 1);
  const double b = 3.0, beta = 1.0;
  std::vector<double> deltas{1e-6, 1e-8, 1e-10, 1e-12}, ratios;
  for (double d : deltas) {
    const double shape = std::pow(beta * b * b / kE, beta) * std::pow(d, 1.0 / b) * std::pow(std::abs(std::log(d)), -beta);
    ratios.push_back(fundamental_phi(z, d).phi / shape);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < ratios.size(); ++i)
    monotone = monotone && std::abs(ratios[i] - 1.0) < std::abs(ratios[i - 1] - 1.0);
  const bool in_band = ratios[2] >= 0.8 && ratios[2] <= 1.25;
  r.passed = monotone && in_band;
  r.detail = {{"psi", "zeta(a=1,b=3,alpha=1,beta=1)"}, {"delta", num_array(deltas)}, {"ratio", num_array(ratios)},
              {"band_at_1e-10", {0.8, 1.25}}, {"in_band", in_band}, {"monotone_toward_1", monotone}};
  return r;
}

CriterionResult norm_axioms() {
  CriterionResult r{4, "norm axioms", true, Json::object()};
  const Psi z = zeta_make(1, 3, 1, 1);
  const Tail bases[] = {*catalog_make("h_m(m=2)").tail, *catalog_make("f_a_gamma(a=1,gamma=0)").tail,
                        Tail::step({3.0, 1.5, 0.2}, {0.1, 0.4, 2.0})};
  double hom = 0.0;
  for (const Tail& t : bases) {
    const double base = g_norm(t, z).value.as_double();
    for (double c : {1e-3, 0.25, 3.0, 1e4}) hom = std::max(hom, rel_diff(g_norm(t.scaled(c), z).value.as_double(), c * base));
  }
  const bool hom_ok = hom <= 1e-12;

  // f, g are step functions on one random partition; f + g is taken cellwise.
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> V(-5.0, 5.0), M(0.05, 2.0);
  std::uniform_int_distribution<int> K(1, 8);
  int violations = 0;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int k = K(rng);
    std::vector<double> mass(k), f(k), g(k), s(k);
    for (int j = 0; j < k; ++j) {
      mass[j] = M(rng);
      f[j] = V(rng);
      g[j] = V(rng);
      s[j] = f[j] + g[j];
    }
    const double nf = g_norm(Tail::step(f, mass), z).value.as_double();
    const double ng = g_norm(Tail::step(g, mass), z).value.as_double();
    const double ns = g_norm(Tail::step(s, mass), z).value.as_double();
    worst = std::max(worst, ns / (nf + ng));
    if (ns > (nf + ng) * (1.0 + 1e-12)) ++violations;
  }
  const bool tri_ok = violations == 0;

  const bool zero_ok = g_norm(Tail::zero(), z).value.as_double() == 0.0;
  bool nonzero_ok = true;
  for (const Tail& t : {Tail::step({1e-3}, {1e-3}), Tail::step({1e-100}, {1.0}), Tail::indicator(1e-12)})
    nonzero_ok = nonzero_ok && g_norm(t, z).value.as_double() > 0.0;

  r.passed = hom_ok && tri_ok && zero_ok && nonzero_ok;
  r.detail = {{"psi", "zeta(a=1,b=3,alpha=1,beta=1)"},
              {"homogeneity_max_rel_diff", json_number(hom)},
              {"homogeneity_ok", hom_ok},
              {"triangle_pairs", 200},
              {"triangle_violations", violations},
              {"triangle_max_ratio", json_number(worst)},
              {"zero_norm_of_zero", zero_ok},
              {"positive_norm_of_nonzero", nonzero_ok}};
  return r;
}

CriterionResult chebyshev_domination() {
  CriterionResult r{5, "chebyshev bound dominates catalog tails", true, Json::object()};
  Json rows = Json::array();
  for (const char* name : {"h_m(m=1)", "h_m(m=2)", "h_m(m=4)", "f_a_gamma(a=1,gamma=0)", "f_a_gamma(a=2,gamma=1)",
                           "f_a_gamma(a=1.5,gamma=-0.2)", "g_b_nu(b=3,nu=0)", "g_b_nu(b=2,nu=1)", "log_singular(d=1)",
                           "f_ab_gamma_nu(a=1,b=3,gamma=0.5,nu=1)", "g_a_gamma_m(a=2,gamma=0.3,m=2)", "indicator(delta=0.5)"}) {
    const auto f = catalog_make(name);
    const Psi own = psi_from_moments(name, f.p_lo, f.p_hi, f.log_moment);
    int violations = 0;
    double min_margin = kInf;
    for (double lu : linspace(-10, 10, 50)) {
      const double u = std::exp(lu);
      const double t = (*f.tail)(u);
      const double bound = chebyshev_tail_bound(1.0, own, u);
      if (bound < t * (1.0 - 1e-12)) ++violations;
      if (t > 0.0) min_margin = std::min(min_margin, bound / t);
    }
    r.passed = r.passed && violations == 0;
    rows.push_back({{"function", f.name()}, {"violations", violations}, {"min_bound_over_tail", json_number(min_margin)}});
  }
  r.detail = {{"slack", 1e-12}, {"u_points", 50}, {"log_u_range", {-10.0, 10.0}}, {"functions", rows}};
  return r;
}

CriterionResult saddle_point() {
  CriterionResult r{6, "saddle-point atoms: moment band and tail hits", true, Json::object()};
  const auto s = saddle_point_example(2.0, 1.0, 60);
  std::vector<double> ps{1.9, 1.99, 1.999, 1.9999}, ratios;
  for (double p : ps) ratios.push_back(std::exp(saddle_point_log_moment(s, p) + s.beta * std::log(s.b - p)));
  int hits = 0;
  for (const auto& [k, lt, lc] : s.hits)
    if (lt >= lc) ++hits;
  const double bd = band(ratios);
  r.passed = bd <= 10.0 && hits >= 3;
  r.detail = {{"b", s.b}, {"beta", s.beta}, {"K", s.K}, {"p", num_array(ps)}, {"normalized_moment", num_array(ratios)},
              {"band", json_number(bd)}, {"hits", hits}, {"atoms", s.K}};
  return r;
}

CriterionResult hilbert_growth() {
  CriterionResult r{7, "conjugate series growth and partial-sum audit", true, Json::object()};
  const std::vector<double> ps{2, 4, 8, 16, 32};
  const auto f = series_f_d(1.0, 1L << 18);
  const auto h = hilbert_transform_series(f);
  std::vector<double> rf, rh;
  for (const auto& n : series_lp_norms(f, ps)) rf.push_back(n.value / n.p);
  for (const auto& n : series_lp_norms(h, ps)) rh.push_back(n.value / (n.p * n.p));
  const auto audit = riesz_growth_audit(f, ps, {16, 256, 4096});
  const double bf = band(rf), bh = band(rh);
  r.passed = bf <= 10.0 && bh <= 10.0 && audit.max_normalized <= 1.0;
  r.detail = {{"n_max", f.n_max},
              {"p", num_array(ps)},
              {"f_over_p", num_array(rf)},
              {"hf_over_p2", num_array(rh)},
              {"band_f", json_number(bf)},
              {"band_hf", json_number(bh)},
              {"partial_sum_M", {16, 256, 4096}},
              {"partial_sum_max_normalized", json_number(audit.max_normalized)}};
  return r;
}

CriterionResult divergence() {
  CriterionResult r{8, "bounded sequences that do not converge in the norm", true, Json::object()};
  const auto fd = fourier_divergence_demo(log_model_psi(), {16, 256, 4096});
  std::vector<double> fg;
  bool f_ok = fd.g0_distance > 0.0;
  for (const auto& g : fd.gaps) {
    fg.push_back(g.gap);
    f_ok = f_ok && g.gap >= 0.25 * fd.g0_distance;
  }
  const Psi half = psi_closed("(1-p/2)^-1/2", 1.0, 2.0, [](double p) { return -0.5 * std::log1p(-p / 2.0); });
  const auto md = martingale_divergence(unit_function("g_b_nu(b=2,nu=0)"), half, 12);
  bool m_ok = md.uniform_bound && md.gaps.size() == 13;
  for (double g : md.gaps) m_ok = m_ok && g >= 0.25 * md.g0_distance;
  r.passed = f_ok && m_ok;
  r.detail = {{"fourier", {{"psi", "log_model()"}, {"M", {16, 256, 4096}}, {"g0_distance", json_number(fd.g0_distance)},
                           {"gaps", num_array(fg)}, {"passed", f_ok}}},
              {"martingale", {{"f", "g_b_nu(b=2,nu=0)"}, {"psi", "(1-p/2)^-1/2"},
                              {"g0_distance", json_number(md.g0_distance)}, {"g_norm_f", json_number(md.g_norm_f)},
                              {"level_norms", num_array(md.level_norms)}, {"uniform_bound", md.uniform_bound},
                              {"gaps", num_array(md.gaps)}, {"passed", m_ok}}}};
  return r;
}

struct ConvergenceCase {
  const char* f;
  const char* psi;
  const char* nu;
};

CriterionResult convergence() {
  CriterionResult r{9, "martingale convergence in the dominated space", true, Json::object()};
  const ConvergenceCase cases[] = {
      {"step(v0=1,v1=3,v2=2,v3=5,v4=4,v5=0,v6=2,v7=6)", "zeta(a=1,b=2,alpha=1,beta=0.5)", "zeta(a=1,b=2,alpha=3,beta=1.5)"},
      {"identity()", "zeta(a=1,b=2,alpha=1,beta=0.5)", "zeta(a=1,b=2,alpha=3,beta=1.5)"},
      {"power(r=2)", "zeta(a=1,b=2,alpha=1,beta=0.5)", "zeta(a=1,b=2,alpha=3,beta=1.5)"},
      {"g_b_nu(b=2,nu=0)", "zeta(a=1,b=2,alpha=1,beta=0.5)", "zeta(a=1,b=2,alpha=3,beta=1.5)"},
      {"g_b_nu(b=4,nu=1)", "zeta(a=1,b=4,alpha=1,beta=1.25)", "zeta(a=1,b=4,alpha=3,beta=2.25)"},
  };
  Json rows = Json::array();
  for (const auto& c : cases) {
    const auto m = dyadic_martingale(unit_function(c.f), 12);
    const auto cv = martingale_convergence(m, psi_parse(c.psi), psi_parse(c.nu));
    r.passed = r.passed && cv.trend_to_zero;
    rows.push_back({{"f", c.f}, {"psi", c.psi}, {"nu", c.nu}, {"sup_level_norm", json_number(cv.sup_level_norm)},
                    {"ladder", num_array(cv.ladder)}, {"monotone_after_3", cv.monotone_after_3},
                    {"final_ratio", json_number(cv.final_ratio)}, {"passed", cv.trend_to_zero}});
  }
  r.detail = {{"depth", 12}, {"final_ratio_limit", 0.05}, {"cases", rows}};
  return r;
}

CriterionResult doob_upcrossing() {
  CriterionResult r{10, "Doob and upcrossing audits", true, Json::object()};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 4.0);
  std::vector<double> steps(64);
  for (double& v : steps) v = U(rng);
  std::vector<DyadicMartingale> set;
  for (const char* s : {"const(c=1)", "identity()", "half_indicator()", "power(r=2)", "g_b_nu(b=2,nu=0)",
                        "g_b_nu(b=4,nu=1)"})
    set.push_back(dyadic_martingale(unit_function(s), 12));
  set.push_back(dyadic_martingale(unit_step(steps), 12));
  const std::vector<double> ps{1.5, 2.0, 4.0};
  const std::pair<double, double> bands[] = {{0.25, 0.75}, {1.0, 2.0}, {0.5, 4.0}};
  Json rows = Json::array();
  for (const auto& m : set) {
    const auto doob = doob_audit(m, ps);
    double worst_doob = 0.0;
    for (const auto& row : doob.rows) worst_doob = std::max(worst_doob, row.ratio / row.bound);
    bool up_ok = true;
    double worst_up = 0.0;
    for (double p : ps)
      for (const auto& [c, d] : bands) {
        const auto u = upcrossing_audit(m, c, d, p);
        up_ok = up_ok && u.holds;
        worst_up = std::max(worst_up, u.mean_upcrossings / u.bound);
      }
    r.passed = r.passed && doob.holds && up_ok;
    rows.push_back({{"f", m.source.label}, {"doob_holds", doob.holds}, {"doob_max_ratio_over_bound", json_number(worst_doob)},
                    {"upcrossing_holds", up_ok}, {"upcrossing_max_mean_over_bound", json_number(worst_up)}});
  }
  r.detail = {{"slack", 1.001}, {"p", num_array(ps)}, {"depth", 12}, {"cases", rows}};
  return r;
}

}  // namespace

CriterionResult audit_criterion(int id) {
  switch (id) {
    case 1: return closed_moments();
    case 2: return fundamental_oracle();
    case 3: return small_delta_asymptotic();
    case 4: return norm_axioms();
    case 5: return chebyshev_domination();
    case 6: return saddle_point();
    case 7: return hilbert_growth();
    case 8: return divergence();
    case 9: return convergence();
    case 10: return doob_upcrossing();
    default: throw PreconditionError("audit: criterion id must be 1.." + std::to_string(kAuditCount));
  }
}

std::vector<CriterionResult> audit_all() {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kAuditCount; ++id) out.push_back(audit_criterion(id));
  return out;
}

Json audit_json(const std::vector<CriterionResult>& results) {
  Json j = Json::object();
  j["schema"] = 1;
  j["command"] = "audit-all";
  bool all = true;
  Json arr = Json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    arr.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
  }
  j["passed"] = all;
  j["criteria"] = arr;
  return j;
}

}  // namespace gls
