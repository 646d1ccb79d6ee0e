#include "gls/duality.hpp"

#include <math.h>  // pchip.hpp calls unqualified isnan

#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <cmath>

#include "gls/quadrature.hpp"
#include "gls/sup_search.hpp"

namespace gls {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::diverges: return "diverges";
    case Verdict::converges: return "converges";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

Verdict ladder_verdict(const std::vector<double>& partial) {
  const std::size_t n = partial.size();
  if (n == 0) return Verdict::inconclusive;
  if (!std::isfinite(partial.back())) return Verdict::diverges;
  if (n < 4) return Verdict::inconclusive;
  const double d1 = partial[n - 3] - partial[n - 4];
  const double d2 = partial[n - 2] - partial[n - 3];
  const double d3 = partial[n - 1] - partial[n - 2];
  const double total = partial.back();
  if (d3 <= 1e-12 * total && d2 <= 1e-12 * total && d1 <= 1e-12 * total) return Verdict::converges;
  if (d1 > 0.0 && d2 >= 0.7 * d1 && d3 >= 0.7 * d2) return Verdict::diverges;
  if (d2 <= 0.5 * d1 && d3 <= 0.5 * d2 && d3 <= 1e-3 * total) return Verdict::converges;
  return Verdict::inconclusive;
}

OrliczEnvelope::OrliczEnvelope(Psi psi) : psi_(std::move(psi)) {
  require(psi_.finite_b(), "orlicz_envelope: needs finite b");
}

OrliczEnvelope orlicz_envelope(const Psi& psi) { return OrliczEnvelope(psi); }

double OrliczEnvelope::log_n(double u) const {
  if (u == 0.0) return -kInf;
  const double L = std::log(std::abs(u));
  return sup_search([&](double p) { return p * (L - psi_.log_at(p)); }, psi_.a(), psi_.b()).log_value;
}

double OrliczEnvelope::n(double u) const { return std::exp(log_n(u)); }

namespace {

struct ConjMax {
  double z = 0.0;
  double value = 0.0;
};

// sup_{z >= 0} (u z - N(z)) by golden search in s = log z. u z - N(z) is
// concave in z, hence unimodal in s.
ConjMax conjugate_max(const OrliczEnvelope& e, double u) {
  u = std::abs(u);
  if (u == 0.0) return {};
  auto g = [&](double s) {
    const double z = std::exp(s);
    return u * z - e.n(z);
  };
  double s0 = std::log(1.0 / u);
  double g0 = g(s0);
  double dir = g(s0 + 0.5) > g0 ? 1.0 : -1.0;
  double step = 0.5, a = s0 - step, c = s0 + step;
  for (int it = 0; it < 80; ++it) {
    const double s1 = s0 + dir * step;
    const double g1 = g(s1);
    if (g1 <= g0) {
      a = std::min(s0 - step, s1);
      c = std::max(s0 + step, s1);
      break;
    }
    s0 = s1;
    g0 = g1;
    step *= 2.0;
    if (s0 < -700.0) return {};  // supremum approached as z -> 0
    require(s0 < 700.0, "conjugate: u z - N(z) unbounded; N is not superlinear");
  }
  const MaxResult m = golden_max(g, a, c, 1e-12);
  if (m.fx <= 0.0) return {};
  return {std::exp(m.x), m.fx};
}

}  // namespace

double OrliczEnvelope::conjugate(double u) const { return conjugate_max(*this, u).value; }
double OrliczEnvelope::conjugate_argmax(double u) const { return conjugate_max(*this, u).z; }

OrliczEnvelope::Table OrliczEnvelope::tabulate(const std::vector<double>& u_grid) const {
  Table t;
  for (double u : u_grid) {
    t.u.push_back(u);
    t.n.push_back(n(u));
    t.conjugate.push_back(conjugate(u));
  }
  return t;
}

double convexity_defect(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), "convexity_defect: length mismatch");
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double w = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
    const double chord = (1.0 - w) * y[i - 1] + w * y[i + 1];
    worst = std::max(worst, (y[i] - chord) / std::max(1.0, std::abs(y[i])));
  }
  return worst;
}

FundamentalOrlicz::FundamentalOrlicz(const Psi& psi, double span) {
  require(span > 0.0, "fundamental orlicz: span must be positive");
  s_ = linspace(-span, span, static_cast<std::size_t>(8.0 * span) + 1);
  for (double s : s_) lphi_.push_back(log_fundamental(psi, s));
  for (std::size_t i = 1; i < s_.size(); ++i)
    if (!(lphi_[i] > lphi_[i - 1])) throw NumericalError("fundamental orlicz: phi not increasing; inversion fails");
  interp_ = boost::math::interpolators::pchip<std::vector<double>>(std::vector<double>(s_), std::vector<double>(lphi_));
}

double FundamentalOrlicz::log_phi(double s) const {
  const std::size_t n = s_.size();
  if (s <= s_.front()) return lphi_.front() + (s - s_.front()) * (lphi_[1] - lphi_[0]) / (s_[1] - s_[0]);
  if (s >= s_.back()) return lphi_.back() + (s - s_.back()) * (lphi_[n - 1] - lphi_[n - 2]) / (s_[n - 1] - s_[n - 2]);
  return interp_(s);
}

double FundamentalOrlicz::log_delta_for(double log_w) const {
  // 1/phi(delta) = w  <=>  log phi(s) = -log w, with log phi increasing in s.
  const double target = -log_w;
  const std::size_t n = s_.size();
  if (target <= lphi_.front()) return s_.front() + (target - lphi_.front()) * (s_[1] - s_[0]) / (lphi_[1] - lphi_[0]);
  if (target >= lphi_.back())
    return s_.back() + (target - lphi_.back()) * (s_[n - 1] - s_[n - 2]) / (lphi_[n - 1] - lphi_[n - 2]);
  const auto it = std::upper_bound(lphi_.begin(), lphi_.end(), target);
  const std::size_t i = static_cast<std::size_t>(it - lphi_.begin()) - 1;
  return bisect([&](double s) { return interp_(s) - target; }, s_[i], s_[i + 1], 1e-13);
}

ModularLadder modular_ladder(const std::function<double(double)>& log_n, const Tail& g, double eps,
                             const std::vector<double>& R_ladder, int per_decade) {
  require(eps > 0.0, "modular_ladder: eps must be positive");
  require(!R_ladder.empty(), "modular_ladder: empty R ladder");
  require(per_decade >= 4, "modular_ladder: need >= 4 cells per decade");
  for (std::size_t i = 0; i < R_ladder.size(); ++i)
    require(R_ladder[i] > 1.0 && (i == 0 || R_ladder[i] > R_ladder[i - 1]), "modular_ladder: R must increase, > 1");
  const double le = std::log(eps);
  // log of sum over cells in [t0, t1] of N(eps u_mid) (T(u_lo) - T(u_hi)).
  auto band = [&](double t0, double t1) {
    const int n = std::max(1, static_cast<int>(std::ceil(per_decade * (t1 - t0) / kLn10)));
    std::vector<double> terms;
    double l0 = g.log_at(t0);
    for (int k = 0; k < n; ++k) {
      const double a = t0 + (t1 - t0) * k / n, b = t0 + (t1 - t0) * (k + 1) / n;
      const double l1 = g.log_at(b);
      if (l0 > -kInf && l1 < l0) {
        const double mass = l0 + (l1 == -kInf ? 0.0 : std::log(-std::expm1(l1 - l0)));
        terms.push_back(log_n(le + 0.5 * (a + b)) + mass);
      }
      l0 = l1;
    }
    return log_sum_exp(terms);
  };
  ModularLadder out;
  out.eps = eps;
  double acc = -kInf, prev = 0.0;
  std::vector<double> partial;
  for (double R : R_ladder) {
    const double t = std::log(R);
    acc = log_add(acc, band(-t, -prev));
    acc = log_add(acc, band(prev, t));
    prev = t;
    const double J = std::exp(acc);
    out.partial.emplace_back(R, J);
    partial.push_back(J);
  }
  out.verdict = ladder_verdict(partial);
  return out;
}

CatalogFunction generating_function(double a, double b, double alpha, double beta) {
  require(std::isfinite(b) && b > a && a >= 1.0, "generating_function: need 1 <= a < b < inf");
  require(alpha > 0.0 && beta > 0.0, "generating_function: need alpha, beta > 0");
  return catalog_make(Call{"f_ab_gamma_nu", {{"a", a}, {"b", b}, {"gamma", alpha - 1.0 / a}, {"nu", beta - 1.0 / b}}});
}

NonEquivReport orlicz_nonequiv_witness(const Psi& psi, const Tail& g, const std::vector<double>& eps_ladder,
                                       const std::vector<double>& R_ladder, bool strict) {
  require(!eps_ladder.empty(), "orlicz_nonequiv_witness: empty eps ladder");
  NonEquivReport out;
  double lo = kInf, hi = -kInf;
  for (double p : endpoint_grid(psi.a(), psi.b(), 65)) {
    const double r = g.log_lp_norm(p) - psi.log_at(p);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  out.log_match_spread = std::isfinite(hi - lo) ? hi - lo : kInf;
  out.matches = out.log_match_spread <= std::log(1e3);
  require(out.matches || !strict, "orlicz_nonequiv_witness: |g|_p does not track psi(p)");
  const FundamentalOrlicz fo(psi);
  bool all_div = true, all_conv = true;
  for (double eps : eps_ladder) {
    out.ladders.push_back(modular_ladder([&](double lw) { return fo.log_n(lw); }, g, eps, R_ladder));
    all_div = all_div && out.ladders.back().verdict == Verdict::diverges;
    all_conv = all_conv && out.ladders.back().verdict == Verdict::converges;
  }
  out.verdict = all_div ? Verdict::diverges : (all_conv ? Verdict::converges : Verdict::inconclusive);
  return out;
}

MarcinkiewiczReport marcinkiewicz_nonequiv_witness(const Psi& psi) {
  require(psi.zeta().has_value(), "marcinkiewicz_nonequiv_witness: needs a zeta-family psi");
  auto fo = std::make_shared<FundamentalOrlicz>(psi);
  Tail::Closed c;
  c.log_tail = [fo](double t) { return fo->log_delta_for(t); };
  Tail tail = Tail::closed(std::move(c));
  GNormResult norm = g_norm(tail, psi);
  MarcinkiewiczReport out{tail, norm, {}, Verdict::inconclusive};
  out.ladder = norm.lower.ladder;
  out.ladder.insert(out.ladder.end(), norm.upper.ladder.begin(), norm.upper.ladder.end());
  if (norm.value.infinite) out.verdict = Verdict::diverges;
  else if (norm.lower.converged && norm.upper.converged) out.verdict = Verdict::converges;
  return out;
}

AdjointReport adjoint_condition_ratio(const Tail& g, const Psi& psi, const std::vector<double>& z_grid) {
  require(!z_grid.empty(), "adjoint_condition_ratio: empty z grid");
  AdjointReport out;
  std::vector<double> z(z_grid);
  std::sort(z.begin(), z.end());
  require(z.front() > 0.0, "adjoint_condition_ratio: z must be positive");
  const double ls = g.log_sup();
  const std::vector<double> br = g.log_breaks();
  auto F = [&g](double t) { return t + g.log_at(t); };
  std::vector<double> lr;  // log ratio where T(z) > 0
  std::size_t divergent = 0;
  double best = -kInf;
  for (double zz : z) {
    const double t = std::log(zz);
    const double lt = g.log_at(t);
    if (lt == -kInf || !(t < ls)) {
      out.ladder.emplace_back(zz, Extended::finite(0.0));
      continue;
    }
    const LineIntegral I = integrate_exp_line(F, t, std::isfinite(ls) ? ls : kInf, br, quadrature_rel_tol());
    double l;
    if (I.divergent) {
      ++divergent;
      l = kInf;
    } else {
      l = I.log_value - log_fundamental(psi, lt);
    }
    lr.push_back(l);
    out.ladder.emplace_back(zz, extended_exp(l));
    if (l > best) {
      best = l;
      out.z_at_max = zz;
    }
  }
  require(lr.empty() || divergent < lr.size(), "adjoint_condition_ratio: upper integral diverges for every z");
  out.max_ratio = extended_exp(best);
  if (divergent > 0 || best == kInf) {
    out.verdict = Verdict::diverges;
    return out;
  }
  // Growth at either end of the z ladder, judged on the log ratio.
  auto grows = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n < 4) return false;
    const double d1 = v[n - 3] - v[n - 4], d2 = v[n - 2] - v[n - 3], d3 = v[n - 1] - v[n - 2];
    return d1 > 0.0 && d2 >= 0.7 * d1 && d3 >= 0.7 * d2;
  };
  auto settles = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n < 4) return true;
    const double d1 = v[n - 3] - v[n - 4], d2 = v[n - 2] - v[n - 3], d3 = v[n - 1] - v[n - 2];
    return d3 <= 1e-12 || (d2 <= 0.7 * d1 && d3 <= 0.7 * d2);
  };
  const std::vector<double> up(lr.begin(), lr.end());
  const std::vector<double> down(lr.rbegin(), lr.rend());
  if (grows(up) || grows(down)) out.verdict = Verdict::diverges;
  else if (settles(up) && settles(down)) out.verdict = Verdict::converges;
  return out;
}

Tail log_heavy_tail(double k) {
  require(k > 0.0, "log_heavy_tail: k must be positive");
  Tail::Closed c;
  const double t2 = kLn2;
  c.log_tail = [k, t2](double t) { return t < t2 ? -t2 - k * std::log(t2) : -t - k * std::log(t); };
  c.log_breaks = {t2};
  c.total_mass = std::exp(-t2 - k * std::log(t2));
  return Tail::closed(std::move(c));
}

}  // namespace gls
