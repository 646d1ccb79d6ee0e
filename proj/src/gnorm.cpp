#include "gls/gnorm.hpp"

#include <algorithm>

namespace gls {

const char* to_string(PhiBranch b) {
  switch (b) {
    case PhiBranch::phi1: return "phi1";
    case PhiBranch::phi2: return "phi2";
    case PhiBranch::phi3: return "phi3";
    case PhiBranch::crossover: return "crossover";
    case PhiBranch::grid_oracle: return "grid-oracle";
  }
  return "unknown";
}

const char* to_string(Tri t) {
  switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    case Tri::indeterminate: return "indeterminate";
  }
  return "unknown";
}

GNormResult g_norm(const LogMomentFn& log_moment, const Psi& psi, const GNormOptions& opt) {
  auto lr = [&](double p) {
    const double m = log_moment(p);
    if (m == -kInf || m == kInf) return m;
    return m - psi.log_at(p);
  };
  SupOptions so;
  so.grid_points = opt.grid_points;
  so.upper_ref = opt.upper_ref;
  const SupResult s = sup_search(lr, psi.a(), psi.b(), so);
  const bool any_finite = std::any_of(s.profile.begin(), s.profile.end(), [](const auto& e) { return !e.second.infinite; });
  require(any_finite, "g_norm: f has no finite moment in (a, b)");
  return GNormResult{s.value, s.p_star, s.endpoint_sup, s.lower, s.upper, s.profile};
}

GNormResult g_norm(const Tail& f, const Psi& psi, const GNormOptions& opt) {
  return g_norm([&f](double p) { return f.log_lp_norm(p); }, psi, opt);
}

double catalog_log_norm(const CatalogFunction& f, double p, bool prefer_closed) {
  if (!(p > f.p_lo && p < f.p_hi)) {
    // Outside the open finite-moment range; the left endpoint is finite only
    // for families with p_lo == 1 that are integrable there.
    if (!(f.p_lo == 1.0 && p == 1.0)) return kInf;
  }
  if (prefer_closed && f.log_moment) return f.log_moment(p);
  require(f.tail.has_value(), "catalog entry has neither closed moments nor a tail");
  return f.tail->log_lp_norm(p);
}

GNormResult g_norm(const CatalogFunction& f, const Psi& psi, const GNormOptions& opt) {
  const bool closed = opt.prefer_closed;
  return g_norm([&f, closed](double p) { return catalog_log_norm(f, p, closed); }, psi, opt);
}

PhiClosed phi_closed_form(const ZetaParams& z, double delta) {
  require(delta > 0.0, "phi: delta must be positive");
  const double L = std::log(delta);
  const double a = z.a, b = z.b, al = z.alpha, be = z.beta, h = z.h;
  PhiClosed best{-kInf, PhiBranch::crossover, h};
  auto consider = [&best](double logv, PhiBranch br, double p) {
    if (logv > best.phi) best = {logv, br, p};
  };
  // Left branch (p in (a, h)): maximizer of L/p + alpha log(p - a).
  if (al > 0.0 && L >= al * h * h / (h - a)) {
    const double q = L / (2.0 * al);
    const double p1 = (L * a / al) / (q + std::sqrt(q * q - a * L / al));
    consider(L / p1 + al * std::log(p1 - a), PhiBranch::phi1, p1);
  }
  if (std::isfinite(b)) {
    if (L <= -be * h * h / (b - h)) {
      const double K = -L, q = K / (2.0 * be);
      const double p2 = (K * b / be) / (q + std::sqrt(q * q + K * b / be));
      consider(L / p2 + be * std::log(b - p2), PhiBranch::phi2, p2);
    }
  } else {
    const double B = -be;
    if (L <= -h * B) {
      const double K = -L;
      consider(B * std::log(B / kE) - B * std::log(K), PhiBranch::phi3, K / B);
    }
  }
  // Crossover: the maximum sits at p = h (a limit when h == a).
  if (h > a) consider(L / h + log_zeta_value(z, h), PhiBranch::crossover, h);
  else consider(L / a - (-be) * std::log(a), PhiBranch::crossover, a);
  best.phi = std::exp(best.phi);
  return best;
}

FundamentalProfile fundamental_phi(const Psi& psi, double delta) {
  require(delta > 0.0 && std::isfinite(delta), "fundamental_phi: delta must be positive and finite");
  const double L = std::log(delta);
  SupOptions so;
  so.grid_points = 10001;
  const SupResult s = sup_search([&](double p) { return L / p - psi.log_at(p); }, psi.a(), psi.b(), so);
  FundamentalProfile fp;
  fp.delta = delta;
  fp.phi = s.value.as_double();
  fp.p_opt = s.p_star;
  fp.branch = PhiBranch::grid_oracle;
  if (psi.zeta()) {
    const PhiClosed c = phi_closed_form(*psi.zeta(), delta);
    fp.closed_phi = c.phi;
    fp.closed_branch = c.branch;
    fp.closed_p = c.p;
    fp.rel_diff = rel_diff(c.phi, fp.phi);
    fp.flagged = !(fp.rel_diff <= 1e-6);
    if (!fp.flagged) fp.branch = c.branch;
  }
  return fp;
}

double log_fundamental(const Psi& psi, double log_delta, int grid_points) {
  require(std::isfinite(log_delta), "log_fundamental: delta must be positive and finite");
  SupOptions so;
  so.grid_points = grid_points;
  return sup_search([&](double p) { return log_delta / p - psi.log_at(p); }, psi.a(), psi.b(), so).log_value;
}

G0Distance g0_distance(const Tail& f, const Psi& psi) {
  G0Distance out;
  std::vector<double> seq;
  const double p_ref = std::max(2.0 * psi.a(), psi.a() + 1.0);
  for (int k = 0; k <= 30; ++k) {
    const double N = std::ldexp(1.0, k);
    const Tail tr = f.truncated(N);
    double v = 0.0;
    if (!tr.is_zero()) {
      GNormOptions opt;
      if (!psi.finite_b()) opt.upper_ref = std::max(p_ref, 10.0 * N);
      const GNormResult r = g_norm(tr, psi, opt);
      if (r.value.infinite) {
        out.value = kInf;
        out.ladder.emplace_back(N, kInf);
        return out;
      }
      v = r.value.value;
    }
    out.ladder.emplace_back(N, v);
    seq.push_back(v);
    if (v == 0.0) {
      out.value = 0.0;
      out.converged = true;
      return out;
    }
    const std::size_t n = seq.size();
    if (n >= 3 && rel_diff(seq[n - 1], seq[n - 2]) <= 1e-4 && rel_diff(seq[n - 2], seq[n - 3]) <= 1e-4) {
      out.value = seq.back();
      out.converged = true;
      return out;
    }
    if (n >= 2 && seq.back() <= 1e-12 * seq.front()) {
      out.value = 0.0;
      out.converged = true;
      return out;
    }
  }
  const LimitEstimate lim = aitken_limit(seq);
  out.value = std::max(0.0, lim.value);
  out.converged = lim.converged;
  return out;
}

namespace {

bool blows_up(const Psi& psi, const std::vector<double>& ladder) {
  double prev = -kInf;
  for (double p : ladder) {
    const double v = psi.log_at(p);
    if (!(v > prev)) return false;
    prev = v;
  }
  return psi.log_at(ladder.back()) - psi.log_at(ladder.front()) >= kLn10;
}

}  // namespace

SplitResult direct_sum_split(const Tail& f, const Psi& psi) {
  require(psi.finite_b(), "direct_sum_split: needs finite b");
  require(blows_up(psi, lower_ladder(psi.a(), psi.b())) && blows_up(psi, upper_ladder(psi.a(), psi.b())),
          "direct_sum_split: psi must blow up at both endpoints");
  const auto grid = endpoint_grid(psi.a(), psi.b(), 257);
  std::size_t imin = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (psi.log_at(grid[i]) < psi.log_at(grid[imin])) imin = i;
  const double lo = grid[imin == 0 ? 0 : imin - 1], hi = grid[std::min(imin + 1, grid.size() - 1)];
  const MaxResult m = golden_max([&](double p) { return -psi.log_at(p); }, lo, hi, 1e-12);
  const double p0 = m.x, lc = psi.log_at(p0);
  Psi nu1 = Psi(psi.a(), psi.b(), [psi, p0, lc](double p) { return p < p0 ? lc : psi.log_at(p); }, PsiKind::transformed,
                "nu1[" + psi.label() + "]");
  Psi nu2 = Psi(psi.a(), psi.b(), [psi, p0, lc](double p) { return p < p0 ? psi.log_at(p) : lc; }, PsiKind::transformed,
                "nu2[" + psi.label() + "]");
  return SplitResult{f.truncated(1.0, true), f.below(1.0), std::move(nu1), std::move(nu2), p0, std::exp(lc)};
}

ConvergenceCheck convergence_bound_check(const std::vector<std::pair<double, double>>& norms, const Psi& psi,
                                         const Psi& psi2, std::optional<double> uniform_bound, double tol) {
  require(uniform_bound.has_value(), "convergence_bound_check: missing uniform G(psi2) bound");
  require(!norms.empty(), "convergence_bound_check: empty norm grid");
  const double B = *uniform_bound;
  require(B >= 0.0, "convergence_bound_check: uniform bound must be >= 0");
  ConvergenceCheck out;
  const DominationReport dom = psi_dominates(psi2, psi);
  double pmin = kInf, pmax = -kInf;
  double interior = 0.0;
  for (const auto& [p, v] : norms) {
    require(v >= 0.0, "convergence_bound_check: norms must be >= 0");
    if (v / psi2(p) > B * (1.0 + 1e-9) + 1e-300) {
      out.verdict = Tri::indeterminate;
      out.note = "uniform G(psi2) bound violated";
      return out;
    }
    interior = std::max(interior, std::min(v / psi(p), B * psi2(p) / psi(p)));
    pmin = std::min(pmin, p);
    pmax = std::max(pmax, p);
  }
  double endpoint = 0.0;
  for (double p : lower_ladder(psi.a(), psi.b()))
    if (p <= pmin) endpoint = std::max(endpoint, B * psi2(p) / psi(p));
  for (double p : upper_ladder(psi.a(), psi.b()))
    if (p >= pmax) endpoint = std::max(endpoint, B * psi2(p) / psi(p));
  out.interior_sup = interior;
  out.endpoint_sup = endpoint;
  const bool applicable = dom.lower.applicable || dom.upper.applicable;
  if (applicable && !dom.dominates && B > 0.0) {
    out.verdict = Tri::indeterminate;
    out.note = "psi2 << psi does not hold";
    return out;
  }
  out.verdict = std::max(interior, endpoint) <= tol ? Tri::yes : Tri::no;
  return out;
}

}  // namespace gls
