#include "gls/sup_search.hpp"

#include <algorithm>

#include "gls/psi.hpp"

namespace gls {

Extended extended_exp(double log_value) {
  if (log_value == kInf || log_value > 709.0) return Extended::infinity();
  return Extended::finite(std::exp(log_value));
}

std::vector<double> endpoint_grid(double a, double b, int n, double eps) {
  require(n >= 5, "endpoint_grid: need at least 5 points");
  std::vector<double> out;
  const int n1 = n / 2 + 1, n2 = n - n1;
  if (std::isfinite(b)) {
    const double w = b - a;
    for (double o : geomspace(eps, 0.5, static_cast<std::size_t>(n1))) out.push_back(a + w * o);
    auto up = geomspace(eps, 0.5, static_cast<std::size_t>(n2 + 1));
    for (std::size_t i = 0; i + 1 < up.size(); ++i) out.push_back(b - w * up[i]);
  } else {
    const double s = std::max(1.0, a);
    for (double o : geomspace(eps, 1.0, static_cast<std::size_t>(n1))) out.push_back(a + s * o);
    auto up = geomspace(a + s, (a + s) * 1e4, static_cast<std::size_t>(n2 + 1));
    for (std::size_t i = 1; i < up.size(); ++i) out.push_back(up[i]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

EndpointLimit ladder_limit(const RealFn& lr, const std::vector<double>& ps, int& evals) {
  EndpointLimit e;
  std::vector<double> logs, lin;
  for (double p : ps) {
    const double v = lr(p);
    ++evals;
    logs.push_back(v);
    e.ladder.emplace_back(p, extended_exp(v));
  }
  if (logs.back() == kInf) {
    e.unbounded = true;
    e.limit = Extended::infinity();
    return e;
  }
  // Unbounded: strictly increasing log-ratio whose increments do not decay
  // geometrically over the last three rungs.
  const std::size_t n = logs.size();
  if (n >= 4) {
    const double d1 = logs[n - 3] - logs[n - 4], d2 = logs[n - 2] - logs[n - 3], d3 = logs[n - 1] - logs[n - 2];
    if (d1 > 0.0 && d2 > 0.0 && d3 > 0.0 && d2 >= 0.7 * d1 && d3 >= 0.7 * d2) {
      e.unbounded = true;
      e.limit = Extended::infinity();
      return e;
    }
  }
  for (double v : logs) lin.push_back(v == -kInf ? 0.0 : std::exp(std::min(v, 709.0)));
  const LimitEstimate lim = aitken_limit(lin);
  e.converged = lim.converged;
  e.limit = Extended::finite(std::max(0.0, lim.value));
  return e;
}

}  // namespace

SupResult sup_search(const RealFn& log_ratio, double a, double b, const SupOptions& opt) {
  require(b > a, "sup_search: empty interval");
  SupResult res;
  const std::vector<double> grid = endpoint_grid(a, b, opt.grid_points, opt.eps);
  std::vector<double> lv(grid.size());
  double best = -kInf;
  double best_p = grid.front();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    lv[i] = log_ratio(grid[i]);
    if (std::isnan(lv[i])) throw NumericalError("sup_search: ratio evaluated to NaN");
    ++res.evaluations;
    res.profile.emplace_back(grid[i], extended_exp(lv[i]));
    if (lv[i] > best) {
      best = lv[i];
      best_p = grid[i];
    }
  }
  if (best == kInf) {
    res.value = Extended::infinity();
    res.log_value = kInf;
    res.p_star = best_p;
    return res;
  }

  // Golden-section refinement on the best local maxima.
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool left = i == 0 || lv[i] >= lv[i - 1];
    const bool right = i + 1 == grid.size() || lv[i] >= lv[i + 1];
    if (left && right && lv[i] > -kInf) peaks.push_back(i);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t x, std::size_t y) { return lv[x] > lv[y]; });
  if (peaks.size() > static_cast<std::size_t>(opt.refine_cells)) peaks.resize(static_cast<std::size_t>(opt.refine_cells));
  for (std::size_t i : peaks) {
    const double lo = i == 0 ? grid[0] : grid[i - 1];
    const double hi = i + 1 == grid.size() ? grid[i] : grid[i + 1];
    if (!(hi > lo)) continue;
    auto f = [&](double p) {
      ++res.evaluations;
      const double v = log_ratio(p);
      return std::isnan(v) ? -kInf : v;
    };
    const MaxResult m = golden_max(f, lo, hi, 1e-11);
    if (m.fx > best) {
      best = m.fx;
      best_p = m.x;
    }
  }

  res.lower = ladder_limit(log_ratio, lower_ladder(a, b, opt.eps), res.evaluations);
  res.upper = ladder_limit(log_ratio, upper_ladder(a, b, opt.eps, opt.upper_ref), res.evaluations);
  for (const auto* e : {&res.lower, &res.upper}) {
    for (const auto& [p, r] : e->ladder) {
      const double l = r.infinite ? kInf : (r.value > 0.0 ? std::log(r.value) : -kInf);
      if (l > best) {
        best = l;
        best_p = p;
      }
    }
  }
  res.p_star = best_p;
  if (res.lower.unbounded || res.upper.unbounded || best == kInf) {
    res.value = Extended::infinity();
    res.log_value = kInf;
    res.endpoint_sup = true;
    res.p_star = res.lower.unbounded ? a : b;
    return res;
  }
  res.value = extended_exp(best);
  res.log_value = best;
  for (const auto* e : {&res.lower, &res.upper}) {
    if (e->converged && !e->limit.infinite && res.value.is_finite() && e->limit.value > res.value.value) {
      res.value = e->limit;
      res.log_value = std::log(e->limit.value);
      res.endpoint_sup = true;
      res.p_star = e == &res.lower ? a : b;
    }
  }
  return res;
}

}  // namespace gls
