#include "gls/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <queue>

namespace gls {
namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const RealFn& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  const double fc = f(c);
  double k = kWgk[7] * fc, g = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double f1 = f(c - h * kXgk[j]), f2 = f(c + h * kXgk[j]);
    k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
  }
  return {lo, hi, k * h, std::abs(k - g) * h};
}

// Log-space segment: integral = exp(m) * s * h, error likewise.
struct LogSegment {
  double lo, hi, log_value, log_error;
  bool operator<(const LogSegment& o) const { return log_error < o.log_error; }
};

LogSegment log_gk15(const RealFn& F, double lo, double hi) {
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  double vals[15];
  vals[0] = F(c);
  for (int j = 0; j < 7; ++j) {
    vals[1 + 2 * j] = F(c - h * kXgk[j]);
    vals[2 + 2 * j] = F(c + h * kXgk[j]);
  }
  double m = -kInf;
  for (double v : vals) {
    if (std::isnan(v)) throw NumericalError("log-space quadrature: integrand is NaN");
    m = std::max(m, v);
  }
  if (m == -kInf) return {lo, hi, -kInf, -kInf};
  if (m == kInf) return {lo, hi, kInf, kInf};
  double k = kWgk[7] * std::exp(vals[0] - m), g = kWg[3] * std::exp(vals[0] - m);
  for (int j = 0; j < 7; ++j) {
    const double s = std::exp(vals[1 + 2 * j] - m) + std::exp(vals[2 + 2 * j] - m);
    k += kWgk[j] * s;
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  const double lh = std::log(h);
  return {lo, hi, m + std::log(k) + lh, m + std::log(std::abs(k - g)) + lh};
}

}  // namespace

QuadResult integrate(const RealFn& f, double lo, double hi, double rel_tol, double abs_tol, int max_segments) {
  require(std::isfinite(lo) && std::isfinite(hi), "integrate: bounds must be finite");
  if (lo == hi) return {};
  std::priority_queue<Segment> heap;
  Segment s0 = gk15(f, lo, hi);
  double total = s0.value, err = s0.error;
  heap.push(s0);
  int evals = 15;
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) && static_cast<int>(heap.size()) < max_segments) {
    const Segment s = heap.top();
    heap.pop();
    const double mid = 0.5 * (s.lo + s.hi);
    if (mid <= s.lo || mid >= s.hi) {
      heap.push(s);
      break;
    }
    const Segment l = gk15(f, s.lo, mid), r = gk15(f, mid, s.hi);
    evals += 30;
    total += l.value + r.value - s.value;
    err += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
  }
  // Re-sum to limit cancellation drift.
  total = 0.0;
  err = 0.0;
  std::vector<Segment> segs;
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
  for (const auto& s : segs) {
    total += s.value;
    err += s.error;
  }
  return {total, err, evals};
}

LogQuadResult integrate_log(const RealFn& F, double lo, double hi, double rel_tol, int max_segments) {
  if (!(hi > lo)) return {};
  std::vector<LogSegment> heap{log_gk15(F, lo, hi)};
  auto totals = [&heap] {
    std::vector<double> v, e;
    v.reserve(heap.size());
    e.reserve(heap.size());
    for (const auto& s : heap) {
      v.push_back(s.log_value);
      e.push_back(s.log_error);
    }
    return std::pair{log_sum_exp(v), log_sum_exp(e)};
  };
  const double log_tol = std::log(rel_tol);
  auto [lv, le] = totals();
  while (static_cast<int>(heap.size()) < max_segments && le > lv + log_tol && lv != kInf) {
    std::pop_heap(heap.begin(), heap.end());
    const LogSegment s = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (s.lo + s.hi);
    if (mid <= s.lo || mid >= s.hi) {
      heap.push_back(s);
      std::push_heap(heap.begin(), heap.end());
      break;
    }
    heap.push_back(log_gk15(F, s.lo, mid));
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(log_gk15(F, mid, s.hi));
    std::push_heap(heap.begin(), heap.end());
    std::tie(lv, le) = totals();
  }
  return {lv, le};
}

LineIntegral integrate_exp_line(const RealFn& F, double t_lo, double t_hi, std::span<const double> breaks,
                                double rel_tol) {
  require(t_hi > t_lo, "integrate_exp_line: empty range");
  constexpr double kReach = 1e12;     // |t - origin| beyond which non-decay means divergence
  constexpr double kNegligible = -39.1439465808987777;  // log(1e-17)
  constexpr int kPanelBudget = 2048;

  std::vector<double> bk(breaks.begin(), breaks.end());
  std::sort(bk.begin(), bk.end());

  // Origin: best point of a coarse scan over the central window.
  const double s_lo = std::max(t_lo, -60.0), s_hi = std::min(t_hi, 60.0);
  double origin = std::isfinite(t_lo) ? (std::isfinite(t_hi) ? 0.5 * (t_lo + t_hi) : t_lo + 1.0) : std::min(0.0, t_hi - 1.0);
  if (s_hi > s_lo) {
    double best = -kInf;
    for (double t : linspace(s_lo, s_hi, 241)) {
      const double v = F(t);
      if (v > best) {
        best = v;
        origin = t;
      }
    }
  }
  origin = std::clamp(origin, t_lo, t_hi);
  // Refine the peak inside the scan cell, then size the first panel so that
  // F drops by at most ~1 across it (narrow peaks at large exponents).
  double w0 = 0.25;
  if (s_hi > s_lo && std::isfinite(F(origin))) {
    const double cell = (s_hi - s_lo) / 240.0;
    const double lo = std::max(t_lo, origin - cell), hi = std::min(t_hi, origin + cell);
    if (hi > lo) {
      const MaxResult m = golden_max([&](double t) { const double v = F(t); return std::isnan(v) ? -kInf : v; }, lo, hi,
                                     1e-13);
      if (m.fx > F(origin)) origin = m.x;
    }
    const double f0 = F(origin);
    auto drop = [&](double w) {
      const double l = origin - w > t_lo ? F(origin - w) : kInf;
      const double r = origin + w < t_hi ? F(origin + w) : kInf;
      const double m = std::min(l, r);
      return m == kInf ? 0.0 : f0 - m;
    };
    while (w0 > 1e-12 && drop(w0) > 1.0) w0 *= 0.25;
  }

  LineIntegral out;
  std::vector<double> parts;
  double log_total = -kInf;
  bool diverged = false;

  for (int dir : {+1, -1}) {
    double x = origin;
    double w = w0;
    double prev = kNaN, prev_r = kNaN;
    int count = 0;
    std::vector<double> f_end, x_end;  // F at panel ends, for the rising test
    const double end = dir > 0 ? t_hi : t_lo;
    while (x != end) {
      double next = x + dir * w;
      if (dir > 0) {
        next = std::min(next, t_hi);
        auto it = std::upper_bound(bk.begin(), bk.end(), x);
        if (it != bk.end()) next = std::min(next, *it);
      } else {
        next = std::max(next, t_lo);
        auto it = std::lower_bound(bk.begin(), bk.end(), x);
        if (it != bk.begin()) next = std::max(next, *(it - 1));
      }
      const double lo = std::min(x, next), hi = std::max(x, next);
      const double c = integrate_log(F, lo, hi, rel_tol).log_value;
      if (c == kInf) {
        diverged = true;
        break;
      }
      parts.push_back(c);
      log_total = log_add(log_total, c);
      ++count;
      ++out.panels;
      x = next;
      w *= 2.0;
      if (c == -kInf && count > 1) break;
      const bool decaying = !std::isnan(prev) && c < prev;
      if (count >= 3 && decaying) {
        // Geometric remainder estimate from the last two contributions; stop
        // once it is negligible or well inside the tolerance.
        const double r = std::exp(c - prev);
        const double rem = c + std::log(r / (1.0 - r));
        // A settled ratio (power-law decay in t) makes the geometric
        // remainder accurate even when it is not small.
        const bool settled = !std::isnan(prev_r) && r < 0.95 && std::abs(r - prev_r) <= 1e-7 * r;
        prev_r = r;
        if (c < log_total + kNegligible || (r < 0.9 && rem < log_total + std::log(0.1 * rel_tol)) || settled) {
          if (x != end) {
            parts.push_back(rem);
            log_total = log_add(log_total, rem);
          }
          break;
        }
      }
      prev = c;
      // log-integrand rising with a non-decreasing slope across three panels
      // far from the peak: at least linear growth, not integrable. Power-log
      // shapes (c log t - eps t) have falling slopes and go on to the reach test.
      f_end.push_back(F(x));
      x_end.push_back(x);
      const std::size_t m = f_end.size();
      if (m >= 4 && std::abs(x - origin) > 100.0) {
        double sl[3];
        for (int k = 0; k < 3; ++k) {
          const std::size_t i = m - 3 + static_cast<std::size_t>(k);
          sl[k] = (f_end[i] - f_end[i - 1]) / std::abs(x_end[i] - x_end[i - 1]);
        }
        if (sl[0] > 0.0 && sl[1] >= sl[0] * (1 - 1e-9) && sl[2] >= sl[1] * (1 - 1e-9)) {
          diverged = true;
          break;
        }
      }
      if (std::abs(x - origin) > kReach || out.panels > kPanelBudget) {
        diverged = true;
        break;
      }
    }
    if (diverged) break;
  }
  out.divergent = diverged;
  out.log_value = diverged ? kInf : log_sum_exp(parts);
  return out;
}

const Rule& gauss_legendre(int n) {
  require(n >= 1 && n <= 512, "gauss_legendre: order out of range");
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Rule r;
  r.x.resize(static_cast<std::size_t>(n));
  r.w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
    r.x[lo] = -z;
    r.x[hi] = z;
    r.w[lo] = r.w[hi] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

}  // namespace gls
