#include "gls/series.hpp"

#include <fftw3.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_expint.h>

#include <algorithm>
#include <memory>
#include <optional>

#include "gls/grammar.hpp"
#include "gls/kernels.hpp"
#include "gls/quadrature.hpp"

namespace gls {

const char* to_string(SeriesKind k) { return k == SeriesKind::sine ? "sine" : "cosine"; }

namespace {

// Terms summed directly in the near-zero formula before the continuous tail.
constexpr long kNearTerms = 4096;
// Near region: |x| < kNearScale / n_max.
constexpr double kNearScale = 64.0;

double trig(SeriesKind k, double v) { return k == SeriesKind::sine ? std::sin(v) : std::cos(v); }

// int_A^inf trig(x t) / t dt.
double reciprocal_tail(double x, double A, SeriesKind k) {
  const double y = x * A;
  return k == SeriesKind::sine ? kPi / 2.0 - gsl_sf_Si(y) : -gsl_sf_Ci(y);
}

struct GslWorkspace {
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(1000);
  gsl_integration_workspace* cyc = gsl_integration_workspace_alloc(1000);
  gsl_integration_qawo_table* tab = nullptr;
  explicit GslWorkspace(SeriesKind k)
      : tab(gsl_integration_qawo_table_alloc(1.0, 1.0, k == SeriesKind::sine ? GSL_INTEG_SINE : GSL_INTEG_COSINE, 25)) {}
  ~GslWorkspace() {
    gsl_integration_qawo_table_free(tab);
    gsl_integration_workspace_free(cyc);
    gsl_integration_workspace_free(w);
  }
  GslWorkspace(const GslWorkspace&) = delete;
  GslWorkspace& operator=(const GslWorkspace&) = delete;
};

// int_A^inf smooth(t) trig(x t) dt = int_{xA}^inf smooth(s/x)/x trig(s) ds.
// Below s = 1 the integral runs in log s; above it QAWF sums the cycles.
double tail_integral(const FourierSeries& f, double x, double A) {
  if (f.tail_integral) return f.tail_integral(x, A, f.kind);
  const auto g = [&f, x](double s) { return f.smooth(s / x) / x; };
  double lo = x * A, total = 0.0;
  if (lo < 1.0) {
    total += integrate([&](double u) {
               const double s = std::exp(u);
               return g(s) * s * trig(f.kind, s);
             }, std::log(lo), 0.0, 1e-12).value;
    lo = 1.0;
  }
  static thread_local GslWorkspace ws_sin(SeriesKind::sine), ws_cos(SeriesKind::cosine);
  GslWorkspace& ws = f.kind == SeriesKind::sine ? ws_sin : ws_cos;
  gsl_function F;
  F.function = [](double s, void* p) { return (*static_cast<decltype(g)*>(p))(s); };
  F.params = const_cast<void*>(static_cast<const void*>(&g));
  double res = 0.0, err = 0.0;
  const double scale = std::abs(g(lo)) + 1e-300;
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  const int st = gsl_integration_qawf(&F, lo, 1e-13 * scale, 1000, ws.w, ws.cyc, ws.tab, &res, &err);
  gsl_set_error_handler(old);
  if (st != GSL_SUCCESS && !(err <= 1e-9 * (std::abs(res) + scale)))
    throw NumericalError("series tail integral: QAWF did not converge");
  return total + res;
}

// Sum of c(n) e^{inx} over unit cells versus the integral of c(t) e^{ixt}:
// each cell integrates e^{ixt} to e^{inx} sin(x/2) / (x/2).
double cell_factor(double x) { return x == 0.0 ? 1.0 : (0.5 * x) / std::sin(0.5 * x); }

double derivative(const std::function<double(double)>& c, double t) {
  const double h = 1e-4 * t;
  return (c(t + h) - c(t - h)) / (2.0 * h);
}

// Sum over n > A - 1/2 of smooth(n) trig(n x) for x away from 0: two terms of
// integration by parts on the continuous tail.
double far_tail(const FourierSeries& f, double x, double A) {
  const double c = f.smooth(A), dc = derivative(f.smooth, A), k = cell_factor(x);
  if (f.kind == SeriesKind::sine) return k * (c * std::cos(x * A) / x - dc * std::sin(x * A) / (x * x));
  return k * (-c * std::sin(x * A) / x - dc * std::cos(x * A) / (x * x));
}

std::vector<double> coefficients(const FourierSeries& f, long lo, long hi) {
  std::vector<double> c;
  c.reserve(static_cast<std::size_t>(std::max(0L, hi - lo + 1)));
  for (long n = lo; n <= hi; ++n) c.push_back(f.coef(n));
  return c;
}

double near_cut(const FourierSeries& f) { return f.finite() ? 0.0 : kNearScale / static_cast<double>(f.n_max); }

// Value for 0 < x < near_cut: kNearTerms direct terms, then the continuous tail.
double near_value(const FourierSeries& f, const std::vector<double>& head, double x) {
  const long n0 = f.n_min + static_cast<long>(head.size());
  return f.constant + kernels::trig_sum(head, static_cast<std::size_t>(f.n_min), x, f.kind == SeriesKind::sine) +
         cell_factor(x) * tail_integral(f, x, static_cast<double>(n0) - 0.5);
}

void check_series(const FourierSeries& f) {
  require(static_cast<bool>(f.coef), "series: missing coefficient rule");
  require(f.n_min >= 1 && f.n_max >= f.n_min, "series: need 1 <= n_min <= n_max");
  if (!f.finite()) {
    require(f.n_max >= 1024, "series: infinite series need n_max >= 1024");
    require(f.kind == SeriesKind::cosine || f.constant == 0.0, "series: sine series with a constant term");
  }
}

long pow2_at_least(long v) {
  long n = 1;
  while (n < v) n <<= 1;
  return n;
}

}  // namespace

FourierSeries series_f_d(double d, long n_max) {
  require(d >= 0.0, "f_d: d must be >= 0");
  FourierSeries f;
  f.kind = SeriesKind::sine;
  f.smooth = [d](double t) { return (d == 0.0 ? 1.0 : std::pow(std::log(t), d)) / t; };
  f.coef = [s = f.smooth](long n) { return s(static_cast<double>(n)); };
  if (d == 0.0) f.tail_integral = reciprocal_tail;
  f.n_min = 2;
  f.n_max = n_max;
  f.label = Call{"f_d", {{"d", d}}}.str();
  return f;
}

FourierSeries series_g_d(double d, long n_max) {
  require(d > 0.0 && d < 1.0, "g_d: d must lie in (0, 1)");
  FourierSeries f;
  f.kind = SeriesKind::sine;
  f.smooth = [d](double t) { return std::pow(t, d - 1.0); };
  f.coef = [s = f.smooth](long n) { return s(static_cast<double>(n)); };
  f.n_min = 1;
  f.n_max = n_max;
  f.label = Call{"g_d", {{"d", d}}}.str();
  return f;
}

FourierSeries series_log_model(long n_max) {
  FourierSeries f;
  f.kind = SeriesKind::cosine;
  f.coef = [](long n) {
    const double t = static_cast<double>(n);
    return 2.0 * gsl_sf_Si(kPi * t) / (kPi * t);
  };
  f.smooth = [](double t) { return 1.0 / t; };
  f.tail_integral = reciprocal_tail;
  // |2 Si(n pi) / (pi n) - 1/n| <= 2 / (pi^2 n^2).
  f.discrete_defect = [](long N) { return 2.0 / (kPi * kPi * static_cast<double>(N)); };
  f.n_min = 1;
  f.n_max = n_max;
  f.constant = 1.0;
  f.label = "log_model()";
  return f;
}

FourierSeries series_trig_poly(SeriesKind kind, std::vector<double> c, double constant) {
  require(!c.empty(), "trig polynomial: no coefficients");
  FourierSeries f;
  f.kind = kind;
  f.n_min = 1;
  f.n_max = static_cast<long>(c.size());
  f.constant = constant;
  f.coef = [c = std::move(c)](long n) { return c[static_cast<std::size_t>(n - 1)]; };
  f.label = std::string("trig_poly(") + to_string(kind) + ")";
  return f;
}

FourierSeries series_parse(const std::string& text) {
  const Call call = parse_call(text);
  const long n_max = static_cast<long>(call.get("n_max", static_cast<double>(1L << 18)));
  if (call.name == "f_d") {
    call.check_keys({"d", "n_max"});
    return series_f_d(call.get("d", 1.0), n_max);
  }
  if (call.name == "g_d") {
    call.check_keys({"d", "n_max"});
    return series_g_d(call.require_arg("d"), n_max);
  }
  if (call.name == "log_model") {
    call.check_keys({"n_max"});
    return series_log_model(n_max);
  }
  if (call.name == "H") throw PreconditionError("series: write the conjugate with --hilbert");
  throw PreconditionError("series: unknown series '" + call.name + "'");
}

FourierSeries partial_sum(const FourierSeries& f, long M) {
  require(M >= 0, "partial_sum: M must be >= 0");
  FourierSeries s = f;
  s.smooth = nullptr;
  s.tail_integral = nullptr;
  s.discrete_defect = nullptr;
  const long top = f.finite() ? std::min(M, f.n_max) : M;
  if (top < f.n_min) {
    s.coef = [](long) { return 0.0; };
    s.n_min = s.n_max = 1;
  } else {
    s.n_max = top;
  }
  s.label = "s_" + std::to_string(M) + "[" + f.label + "]";
  return s;
}

FourierSeries series_tail(const FourierSeries& f, long M) {
  require(M >= 0, "series_tail: M must be >= 0");
  FourierSeries s = f;
  s.constant = 0.0;
  s.n_min = std::max(f.n_min, M + 1);
  if (f.finite() && s.n_min > f.n_max) {
    s.coef = [](long) { return 0.0; };
    s.n_min = s.n_max = 1;
  }
  require(s.n_min <= s.n_max, "series_tail: M beyond the stored terms of an infinite series");
  s.label = "tail_" + std::to_string(M) + "[" + f.label + "]";
  return s;
}

FourierSeries hilbert_transform_series(const FourierSeries& f) {
  FourierSeries h = f;
  h.constant = 0.0;
  h.label = "H[" + f.label + "]";
  if (f.kind == SeriesKind::sine) {
    h.kind = SeriesKind::cosine;
    return h;
  }
  h.kind = SeriesKind::sine;
  h.coef = [c = f.coef](long n) { return -c(n); };
  if (f.smooth) h.smooth = [c = f.smooth](double t) { return -c(t); };
  if (f.tail_integral)
    h.tail_integral = [c = f.tail_integral](double x, double A, SeriesKind k) { return -c(x, A, k); };
  return h;
}

std::vector<double> series_sample(const FourierSeries& f, long n) {
  check_series(f);
  require(n >= 4 && (n & (n - 1)) == 0, "series_sample: n must be a power of two");
  require(n / 2 > f.n_max, "series_sample: grid too coarse for the stored harmonics");
  const long m = n / 2 + 1;
  auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(m)));
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long k = 0; k < m; ++k) in[k][0] = in[k][1] = 0.0;
  in[0][0] = f.constant;
  for (long k = f.n_min; k <= f.n_max; ++k) {
    const double c = f.coef(k);
    if (f.kind == SeriesKind::sine) in[k][1] = -0.5 * c;
    else in[k][0] = 0.5 * c;
  }
  fftw_plan plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), in, out.data(), FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  fftw_free(in);
  return out;
}

double series_value(const FourierSeries& f, double x) {
  check_series(f);
  x = std::remainder(x, 2.0 * kPi);
  const double sgn = (f.kind == SeriesKind::sine && x < 0.0) ? -1.0 : 1.0;
  const double ax = std::abs(x);
  if (ax == 0.0) {
    if (f.kind == SeriesKind::sine) return f.constant;
    if (!f.finite()) return kInf;
  }
  const bool sine = f.kind == SeriesKind::sine;
  if (!f.finite() && ax < near_cut(f)) {
    const auto head = coefficients(f, f.n_min, f.n_min + kNearTerms - 1);
    return f.constant + sgn * (near_value(f, head, ax) - f.constant);
  }
  const auto c = coefficients(f, f.n_min, f.n_max);
  double v = kernels::trig_sum(c, static_cast<std::size_t>(f.n_min), ax, sine);
  if (!f.finite()) v += far_tail(f, ax, static_cast<double>(f.n_max) + 0.5);
  return f.constant + sgn * v;
}

namespace {

struct NearPart {
  // Uniform t = log x nodes descending from t_top; F values for the spline.
  double t_top = 0.0, h = 0.25;
  std::vector<double> values;  // values[k] at t_top - k h
};

// log of sum_j w_j |v_j|^p over a contiguous range, with end weights 1/2.
double log_trapezoid(std::span<const double> v, double p) {
  if (v.empty()) return -kInf;
  const double m = kernels::max_abs(v);
  if (m == 0.0) return -kInf;
  std::vector<double> w(v.size(), 1.0);
  w.front() = w.back() = 0.5;
  if (v.size() == 1) w[0] = 1.0;
  return std::log(kernels::pow_sum(v, w, p, 1.0 / m)) + p * std::log(m);
}

// Log-space Simpson of e^{t} |F(e^t)|^p over the near table, plus the
// analytic remainder below the last node. +inf when the integrand does not
// decay toward t -> -inf.
double near_log_integral(const NearPart& np, double p) {
  const std::size_t K = np.values.size();
  std::vector<double> ys(np.values.rbegin(), np.values.rend());  // ascending t
  const double t0 = np.t_top - static_cast<double>(K - 1) * np.h;
  // Local four-point cubic: values span many decades, so a global spline's
  // absolute error from the large end would swamp the small end.
  const auto spline = [&](double t) {
    const double u = (t - t0) / np.h;
    const auto i = static_cast<std::size_t>(std::clamp(std::floor(u) - 1.0, 0.0, static_cast<double>(K - 4)));
    double v = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
      double w = 1.0;
      for (std::size_t b = 0; b < 4; ++b)
        if (b != a) w *= (u - static_cast<double>(i + b)) / (static_cast<double>(a) - static_cast<double>(b));
      v += w * ys[i + a];
    }
    return v;
  };
  const int sub = 8;
  const double hs = np.h / sub;
  const std::size_t nint = (K - 1) * sub;
  std::vector<double> terms;
  terms.reserve(nint + 1);
  for (std::size_t i = 0; i <= nint; ++i) {
    const double t = t0 + static_cast<double>(i) * hs;
    const double F = (i % sub == 0) ? ys[i / sub] : spline(t);
    const double w = (i == 0 || i == nint) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    terms.push_back(F == 0.0 ? -kInf : std::log(w * hs / 3.0) + t + p * std::log(std::abs(F)));
  }
  double total = log_sum_exp(terms);
  // Below t0 the log integrand t + p log|F| is extended linearly.
  const double l0 = t0 + p * std::log(std::abs(ys[0])), l1 = t0 + np.h + p * std::log(std::abs(ys[1]));
  const double slope = (l1 - l0) / np.h;
  if (!(slope > 1e-3)) return kInf;
  return log_add(total, l0 - std::log(slope));
}

NearPart build_near(const FourierSeries& f, double t_top, std::span<const double> ps) {
  NearPart np;
  np.t_top = t_top;
  const auto head = coefficients(f, f.n_min, f.n_min + kNearTerms - 1);
  const double pmax = *std::max_element(ps.begin(), ps.end());
  double peak = -kInf;
  std::vector<double> lw;
  for (int k = 0;; ++k) {
    const double t = t_top - k * np.h;
    const double F = near_value(f, head, std::exp(t));
    np.values.push_back(F);
    const double l = F == 0.0 ? -kInf : t + pmax * std::log(std::abs(F));
    lw.push_back(l);
    peak = std::max(peak, l);
    const std::size_t n = lw.size();
    const bool decayed = n >= 5 && l < peak - 45.0 && lw[n - 1] < lw[n - 2] && lw[n - 2] < lw[n - 3];
    if ((decayed && t < t_top - 8.0) || t < -690.0) break;
  }
  return np;
}

double log_lp_integral(const FourierSeries& f, const NearPart* np, const std::vector<double>& grid, long j1, double p) {
  const long n = static_cast<long>(grid.size());
  const double dx = 2.0 * kPi / static_cast<double>(n);
  if (f.finite()) {
    const double m = kernels::max_abs(grid);
    if (m == 0.0) return -kInf;
    return std::log(kernels::pow_sum(grid, {}, p, 1.0 / m)) + p * std::log(m) + std::log(dx);
  }
  std::span<const double> far(grid.data() + j1, static_cast<std::size_t>(n / 2 - j1 + 1));
  const double lf = log_trapezoid(far, p) + std::log(dx);
  const double ln = near_log_integral(*np, p);
  return kLn2 + log_add(lf, ln);
}

// Uniform-grid values on [0, pi] (index j <-> x = 2 pi j / n), with the
// continuous tail added on j >= j1 for infinite series.
std::vector<double> far_grid(const FourierSeries& f, long n, long j1) {
  std::vector<double> v = series_sample(f, n);
  if (!f.finite()) {
    const double A = static_cast<double>(f.n_max) + 0.5;
    for (long j = j1; j <= n / 2; ++j) v[static_cast<std::size_t>(j)] += far_tail(f, 2.0 * kPi * j / n, A);
  }
  return v;
}

}  // namespace

std::vector<SeriesNorm> series_lp_norms(const FourierSeries& f, std::span<const double> ps, long grid_size) {
  check_series(f);
  require(!ps.empty(), "series_lp_norm: empty p list");
  for (double p : ps) require(p >= 1.0, "series_lp_norm: p must be >= 1");
  require(grid_size >= 4096, "series_lp_norm: grid_size must be >= 2^12");
  // |f|^p of a trigonometric polynomial has bandwidth about p n_max.
  const double pmax = *std::max_element(ps.begin(), ps.end());
  const long band = f.finite() ? static_cast<long>(std::ceil(2.0 * pmax)) * f.n_max : 0;
  const long n = pow2_at_least(std::max({grid_size, 4 * (f.n_max + 1), band}));
  const double cut = near_cut(f);
  const long j1 = f.finite() ? 0 : static_cast<long>(std::ceil(cut * static_cast<double>(n) / (2.0 * kPi)));
  std::optional<NearPart> np;
  if (!f.finite()) np = build_near(f, std::log(2.0 * kPi * static_cast<double>(j1) / static_cast<double>(n)), ps);
  const auto g1 = far_grid(f, n, j1);
  const auto g2 = far_grid(f, 2 * n, 2 * j1);
  double tail_err = 0.0;
  if (!f.finite()) {
    const double A0 = static_cast<double>(f.n_min + kNearTerms) - 0.5;
    tail_err = std::abs(derivative(f.smooth, A0)) / 12.0 + std::abs(f.smooth(static_cast<double>(f.n_max)));
    if (f.discrete_defect) tail_err += f.discrete_defect(f.n_min + kNearTerms - 1);
  }
  std::vector<SeriesNorm> out;
  for (double p : ps) {
    SeriesNorm r;
    r.p = p;
    r.grid = n;
    r.near_cut = f.finite() ? 0.0 : 2.0 * kPi * static_cast<double>(j1) / static_cast<double>(n);
    r.tail_error = tail_err;
    const double l1 = log_lp_integral(f, np ? &*np : nullptr, g1, j1, p);
    const double l2 = log_lp_integral(f, np ? &*np : nullptr, g2, 2 * j1, p);
    r.value = l1 == kInf ? kInf : std::exp(l1 / p);
    r.value_fine = l2 == kInf ? kInf : std::exp(l2 / p);
    if (std::isfinite(r.value_fine)) {
      r.rel_change = r.value_fine == 0.0 ? std::abs(r.value) : std::abs(r.value - r.value_fine) / r.value_fine;
      if (r.rel_change > 1e-4) throw NumericalError("series_lp_norm: grid refinement check failed for " + f.label);
    }
    out.push_back(r);
  }
  return out;
}

SeriesNorm series_lp_norm(const FourierSeries& f, double p, long grid_size) {
  const double ps[] = {p};
  return series_lp_norms(f, ps, grid_size).front();
}

}  // namespace gls
