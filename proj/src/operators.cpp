#include "gls/operators.hpp"

#include <fftw3.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_expint.h>

#include <algorithm>
#include <complex>
#include <sstream>

#include "gls/catalog.hpp"
#include "gls/gnorm.hpp"
#include "gls/grammar.hpp"
#include "gls/kernels.hpp"
#include "gls/quadrature.hpp"

namespace gls {

const char* to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::fourier_transform: return "fourier-transform";
    case OperatorKind::riesz_partial_sum: return "riesz-partial-sum";
    case OperatorKind::maximal_fourier: return "maximal-fourier";
    case OperatorKind::singular: return "singular";
    case OperatorKind::convolution: return "convolution";
    case OperatorKind::multiplication: return "multiplication";
  }
  return "?";
}

OperatorMap operator_parse(const std::string& text) {
  OperatorMap m;
  if (text == "fourier-transform") m.kind = OperatorKind::fourier_transform;
  else if (text == "riesz-partial-sum") m.kind = OperatorKind::riesz_partial_sum;
  else if (text == "maximal-fourier") m.kind = OperatorKind::maximal_fourier;
  else {
    const Call c = parse_call(text);
    if (c.name == "singular") {
      c.check_keys({"lambda", "gamma"});
      m.kind = OperatorKind::singular;
      m.lambda = c.require_arg("lambda");
      m.gamma = c.require_arg("gamma");
    } else if (c.name == "convolution" || c.name == "multiplication") {
      c.check_keys({"s"});
      m.kind = c.name == "convolution" ? OperatorKind::convolution : OperatorKind::multiplication;
      m.s = c.require_arg("s");
    } else {
      throw PreconditionError("operator: unknown map '" + text + "'");
    }
  }
  return m;
}

std::string operator_name(const OperatorMap& map) {
  switch (map.kind) {
    case OperatorKind::singular: return Call{"singular", {{"lambda", map.lambda}, {"gamma", map.gamma}}}.str();
    case OperatorKind::convolution: return Call{"convolution", {{"s", map.s}}}.str();
    case OperatorKind::multiplication: return Call{"multiplication", {{"s", map.s}}}.str();
    default: return to_string(map.kind);
  }
}

Psi operator_psi_image(const OperatorMap& map, const Psi& psi) {
  Transform t;
  switch (map.kind) {
    case OperatorKind::fourier_transform:
      t.rule = TransformRule::conjugate_index;
      return psi_transform(psi, t);
    case OperatorKind::riesz_partial_sum:
      t.lambda = t.gamma = 1.0;
      break;
    case OperatorKind::maximal_fourier:
      t.lambda = t.gamma = 2.0;
      break;
    case OperatorKind::singular:
      t.lambda = map.lambda;
      t.gamma = map.gamma;
      break;
    case OperatorKind::convolution:
      t.rule = TransformRule::conv_s;
      t.s = map.s;
      return psi_transform(psi, t);
    case OperatorKind::multiplication:
      t.rule = TransformRule::mult_s;
      t.s = map.s;
      return psi_transform(psi, t);
  }
  require(psi.a() >= 1.0, std::string(to_string(map.kind)) + ": supp psi must lie in (1, inf)");
  return psi_transform(psi, t);
}

ZetaParams operator_zeta_image(const ZetaParams& z, double lambda, double gamma) {
  require(z.a >= 1.0, "operator_zeta_image: need a >= 1");
  require(lambda >= 0.0 && gamma >= 0.0, "operator_zeta_image: need lambda, gamma >= 0");
  double alpha = z.alpha, beta = z.beta;
  if (z.a == 1.0) alpha += gamma;
  // zeta ~ p^beta (beta < 0) at infinity; the image gains p^lambda in psi.
  if (!std::isfinite(z.b)) beta -= lambda;
  return zeta_params(z.a, z.b, alpha, beta);
}

RieszAudit riesz_growth_audit(const FourierSeries& f, const std::vector<double>& p_grid,
                              const std::vector<long>& M_grid, bool with_remainders) {
  require(!p_grid.empty() && !M_grid.empty(), "riesz_growth_audit: empty grid");
  for (double p : p_grid) require(p > 1.0, "riesz_growth_audit: p must exceed 1");
  const auto nf = series_lp_norms(f, p_grid);
  RieszAudit out;
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    require(nf[i].value > 0.0, "riesz_growth_audit: |f|_p is zero");
    out.rows.push_back({p_grid[i], nf[i].value, 0.0, 0, 0.0});
  }
  for (long M : M_grid) {
    const auto ns = series_lp_norms(partial_sum(f, M), p_grid);
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
      auto& row = out.rows[i];
      const double r = ns[i].value / row.norm_f;
      if (r > row.max_ratio) {
        row.max_ratio = r;
        row.argmax_M = M;
      }
    }
    if (with_remainders) {
      const auto tail = series_tail(f, M);
      const auto nr = series_lp_norms(tail, p_grid);
      for (std::size_t i = 0; i < p_grid.size(); ++i) out.remainders.emplace_back(M, p_grid[i], nr[i].value);
    }
  }
  for (auto& row : out.rows) {
    row.normalized = row.max_ratio / (row.p * row.p / (row.p - 1.0));
    out.max_normalized = std::max(out.max_normalized, row.normalized);
  }
  return out;
}

namespace {

struct QawfWorkspace {
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(1000);
  gsl_integration_workspace* cyc = gsl_integration_workspace_alloc(1000);
  gsl_integration_qawo_table* tab = gsl_integration_qawo_table_alloc(1.0, 1.0, GSL_INTEG_COSINE, 25);
  QawfWorkspace() = default;
  ~QawfWorkspace() {
    gsl_integration_qawo_table_free(tab);
    gsl_integration_workspace_free(cyc);
    gsl_integration_workspace_free(w);
  }
  QawfWorkspace(const QawfWorkspace&) = delete;
  QawfWorkspace& operator=(const QawfWorkspace&) = delete;
};

// S(r, t) = t^{r-1} int_0^t y^-r cos y dy, t < 1.
double cos_power_head(double r, double t) {
  double sum = 0.0, term = 1.0;
  for (int k = 0; k < 40; ++k) {
    sum += term / (2.0 * k + 1.0 - r);
    term *= -t * t / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
    if (std::abs(term) < 1e-18) break;
  }
  return sum;
}

// J_r(t) = int_t^inf y^-r cos y dy, 0 < r <= 1, t >= 1.
double cos_power_tail(double r, double t) {
  if (r == 1.0) return -gsl_sf_Ci(t);
  if (t >= 40.0) {
    // int_t^inf y^-r e^{iy} dy ~ i e^{it} t^-r sum_k (r)_k (-i/t)^k, truncated at the smallest term.
    std::complex<double> sum = 0.0, term = 1.0;
    for (int k = 0; k < 200; ++k) {
      sum += term;
      const std::complex<double> next = term * std::complex<double>(0.0, -(r + k) / t);
      if (std::abs(next) >= std::abs(term) || std::abs(next) < 1e-17) break;
      term = next;
    }
    return std::real(std::complex<double>(0.0, 1.0) * std::polar(1.0, t) * sum) * std::pow(t, -r);
  }
  static thread_local QawfWorkspace ws;
  const auto g = [r](double y) { return std::pow(y, -r); };
  gsl_function F;
  F.function = [](double y, void* p) { return (*static_cast<decltype(g)*>(p))(y); };
  F.params = const_cast<void*>(static_cast<const void*>(&g));
  double res = 0.0, err = 0.0;
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  const int st = gsl_integration_qawf(&F, t, 1e-12 * std::pow(t, -r), 1000, ws.w, ws.cyc, ws.tab, &res, &err);
  gsl_set_error_handler(old);
  if (st != GSL_SUCCESS && !(err <= 1e-10 * std::pow(t, -r)))
    throw NumericalError("fourier_transform_fab: oscillatory quadrature did not converge");
  return res;
}

void check_ab(double a, double b) {
  require(a >= 1.0 && a < b && std::isfinite(b), "f_{a,b} transform: need 1 <= a < b < inf");
}

// F = P + R: P(t) = 2 Gamma(s) cos(pi s / 2) t^-s is the large-t power law, R = O(t^-2).
double fab_power_coef(double b) {
  const double s = 1.0 - 1.0 / b;
  return 2.0 * std::tgamma(s) * std::cos(kPi * s / 2.0);
}

}  // namespace

double fourier_transform_fab(double a, double b, double t) {
  check_ab(a, b);
  t = std::abs(t);
  require(t > 0.0, "fourier_transform_fab: t must be nonzero");
  const double rb = 1.0 / b, ra = 1.0 / a;
  if (t < 1.0) {
    // 2 [int_0^1 x^{-1/b} cos tx + int_1^inf x^{-1/a} cos tx], the second split at 0 in y = t x.
    const double outer = a == 1.0 ? -gsl_sf_Ci(t)
                                  : std::pow(t, ra - 1.0) * std::tgamma(1.0 - ra) * std::sin(kPi * ra / 2.0) -
                                        cos_power_head(ra, t);
    return 2.0 * (cos_power_head(rb, t) + outer);
  }
  // 2 [int_0^inf x^{-1/b} cos tx - int_1^inf x^{-1/b} cos tx + int_1^inf x^{-1/a} cos tx].
  const double s = 1.0 - rb;
  return fab_power_coef(b) * std::pow(t, -s) +
         2.0 * (std::pow(t, ra - 1.0) * cos_power_tail(ra, t) - std::pow(t, rb - 1.0) * cos_power_tail(rb, t));
}

double fourier_fab_l2_squared(double a, double b) {
  check_ab(a, b);
  require(a < 2.0 && b > 2.0, "fourier_fab_l2_squared: need a < 2 < b");
  const auto F = [a, b](double t) { return fourier_transform_fab(a, b, t); };
  // (0, tau): F ~ c0 t^-e0 + k0 with e0 = 1 - 1/a.
  const double tau = 1e-9, e0 = 1.0 - 1.0 / a;
  const double c0 = 2.0 * std::tgamma(1.0 - 1.0 / a) * std::sin(kPi / (2.0 * a));
  const double k0 = F(tau) - c0 * std::pow(tau, -e0);
  double lo = c0 * c0 * std::pow(tau, 1.0 - 2.0 * e0) / (1.0 - 2.0 * e0) +
              2.0 * c0 * k0 * std::pow(tau, 1.0 - e0) / (1.0 - e0) + k0 * k0 * tau;
  // (tau, 1) in log t.
  lo += integrate([&](double u) {
          const double t = std::exp(u);
          const double v = F(t);
          return v * v * t;
        }, std::log(tau), 0.0, 1e-11).value;
  // (1, inf): int P^2 in closed form, 2PR + R^2 by Gauss panels up to T, rest O(T^{-1-s}).
  const double s = 1.0 - 1.0 / b, cp = fab_power_coef(b), T = 400.0;
  double hi = cp * cp / (2.0 * s - 1.0);
  const Rule& gl = gauss_legendre(20);
  const double w = 0.5;
  for (double x0 = 1.0; x0 < T; x0 += w) {
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      const double t = x0 + 0.5 * w * (gl.x[i] + 1.0);
      const double P = cp * std::pow(t, -s), R = F(t) - P;
      hi += 0.5 * w * gl.w[i] * (2.0 * P * R + R * R);
    }
  }
  return 2.0 * (lo + hi);
}

HalfLineTransform fourier_transform_halfline_example(double a, double b, const std::vector<double>& t_grid) {
  check_ab(a, b);
  require(!t_grid.empty(), "halfline example: empty t grid");
  HalfLineTransform out;
  out.a = a;
  out.b = b;
  out.A = b / (b - 1.0);
  out.B = a == 1.0 ? kInf : a / (a - 1.0);
  out.t_compare_from = a == 1.0 ? 1.0 : 0.0;
  double lo = kInf, hi = 0.0;
  for (double t : t_grid) {
    require(t > 0.0, "halfline example: t must be positive");
    double F = kNaN;
    try {
      F = fourier_transform_fab(a, b, t);
    } catch (const NumericalError&) {
      out.converged = false;
    }
    const double cmp = t < 1.0 ? (std::isfinite(out.B) ? std::pow(t, -1.0 / out.B) : 1.0) : std::pow(t, -1.0 / out.A);
    out.samples.emplace_back(t, F, cmp);
    if (t >= out.t_compare_from && std::isfinite(F)) {
      lo = std::min(lo, F / cmp);
      hi = std::max(hi, F / cmp);
    }
  }
  if (hi > 0.0) {
    out.ratio_lo = lo;
    out.ratio_hi = hi;
  }
  const CatalogFunction f = catalog_make(Call{"f_ab", {{"a", a}, {"b", b}}});
  const auto r = g_norm(f, zeta_make(a, b, 1.0 / a, 1.0 / b));
  out.g_norm = r.value.as_double();
  return out;
}

namespace {

// Cell averages of the decreasing rearrangement of a step tail on n cells of [0, 2 pi).
std::vector<double> layout(const Tail& t, long n) {
  require(t.kind() == TailKind::piecewise_step, "circle_convolution_bound: step tails only");
  require(t.total_mass() <= 2.0 * kPi * (1.0 + 1e-12), "circle_convolution_bound: support exceeds the circle");
  const double dx = 2.0 * kPi / static_cast<double>(n);
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  const auto& vals = *t.step_values();
  const auto& mass = *t.step_masses();
  double x = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double end = std::min(2.0 * kPi, x + mass[i]);
    for (long c = static_cast<long>(x / dx); c < n && c * dx < end; ++c) {
      const double overlap = std::min(end, (c + 1) * dx) - std::max(x, c * dx);
      if (overlap > 0.0) v[static_cast<std::size_t>(c)] += vals[i] * overlap / dx;
    }
    x = end;
  }
  return v;
}

double grid_norm(const std::vector<double>& v, double p, double dx) {
  const double m = kernels::max_abs(v);
  if (m == 0.0) return 0.0;
  return m * std::pow(kernels::pow_sum(v, {}, p, 1.0 / m) * dx, 1.0 / p);
}

std::vector<double> circular_convolution(const std::vector<double>& f, const std::vector<double>& g, double dx) {
  const long n = static_cast<long>(f.size());
  const long m = n / 2 + 1;
  auto* F = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(m)));
  auto* G = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(m)));
  std::vector<double> in(f), out(static_cast<std::size_t>(n));
  fftw_plan pf = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), F, FFTW_ESTIMATE);
  fftw_execute(pf);
  std::copy(g.begin(), g.end(), in.begin());
  fftw_execute_dft_r2c(pf, in.data(), G);
  for (long k = 0; k < m; ++k) {
    const double re = F[k][0] * G[k][0] - F[k][1] * G[k][1], im = F[k][0] * G[k][1] + F[k][1] * G[k][0];
    F[k][0] = re;
    F[k][1] = im;
  }
  fftw_plan pb = fftw_plan_dft_c2r_1d(static_cast<int>(n), F, out.data(), FFTW_ESTIMATE);
  fftw_execute(pb);
  fftw_destroy_plan(pf);
  fftw_destroy_plan(pb);
  fftw_free(F);
  fftw_free(G);
  for (double& v : out) v *= dx / static_cast<double>(n);
  return out;
}

}  // namespace

YoungCheck circle_convolution_bound(const Tail& f, const Tail& g, double s, double r, double shift, long cells) {
  require(s > 1.0 && r > s, "circle_convolution_bound: need r > s > 1");
  require(cells >= 16 && (cells & (cells - 1)) == 0, "circle_convolution_bound: cells must be a power of two");
  YoungCheck out;
  out.s = s;
  out.r = r;
  const double t = s / (s - 1.0);
  out.q = r * t / (r + t);
  require(out.q >= 1.0, "circle_convolution_bound: index r t / (r + t) below 1");
  const double dx = 2.0 * kPi / static_cast<double>(cells);
  const auto fv = layout(f, cells);
  auto gv = layout(g, cells);
  const long k = static_cast<long>(std::lround(shift / dx)) % cells;
  std::rotate(gv.begin(), gv.begin() + (cells - (k + cells) % cells) % cells, gv.end());
  out.norm_f = grid_norm(fv, s, dx);
  out.norm_g = grid_norm(gv, out.q, dx);
  out.rhs = out.norm_f * out.norm_g;
  out.lhs = out.rhs == 0.0 ? 0.0 : grid_norm(circular_convolution(fv, gv, dx), r, dx);
  out.holds = out.lhs <= 1.01 * out.rhs;
  return out;
}

std::vector<FourierGap> fourier_gaps(const FourierSeries& f, const Psi& psi, const std::vector<long>& M_grid,
                                     const std::vector<double>& p_ladder) {
  require(!M_grid.empty() && !p_ladder.empty(), "fourier_gaps: empty grid");
  for (double p : p_ladder) require(psi.contains(p) && p >= 1.0, "fourier_gaps: ladder outside supp psi");
  std::vector<FourierGap> out;
  for (long M : M_grid) {
    FourierGap g;
    g.M = M;
    const auto sM = partial_sum(f, M);
    long n = 4096;
    while (n / 2 <= sM.n_max) n <<= 1;
    g.sup_partial = kernels::max_abs(series_sample(sM, n));
    const bool empty = f.finite() && M >= f.n_max;
    if (!empty) {
      const auto nr = series_lp_norms(series_tail(f, M), p_ladder);
      for (std::size_t i = 0; i < p_ladder.size(); ++i) {
        const double r = nr[i].value / psi(p_ladder[i]);
        if (r > g.gap) {
          g.gap = r;
          g.p_at = p_ladder[i];
        }
      }
    }
    out.push_back(g);
  }
  return out;
}

Psi log_model_psi() { return psi_parse("log_model()"); }

FourierDivergenceReport fourier_divergence_demo(const Psi& psi, const std::vector<long>& M_grid,
                                                const std::vector<double>& p_ladder) {
  FourierDivergenceReport out;
  out.p_ladder = p_ladder;
  const CatalogFunction cat = catalog_make("log_singular(d=1)");
  double lo = kInf, hi = 0.0;
  for (double p : p_ladder) {
    require(psi.contains(p), "fourier_divergence_demo: ladder outside supp psi");
    const double r = std::exp(cat.log_moment(p) - psi.log_at(p));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  out.match_lo = lo;
  out.match_hi = hi;
  require(g_norm(cat, psi).value.is_finite(), "fourier_divergence_demo: log(pi/|x|) is not in G(psi)");
  out.g0_distance = g0_distance(*cat.tail, psi).value;
  require(out.g0_distance > 1e-6, "fourier_divergence_demo: log(pi/|x|) lies in G0(psi)");
  out.gaps = fourier_gaps(series_log_model(), psi, M_grid, p_ladder);
  out.min_gap = kInf;
  for (const auto& g : out.gaps) out.min_gap = std::min(out.min_gap, g.gap);
  return out;
}

}  // namespace gls
