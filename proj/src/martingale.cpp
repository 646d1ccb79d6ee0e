#include "gls/martingale.hpp"

#include <gsl/gsl_sf_gamma.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "gls/catalog.hpp"
#include "gls/grammar.hpp"
#include "gls/kernels.hpp"
#include "gls/quadrature.hpp"

namespace gls {

namespace {

constexpr int kMaxDepth = 24;
constexpr int kNodes = 8;  // Gauss points per sub-interval

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

Tail step_tail(const std::vector<double>& v, double mass) {
  std::vector<double> a(v.size()), m(v.size(), mass);
  std::transform(v.begin(), v.end(), a.begin(), [](double x) { return std::abs(x); });
  return Tail::step(std::move(a), std::move(m));
}

UnitFunction make_power(double r, std::string label) {
  require(r > 0.0 && std::isfinite(r), "power: r must be positive");
  UnitFunction f;
  f.label = std::move(label);
  f.value = [r](double x) { return std::pow(x, r); };
  f.upper_primitive = [r](double x) { return -std::expm1((r + 1.0) * std::log(x)) / (r + 1.0); };
  f.tail = Tail::closed({[r](double t) { return t < 0.0 ? std::log1p(-std::exp(t / r)) : -kInf; }, 1.0, 0.0, {}});
  return f;
}

UnitFunction make_g_b_nu(double b, double nu) {
  require(b > 1.0 && std::isfinite(b), "g_b_nu on [0,1]: b must be finite and > 1");
  require(nu >= 0.0, "g_b_nu on [0,1]: nu must be >= 0");
  UnitFunction f;
  f.label = Call{"g_b_nu", {{"b", b}, {"nu", nu}}}.str();
  f.value = [b, nu](double x) {
    const double L = -std::log(x);
    return std::exp(L / b + (nu == 0.0 ? 0.0 : nu * std::log(L)));
  };
  // int_x^1 y^{-1/b} (-log y)^nu dy = gamma(nu + 1, c L) / c^{nu + 1}, c = 1 - 1/b.
  const double c = 1.0 - 1.0 / b;
  f.upper_primitive = [c, nu](double x) {
    const double L = -std::log(x);
    if (nu == 0.0) return -std::expm1(-c * L) / c;
    const double P = std::isinf(L) ? 1.0 : gsl_sf_gamma_inc_P(nu + 1.0, c * L);
    return P * std::tgamma(nu + 1.0) / std::pow(c, nu + 1.0);
  };
  f.tail = Profile{Profile::Side::inner, 1.0 / b, nu, 0.0, 0.5, 0.5}.tail();
  f.singular_at_zero = true;
  return f;
}

// Tail of |f - m| on (0, h) for f decreasing with distribution tail T.
Tail first_cell_tail(const Tail& T, double m, double h, double f_h) {
  Tail::Closed c;
  c.total_mass = h;
  c.log_sup = kInf;
  if (m > f_h) c.log_breaks = {std::log(m - f_h)};
  const double log_h = std::log(h);
  c.log_tail = [T, m, h, f_h, log_h](double t) {
    const double u = std::exp(t);
    // log(m + u) without overflowing e^t.
    double v = std::min(log_h, T.log_at(t + std::log1p(m * std::exp(-t))));
    if (m - u > f_h) {
      const double below = h - std::exp(T.log_at(std::log(m - u)));
      if (below > 0.0) v = log_add(v, std::log(below));
    }
    return v;
  };
  return Tail::closed(std::move(c));
}

// |f - m|^p integrated by Gauss nodes on [lo, hi], split where f crosses m.
void append_nodes(const std::function<double(double)>& f, double lo, double hi, double m, std::vector<double>& d,
                  std::vector<double>& w) {
  const Rule& rule = gauss_legendre(kNodes);
  const double glo = f(lo) - m, ghi = f(hi) - m;
  auto graded = [&](double from, double to) {
    // x = from + (to - from) s^2 clusters nodes at `from`, where f - m vanishes.
    for (int i = 0; i < kNodes; ++i) {
      const double s = 0.5 * (rule.x[i] + 1.0);
      const double x = from + (to - from) * s * s;
      d.push_back(f(x) - m);
      w.push_back(rule.w[i] * std::abs(to - from) * s);
    }
  };
  if ((glo < 0.0) != (ghi < 0.0) && glo != 0.0 && ghi != 0.0) {
    const double xs = bisect([&](double x) { return f(x) - m; }, lo, hi);
    graded(xs, lo);
    graded(xs, hi);
    return;
  }
  for (int i = 0; i < 2 * kNodes; ++i) {
    const Rule& r2 = gauss_legendre(2 * kNodes);
    const double x = lo + 0.5 * (hi - lo) * (r2.x[i] + 1.0);
    d.push_back(f(x) - m);
    w.push_back(0.5 * (hi - lo) * r2.w[i]);
  }
}

struct DifferenceModel {
  std::vector<double> d, w;
  double scale = 0.0;
  std::optional<Tail> first;
  std::optional<Tail> exact;

  double log_moment(double p) const {
    if (exact) return exact->log_lp_norm(p);
    double acc = -kInf;
    if (scale > 0.0) acc = std::log(kernels::pow_sum(d, w, p, 1.0 / scale)) + p * std::log(scale);
    if (first) {
      const double l = first->log_lp_norm(p);
      if (l == kInf) return kInf;
      if (l != -kInf) acc = log_add(acc, p * l);
    }
    return acc == -kInf ? -kInf : acc / p;
  }
};

}  // namespace

UnitFunction unit_step(std::vector<double> values) {
  require(is_pow2(values.size()), "step: number of values must be a power of two");
  require(values.size() <= (std::size_t{1} << kMaxDepth), "step: too many cells");
  for (double v : values) require(std::isfinite(v), "step: values must be finite");
  UnitFunction f;
  Call call{"step", {}};
  for (std::size_t i = 0; i < values.size(); ++i) call.args.emplace_back("v" + std::to_string(i), values[i]);
  f.label = call.str();
  const double h = 1.0 / static_cast<double>(values.size());
  f.value = [values, h](double x) {
    const auto k = std::min(values.size() - 1, static_cast<std::size_t>(std::max(0.0, x / h)));
    return values[k];
  };
  f.tail = step_tail(values, h);
  f.steps = std::move(values);
  return f;
}

UnitFunction unit_function(const std::string& text) {
  const Call call = parse_call(text);
  const std::string& n = call.name;
  if (n == "const") {
    call.check_keys({"c"});
    auto f = unit_step({call.require_arg("c")});
    f.label = call.str();
    return f;
  }
  if (n == "identity") {
    call.check_keys({});
    return make_power(1.0, "identity()");
  }
  if (n == "half_indicator") {
    call.check_keys({});
    auto f = unit_step({1.0, 0.0});
    f.label = "half_indicator()";
    return f;
  }
  if (n == "power") {
    call.check_keys({"r"});
    return make_power(call.require_arg("r"), call.str());
  }
  if (n == "g_b_nu") {
    call.check_keys({"b", "nu"});
    return make_g_b_nu(call.require_arg("b"), call.get("nu", 0.0));
  }
  if (n == "step") {
    std::vector<double> v(call.args.size(), kNaN);
    for (const auto& [key, value] : call.args) {
      require(key.size() > 1 && key[0] == 'v' && key.find_first_not_of("0123456789", 1) == std::string::npos,
              "step: keys are v0, v1, ...");
      const auto i = std::stoul(key.substr(1));
      require(i < v.size() && std::isnan(v[i]), "step: keys must be v0..v{k-1} without repeats");
      v[i] = value;
    }
    return unit_step(std::move(v));
  }
  throw PreconditionError("unknown unit-interval function: " + n);
}

std::vector<double> condition_on_dyadic(const UnitFunction& f, int n) {
  require(n >= 0 && n <= kMaxDepth, "condition_on_dyadic: level must be in [0, 24]");
  const std::size_t cells = std::size_t{1} << n;
  std::vector<double> out(cells);
  if (!f.steps.empty()) {
    const std::size_t s = f.steps.size();
    if (cells >= s) {
      for (std::size_t k = 0; k < cells; ++k) out[k] = f.steps[k / (cells / s)];
    } else {
      std::vector<double> cur = f.steps;
      while (cur.size() > cells) {
        std::vector<double> next(cur.size() / 2);
        kernels::pairwise_mean(cur, next);
        cur = std::move(next);
      }
      out = std::move(cur);
    }
    return out;
  }
  const double h = 1.0 / static_cast<double>(cells);
  for (std::size_t k = 0; k < cells; ++k) {
    const double lo = static_cast<double>(k) * h, hi = lo + h;
    if (f.upper_primitive) {
      out[k] = (f.upper_primitive(lo) - f.upper_primitive(hi)) / h;
    } else {
      out[k] = integrate(f.value, lo, hi, 1e-10).value / h;
    }
    if (!std::isfinite(out[k])) throw PreconditionError("condition_on_dyadic: f is not integrable on a cell");
  }
  return out;
}

DyadicMartingale dyadic_martingale(const UnitFunction& f, int depth) {
  require(depth >= 0 && depth <= kMaxDepth, "dyadic_martingale: depth must be in [0, 24]");
  DyadicMartingale m;
  m.source = f;
  m.levels.resize(static_cast<std::size_t>(depth) + 1);
  m.levels[depth] = condition_on_dyadic(f, depth);
  for (int n = depth - 1; n >= 0; --n) {
    m.levels[n].resize(std::size_t{1} << n);
    kernels::pairwise_mean(m.levels[n + 1], m.levels[n]);
  }
  return m;
}

bool DyadicMartingale::martingale_identity() const {
  for (std::size_t n = 0; n + 1 < levels.size(); ++n)
    for (std::size_t k = 0; k < levels[n].size(); ++k)
      if (levels[n][k] != (levels[n + 1][2 * k] + levels[n + 1][2 * k + 1]) / 2) return false;
  return true;
}

Tail DyadicMartingale::level_tail(int n) const {
  require(n >= 0 && n <= depth(), "level_tail: level out of range");
  return step_tail(levels[n], 1.0 / static_cast<double>(levels[n].size()));
}

Tail DyadicMartingale::running_max_tail() const {
  const std::size_t cells = levels.back().size();
  std::vector<double> acc(cells, -kInf), lifted(cells);
  for (const auto& lv : levels) {
    const std::size_t rep = cells / lv.size();
    for (std::size_t j = 0; j < cells; ++j) lifted[j] = lv[j / rep];
    kernels::max_inplace(acc, lifted);
  }
  return step_tail(acc, 1.0 / static_cast<double>(cells));
}

LogMomentFn DyadicMartingale::difference_log_moment(int n) const {
  require(n >= 0 && n <= depth(), "difference_log_moment: level out of range");
  auto model = std::make_shared<DifferenceModel>();
  const auto& lv = levels[n];
  const std::size_t cells = lv.size();
  if (!source.steps.empty()) {
    const std::size_t grid = std::max(cells, source.steps.size());
    std::vector<double> diff(grid);
    for (std::size_t j = 0; j < grid; ++j)
      diff[j] = lv[j / (grid / cells)] - source.steps[j / (grid / source.steps.size())];
    model->exact = step_tail(diff, 1.0 / static_cast<double>(grid));
  } else {
    const double h = 1.0 / static_cast<double>(cells);
    std::size_t k0 = 0;
    if (source.singular_at_zero) {
      model->first = first_cell_tail(source.tail, lv[0], h, source.value(h));
      k0 = 1;
    }
    model->d.reserve(cells * 2 * kNodes);
    model->w.reserve(cells * 2 * kNodes);
    for (std::size_t k = k0; k < cells; ++k) {
      const double lo = static_cast<double>(k) * h;
      append_nodes(source.value, lo, k + 1 == cells ? 1.0 : lo + h, lv[k], model->d, model->w);
    }
    if (!model->d.empty()) model->scale = kernels::max_abs(model->d);
  }
  return [model](double p) { return model->log_moment(p); };
}

namespace {

void require_nonnegative(const DyadicMartingale& m, const char* who) {
  require(!m.levels.empty(), std::string(who) + ": empty martingale");
  for (double v : m.levels.back()) require(v >= 0.0, std::string(who) + ": martingale must be non-negative");
}

double sup_level_lp(const DyadicMartingale& m, double p) {
  double s = 0.0;
  for (int n = 0; n <= m.depth(); ++n) s = std::max(s, m.level_tail(n).lp_norm(p).as_double());
  return s;
}

double sup_level_g(const DyadicMartingale& m, const Psi& psi) {
  double s = 0.0;
  for (int n = 0; n <= m.depth(); ++n) s = std::max(s, g_norm(m.level_tail(n), psi).value.as_double());
  return s;
}

}  // namespace

DoobAudit doob_audit(const DyadicMartingale& m, const std::vector<double>& p_grid) {
  require_nonnegative(m, "doob_audit");
  for (double p : p_grid) require(p > 1.0 && std::isfinite(p), "doob_audit: p must be in (1, inf)");
  const Tail mx = m.running_max_tail();
  DoobAudit out;
  for (double p : p_grid) {
    DoobRow r;
    r.p = p;
    r.max_norm = mx.lp_norm(p).as_double();
    r.sup_level = sup_level_lp(m, p);
    r.ratio = r.sup_level > 0.0 ? r.max_norm / r.sup_level : 0.0;
    r.bound = p / (p - 1.0);
    r.holds = r.ratio <= 1.001 * r.bound;
    out.holds = out.holds && r.holds;
    out.rows.push_back(r);
  }
  return out;
}

UpcrossingAudit upcrossing_audit(const DyadicMartingale& m, double c, double d, double p) {
  require(c > 0.0 && d > c && std::isfinite(d), "upcrossing_audit: need 0 < c < d < inf");
  require(p >= 1.0 && std::isfinite(p), "upcrossing_audit: p must be >= 1");
  require_nonnegative(m, "upcrossing_audit");
  UpcrossingAudit out;
  out.c = c;
  out.d = d;
  out.p = p;
  const int L = m.depth();
  const std::size_t cells = m.levels.back().size();
  double total = 0.0;
  for (std::size_t j = 0; j < cells; ++j) {
    bool below = false;
    long count = 0;
    for (int n = 0; n <= L; ++n) {
      const double v = m.levels[n][j >> (L - n)];
      if (!below && v <= c) below = true;
      else if (below && v >= d) {
        ++count;
        below = false;
      }
    }
    total += static_cast<double>(count);
  }
  out.mean_upcrossings = total / static_cast<double>(cells);
  const double S = std::pow(sup_level_lp(m, p), p);
  const double dc = d - c;
  out.bound = std::pow(dc, -p) * (std::pow(2.0, p - 1.0) * (S + std::pow(c, p)) + std::pow(dc, p));
  double pos = 0.0;
  for (const auto& lv : m.levels) {
    double s = 0.0;
    for (double v : lv) s += std::max(0.0, v - c);
    pos = std::max(pos, s / static_cast<double>(lv.size()));
  }
  out.doob_bound = pos / dc;
  out.holds = out.mean_upcrossings <= 1.001 * out.bound;
  return out;
}

MartingaleConvergence martingale_convergence(const DyadicMartingale& m, const Psi& psi, const Psi& nu) {
  const Psi psi01 = psi_transform(psi, Transform{TransformRule::lambda_gamma, 2.0, 0.0, 1.0});
  require(psi_dominates(psi01, nu).dominates, "martingale_convergence: psi_{0,1} << nu does not hold");
  MartingaleConvergence out;
  out.sup_level_norm = sup_level_g(m, psi);
  require(std::isfinite(out.sup_level_norm), "martingale_convergence: sup_n ||f_n||G(psi) is infinite");
  out.running_max_norm = g_norm(m.running_max_tail(), psi01).value.as_double();
  for (int n = 0; n <= m.depth(); ++n) out.ladder.push_back(g_norm(m.difference_log_moment(n), nu).value.as_double());
  out.monotone_after_3 = true;
  for (std::size_t n = 4; n < out.ladder.size(); ++n)
    if (out.ladder[n] > out.ladder[n - 1] * (1.0 + 1e-9)) out.monotone_after_3 = false;
  out.final_ratio = out.ladder.front() > 0.0 ? out.ladder.back() / out.ladder.front() : 0.0;
  out.trend_to_zero = out.monotone_after_3 && out.final_ratio < 0.05;
  return out;
}

MartingaleDivergence martingale_divergence(const UnitFunction& f, const Psi& psi, int depth) {
  MartingaleDivergence out;
  const GNormResult gf = g_norm(f.tail, psi);
  require(gf.value.is_finite(), "martingale_divergence: f is not in G(psi)");
  out.g_norm_f = gf.value.value;
  out.g0_distance = g0_distance(f.tail, psi).value;
  require(out.g0_distance > 1e-6, "martingale_divergence: f lies in G0(psi) (distance 0)");
  const DyadicMartingale m = dyadic_martingale(f, depth);
  out.sup_level_norm = 0.0;
  out.min_gap = kInf;
  for (int n = 0; n <= depth; ++n) {
    out.level_norms.push_back(g_norm(m.level_tail(n), psi).value.as_double());
    out.sup_level_norm = std::max(out.sup_level_norm, out.level_norms.back());
    out.gaps.push_back(g_norm(m.difference_log_moment(n), psi).value.as_double());
    out.defects.push_back(std::max(0.0, out.g0_distance - out.gaps.back()));
    out.min_gap = std::min(out.min_gap, out.gaps.back());
  }
  out.uniform_bound = out.sup_level_norm <= out.g_norm_f * (1.0 + 1e-9);
  return out;
}

std::vector<double> lp_convergence_ladder(const DyadicMartingale& m, double p) {
  require(p >= 1.0 && std::isfinite(p), "lp_convergence_ladder: p must be in [1, inf)");
  std::vector<double> out;
  for (int n = 0; n <= m.depth(); ++n) out.push_back(std::exp(m.difference_log_moment(n)(p)));
  return out;
}

}  // namespace gls
