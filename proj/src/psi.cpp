#include "gls/psi.hpp"

#include <math.h>  // pchip.hpp calls unqualified isnan

#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <sstream>

#include "gls/grammar.hpp"

namespace gls {

const char* to_string(PsiKind k) {
  switch (k) {
    case PsiKind::zeta_family: return "zeta-family";
    case PsiKind::catalog_moment: return "catalog-moment";
    case PsiKind::tabulated_grid: return "tabulated-grid";
    case PsiKind::transformed: return "transformed";
    case PsiKind::closed_form: return "closed-form";
  }
  return "unknown";
}

Psi::Psi(double a, double b, LogFn log_eval, PsiKind kind, std::string label)
    : a_(a), b_(b), log_eval_(std::move(log_eval)), kind_(kind), label_(std::move(label)) {
  require(a >= 1.0, "psi support: a must be >= 1");
  require(b > a, "psi support: b must exceed a");
}

double Psi::log_at(double p) const {
  if (!contains(p)) {
    std::ostringstream os;
    os << "psi '" << label_ << "' evaluated at p=" << p << " outside its support";
    throw PreconditionError(os.str());
  }
  return log_eval_(p);
}

Psi Psi::with_zeta(ZetaParams z) const {
  Psi out = *this;
  out.zeta_ = z;
  return out;
}

double log_zeta_value(const ZetaParams& z, double p) {
  require(p > z.a && p < z.b, "zeta: p outside (a, b)");
  if (p < z.h) return z.alpha == 0.0 ? 0.0 : z.alpha * std::log(p - z.a);
  if (std::isfinite(z.b)) return z.beta * std::log(z.b - p);
  return z.beta * std::log(p);
}

double zeta_value(const ZetaParams& z, double p) { return std::exp(log_zeta_value(z, p)); }

ZetaParams zeta_params(double a, double b, double alpha, double beta) {
  require(a >= 1.0, "zeta: a must be >= 1");
  require(b > a, "zeta: b must exceed a");
  ZetaParams z{a, b, alpha, beta, kNaN};
  if (std::isfinite(b)) {
    require(alpha > 0.0 && beta > 0.0, "zeta: trivial regime (finite b needs alpha > 0 and beta > 0)");
    // alpha log(h-a) - beta log(b-h) is increasing on (a, b).
    auto r = [&](double h) { return alpha * std::log(h - a) - beta * std::log(b - h); };
    z.h = bisect(r, a, b, 1e-15);
  } else {
    require(alpha >= 0.0 && beta < 0.0, "zeta: trivial regime (b = inf needs alpha >= 0 and beta < 0)");
    if (alpha == 0.0) {
      z.h = a;  // no interior root; the p^beta branch covers (a, inf)
    } else {
      auto r = [&](double h) { return alpha * std::log(h - a) - beta * std::log(h); };
      double hi = a + 1.0;
      while (r(hi) < 0.0) hi *= 2.0;
      z.h = bisect(r, a, hi, 1e-15);
    }
  }
  return z;
}

Psi zeta_make(double a, double b, double alpha, double beta) {
  const ZetaParams z = zeta_params(a, b, alpha, beta);
  std::ostringstream os;
  os << "zeta(a=" << a << ",b=" << b << ",alpha=" << alpha << ",beta=" << beta << ")";
  Psi psi(a, b, [z](double p) { return -log_zeta_value(z, p); }, PsiKind::zeta_family, os.str());
  return psi.with_zeta(z);
}

Psi psi_constant(double a, double b, double c) {
  require(c > 0.0, "psi_constant: value must be positive");
  const double lc = std::log(c);
  std::ostringstream os;
  os << "const(" << c << ")";
  return Psi(a, b, [lc](double) { return lc; }, PsiKind::closed_form, os.str());
}

Psi psi_closed(std::string label, double a, double b, Psi::LogFn log_eval) {
  return Psi(a, b, std::move(log_eval), PsiKind::closed_form, std::move(label));
}

Psi psi_from_moments(std::string label, double a, double b, Psi::LogFn log_norm) {
  return Psi(a, b, std::move(log_norm), PsiKind::catalog_moment, std::move(label));
}

Psi psi_parse(const std::string& text) {
  const Call call = parse_call(text);
  const std::string& n = call.name;
  if (n == "zeta") {
    call.check_keys({"a", "b", "alpha", "beta"});
    return zeta_make(call.require_arg("a"), call.require_arg("b"), call.require_arg("alpha"), call.require_arg("beta"));
  }
  if (n == "constant") {
    call.check_keys({"a", "b", "c"});
    const double a = call.require_arg("a"), b = call.require_arg("b");
    require(a >= 1.0 && b > a, "constant: need 1 <= a < b");
    return psi_constant(a, b, call.get("c", 1.0));
  }
  if (n == "log_model") {
    call.check_keys({});
    return psi_closed("log_model()", 1.0, kInf, [](double p) { return (std::log(2.0 * kPi) + std::lgamma(p + 1.0)) / p; });
  }
  if (n == "power_moments") {
    call.check_keys({"b"});
    const double b = call.require_arg("b");
    require(b > 1.0 && std::isfinite(b), "power_moments: b must be finite and > 1");
    return psi_from_moments(call.str(), 1.0, b, [b](double p) { return -std::log1p(-p / b) / p; });
  }
  throw PreconditionError("unknown psi: " + n);
}

Psi psi_tabulated(std::vector<double> p, std::vector<double> psi) {
  const std::size_t n = p.size();
  require(n >= 2 && psi.size() == n, "psi_tabulated: need >= 2 matching points");
  for (std::size_t i = 0; i < n; ++i) {
    require(psi[i] > 0.0 && std::isfinite(psi[i]), "psi_tabulated: values must be positive and finite");
    if (i > 0) require(p[i] > p[i - 1], "psi_tabulated: p must be strictly increasing");
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::log(psi[i]);
  const double a = std::max(1.0, p.front()), b = p.back();
  auto eval = boost::math::interpolators::pchip<std::vector<double>>(std::move(p), std::move(y));
  return Psi(a, b, eval, PsiKind::tabulated_grid, "tabulated");
}

Psi psi_product(const Psi& x, const Psi& y) {
  const double a = std::max(x.a(), y.a()), b = std::min(x.b(), y.b());
  require(b > a, "psi_product: supports do not overlap");
  return Psi(a, b, [x, y](double p) { return x.log_at(p) + y.log_at(p); }, PsiKind::transformed,
             x.label() + "*" + y.label());
}

Psi psi_transform(const Psi& psi, const Transform& t) {
  const double a = psi.a(), b = psi.b();
  std::ostringstream os;
  switch (t.rule) {
    case TransformRule::conjugate_index: {
      require(a == 1.0 && b >= 2.0, "conjugate-index needs supp psi to contain (1,2]");
      const double lo = std::isfinite(b) ? b / (b - 1.0) : 1.0;
      os << "conj[" << psi.label() << "]";
      return Psi(lo, kInf, [psi](double p) { return psi.log_at(p / (p - 1.0)); }, PsiKind::transformed, os.str());
    }
    case TransformRule::mult_s: {
      const double s = t.s;
      require(s > 1.0, "mult-s needs s > 1");
      const double lo = std::max(1.0, a * s / (s + a));
      const double hi = std::isfinite(b) ? std::min(s, b * s / (s + b)) : s;
      require(hi > lo, "mult-s: transformed support is empty");
      os << "mult" << s << "[" << psi.label() << "]";
      return Psi(lo, hi, [psi, s](double p) { return psi.log_at(p * s / (s - p)); }, PsiKind::transformed, os.str());
    }
    case TransformRule::conv_s: {
      const double s = t.s;
      require(s > 1.0, "conv-s needs s > 1");
      const double tt = s / (s - 1.0);
      require(tt > a, "conv-s: transformed support is empty");
      const double lo = std::max(1.0, a * tt / (tt - a));
      const double hi = (std::isfinite(b) && b < tt) ? b * tt / (tt - b) : kInf;
      require(hi > lo, "conv-s: transformed support is empty");
      os << "conv" << s << "[" << psi.label() << "]";
      return Psi(lo, hi, [psi, tt](double p) { return psi.log_at(p * tt / (p + tt)); }, PsiKind::transformed,
                 os.str());
    }
    case TransformRule::lambda_gamma: {
      require(t.lambda >= 0.0 && t.gamma >= 0.0, "lambda-gamma needs lambda, gamma >= 0");
      const double lam = t.lambda, gam = t.gamma;
      os << "lg(" << lam << "," << gam << ")[" << psi.label() << "]";
      return Psi(a, b,
                 [psi, lam, gam](double p) {
                   double v = psi.log_at(p);
                   if (lam + gam != 0.0) v += (lam + gam) * std::log(p);
                   if (gam != 0.0) v -= gam * std::log(p - 1.0);
                   return v;
                 },
                 PsiKind::transformed, os.str());
    }
  }
  throw PreconditionError("psi_transform: unknown rule");
}

EnvelopeConstants zeta_envelope_check(const ZetaParams& z, std::span<const double> p_grid) {
  require(!p_grid.empty(), "zeta_envelope_check: empty grid");
  EnvelopeConstants out{kInf, 0.0};
  for (double p : p_grid) {
    require(p > z.a && p < z.b, "zeta_envelope_check: grid point outside (a, b)");
    const double left = z.alpha * std::log(p - z.a);
    const double right = std::isfinite(z.b) ? z.beta * std::log(z.b - p) : z.beta * std::log(p);
    const double r = std::exp(log_zeta_value(z, p) - std::min(left, right));
    out.lo = std::min(out.lo, r);
    out.hi = std::max(out.hi, r);
  }
  return out;
}

std::vector<double> lower_ladder(double a, double b, double eps) {
  const double span = std::isfinite(b) ? b - a : std::max(1.0, a);
  std::vector<double> out;
  for (double off = 0.1; off >= eps * (1.0 - 1e-12); off *= 0.1) out.push_back(a + span * off);
  return out;
}

std::vector<double> upper_ladder(double a, double b, double eps, double p_ref) {
  std::vector<double> out;
  if (std::isfinite(b)) {
    for (double off = 0.1; off >= eps * (1.0 - 1e-12); off *= 0.1) out.push_back(b - (b - a) * off);
  } else {
    const double ref = p_ref > 0.0 ? p_ref : std::max(2.0 * a, a + 1.0);
    for (double k = 10.0; k <= 1.0 / eps * (1.0 + 1e-12); k *= 10.0) out.push_back(ref * k);
  }
  return out;
}

namespace {

EndpointProbe probe(const Psi& nu1, const Psi& nu2, const std::vector<double>& ladder) {
  EndpointProbe e;
  std::vector<double> l2, lr;
  for (double p : ladder) {
    lr.push_back(nu1.log_at(p) - nu2.log_at(p));
    e.ladder.emplace_back(p, std::exp(lr.back()));
    l2.push_back(nu2.log_at(p));
  }
  // nu2 blows up: increasing along the ladder by at least a decade overall.
  bool increasing = true;
  for (std::size_t i = 1; i < l2.size(); ++i) increasing = increasing && l2[i] > l2[i - 1];
  e.applicable = increasing && l2.back() - l2.front() >= kLn10;
  e.last_p = e.ladder.back().first;
  e.last_ratio = e.ladder.back().second;
  const std::size_t n = e.ladder.size();
  bool decreasing = n >= 3;
  // Compared in logs: fast decay underflows the ratios themselves.
  for (std::size_t i = n - 3; decreasing && i + 1 < n; ++i) decreasing = lr[i + 1] < lr[i];
  std::vector<double> seq;
  for (const auto& [p, r] : e.ladder) seq.push_back(r);
  const LimitEstimate lim = aitken_limit(seq);
  const double first = seq.front();
  e.vanishes = decreasing && (lr.back() <= lr.front() + std::log(0.01) || (lim.converged && std::abs(lim.value) <= 0.01 * first));
  return e;
}

}  // namespace

DominationReport psi_dominates(const Psi& nu1, const Psi& nu2, double eps) {
  require(nu1.a() == nu2.a() && nu1.b() == nu2.b(), "psi_dominates: supports differ");
  require(eps > 0.0 && eps < 0.1, "psi_dominates: eps must lie in (0, 0.1)");
  DominationReport rep;
  rep.lower = probe(nu1, nu2, lower_ladder(nu1.a(), nu1.b(), eps));
  rep.upper = probe(nu1, nu2, upper_ladder(nu1.a(), nu1.b(), eps));
  const bool any = rep.lower.applicable || rep.upper.applicable;
  rep.dominates = any && (!rep.lower.applicable || rep.lower.vanishes) && (!rep.upper.applicable || rep.upper.vanishes);
  return rep;
}

ConvexityReport plog_convexity_check(const Psi& psi, std::span<const double> p_grid) {
  require(p_grid.size() >= 5, "plog_convexity_check: need at least 5 points");
  for (std::size_t i = 1; i < p_grid.size(); ++i)
    require(p_grid[i] > p_grid[i - 1], "plog_convexity_check: grid must increase strictly");
  std::vector<double> g(p_grid.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    g[i] = p_grid[i] * psi.log_at(p_grid[i]);
    scale = std::max(scale, std::abs(g[i]));
  }
  const double tol = 1e-9 * (1.0 + scale);
  ConvexityReport rep;
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    // Second divided difference scaled back to a value-level violation.
    const double h0 = p_grid[i] - p_grid[i - 1], h1 = p_grid[i + 1] - p_grid[i];
    const double chord = (h1 * g[i - 1] + h0 * g[i + 1]) / (h0 + h1);
    const double viol = g[i] - chord;  // > 0 means the midpoint lies above the chord
    if (viol > tol) rep.convex = false;
    rep.max_violation = std::max(rep.max_violation, std::max(0.0, viol));
  }
  return rep;
}

}  // namespace gls
