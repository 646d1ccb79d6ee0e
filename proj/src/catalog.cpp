#include "gls/catalog.hpp"

#include <cmath>

namespace gls {

const char* to_string(Domain d) {
  switch (d) {
    case Domain::real_line: return "real-line";
    case Domain::interval_pi: return "interval[-pi,pi]";
    case Domain::half_line: return "half-line";
    case Domain::probability_space: return "probability-space";
    case Domain::unit_interval: return "unit-interval";
  }
  return "unknown";
}

double Profile::log_value(double y) const {
  double v = s * y;
  if (c != 0.0) v += c * std::log(y);
  if (C != 0.0) v += C * std::pow(y, kappa);
  return v;
}

namespace {

// log v at y = e^z, exact for y below the double range.
double log_value_z(const Profile& pr, double z) {
  double v = pr.s * std::exp(z);
  if (pr.c != 0.0) v += pr.c * z;
  if (pr.C != 0.0) v += pr.C * std::exp(pr.kappa * z);
  return v;
}

// Monotone solve of g(e^z) = L for z in (zlo, zhi) by safeguarded Newton.
double solve_z(const Profile& pr, double L, double zlo, double zhi) {
  auto g = [&](double z) { return log_value_z(pr, z) - L; };
  auto dg = [&](double z) {
    const double y = std::exp(z);
    return pr.s * y + pr.c + (pr.C != 0.0 ? pr.C * pr.kappa * std::pow(y, pr.kappa) : 0.0);
  };
  double glo = g(zlo);
  double z = 0.5 * (zlo + zhi);
  for (int it = 0; it < 200; ++it) {
    const double gz = g(z);
    if (gz == 0.0) return z;
    if ((gz < 0.0) == (glo < 0.0)) {
      zlo = z;
      glo = gz;
    } else {
      zhi = z;
    }
    const double d = dg(z);
    double zn = z - gz / d;
    if (!(zn > zlo && zn < zhi) || !std::isfinite(zn)) zn = 0.5 * (zlo + zhi);
    if (std::abs(zn - z) <= 1e-15 * (1.0 + std::abs(z)) || zhi - zlo <= 1e-15 * (1.0 + std::abs(z))) return zn;
    z = zn;
  }
  return z;
}

// Expand a bracket from z0 in direction dir until g changes sign.
double bracket(const Profile& pr, double L, double z0, double dir) {
  const double sign0 = log_value_z(pr, z0) - L;
  double step = 1.0;
  double z = z0;
  for (int it = 0; it < 200; ++it) {
    z = z0 + dir * step;
    const double v = log_value_z(pr, z);
    const double gz = std::isfinite(v) ? v - L : -sign0;
    if ((gz < 0.0) != (sign0 < 0.0)) return z;
    step *= 2.0;
  }
  throw NumericalError("profile: root bracket not found");
}

// Measure of the level set {y in (e^zlo, e^zhi)} in x. Bounds are taken in
// z = log y so that y below the double range keeps full relative accuracy.
double log_interval_measure(const Profile& pr, double zlo, double zhi) {
  const double lw = std::log(2.0 * pr.scale);
  if (!(zhi > zlo)) return -kInf;
  const double ylo = std::exp(zlo);
  if (zhi == kInf) return pr.side == Profile::Side::outer ? kInf : lw - ylo;
  const double yhi = std::exp(zhi);
  // log d with d = yhi - ylo.
  const double log_d = zhi + std::log1p(-std::exp(zlo - zhi));
  const double d = std::exp(log_d);
  if (pr.side == Profile::Side::outer) {
    // log(e^yhi - e^ylo)
    if (d < 1e-8) return lw + ylo + log_d + 0.5 * d;
    return lw + (d < 1.0 ? ylo + std::log(std::expm1(d)) : yhi + std::log1p(-std::exp(-d)));
  }
  // log(e^-ylo - e^-yhi)
  if (d < 1e-8) return lw - ylo + log_d - 0.5 * d;
  return lw - ylo + std::log(-std::expm1(-d));
}

struct Shape {
  enum Kind { increasing, decreasing, peak, valley } kind;
  double zstar = kNaN;  // turning point in z = log y
  double g0 = kNaN;     // limit of log v as y -> 0+
};

Shape classify(const Profile& pr) {
  // The derivative s + c/y + C kappa y^(kappa-1) is monotone for the supported
  // parameter combinations (c and C are never both non-zero).
  require(pr.c == 0.0 || pr.C == 0.0, "profile: c and C cannot both be non-zero");
  Shape sh{};
  sh.g0 = pr.c > 0.0 ? -kInf : (pr.c < 0.0 ? kInf : 0.0);
  const double d0 = pr.c != 0.0 ? pr.c : (pr.C > 0.0 ? 1.0 : (pr.C < 0.0 ? -1.0 : pr.s));
  const double dinf = pr.s != 0.0 ? pr.s : (pr.c != 0.0 ? pr.c : pr.C);
  if (d0 > 0.0 && dinf > 0.0) sh.kind = Shape::increasing;
  else if (d0 <= 0.0 && dinf <= 0.0) sh.kind = Shape::decreasing;
  else sh.kind = d0 > 0.0 ? Shape::peak : Shape::valley;
  if (sh.kind == Shape::peak || sh.kind == Shape::valley) {
    if (pr.c != 0.0) {
      sh.zstar = std::log(-pr.c / pr.s);
    } else {
      // s + C kappa y^(kappa-1) = 0
      sh.zstar = std::log(-pr.s / (pr.C * pr.kappa)) / (pr.kappa - 1.0);
    }
  }
  return sh;
}

}  // namespace

double Profile::log_measure_above(double L) const {
  const Shape sh = classify(*this);
  // Fast paths with explicit inverses.
  if (c == 0.0 && C == 0.0) {
    require(s != 0.0, "profile: constant profile");
    const double y = L / s;
    if (s > 0.0) return log_interval_measure(*this, y > 0.0 ? std::log(y) : -kInf, kInf);
    return y > 0.0 ? log_interval_measure(*this, -kInf, std::log(y)) : -kInf;
  }
  if (s == 0.0 && C == 0.0) {
    const double z = L / c;
    if (c > 0.0) return log_interval_measure(*this, z, kInf);
    return log_interval_measure(*this, -kInf, z);
  }
  switch (sh.kind) {
    case Shape::increasing: {
      if (L < sh.g0) return log_interval_measure(*this, -kInf, kInf);
      const double z0 = 0.0;
      const double g = log_value(1.0) - L;
      const double zb = bracket(*this, L, z0, g < 0.0 ? 1.0 : -1.0);
      const double z = solve_z(*this, L, std::min(z0, zb), std::max(z0, zb));
      return log_interval_measure(*this, z, kInf);
    }
    case Shape::decreasing: {
      if (L >= sh.g0) return -kInf;
      const double g = log_value(1.0) - L;
      const double zb = bracket(*this, L, 0.0, g > 0.0 ? 1.0 : -1.0);
      const double z = solve_z(*this, L, std::min(0.0, zb), std::max(0.0, zb));
      return log_interval_measure(*this, -kInf, z);
    }
    case Shape::peak: {
      const double gmax = log_value(std::exp(sh.zstar));
      if (L >= gmax) return -kInf;
      double zlo = -kInf;
      if (L >= sh.g0) {
        const double zb = bracket(*this, L, sh.zstar, -1.0);
        zlo = solve_z(*this, L, zb, sh.zstar);
      }
      const double zb = bracket(*this, L, sh.zstar, 1.0);
      return log_interval_measure(*this, zlo, solve_z(*this, L, sh.zstar, zb));
    }
    case Shape::valley: {
      const double gmin = log_value(std::exp(sh.zstar));
      if (L < gmin) return log_interval_measure(*this, -kInf, kInf);
      double first = -kInf;
      if (L < sh.g0) {
        const double zb = bracket(*this, L, sh.zstar, -1.0);
        first = log_interval_measure(*this, -kInf, solve_z(*this, L, zb, sh.zstar));
      }
      const double zb = bracket(*this, L, sh.zstar, 1.0);
      const double second = log_interval_measure(*this, solve_z(*this, L, sh.zstar, zb), kInf);
      return log_add(first, second);
    }
  }
  return kNaN;
}

Tail Profile::tail() const {
  const Shape sh = classify(*this);
  Tail::Closed c;
  const Profile self = *this;
  c.log_tail = [self](double t) { return self.log_measure_above(t); };
  const bool bounded = sh.kind == Shape::decreasing || sh.kind == Shape::peak;
  if (sh.kind == Shape::peak) c.log_sup = log_value(std::exp(sh.zstar));
  else if (sh.kind == Shape::decreasing) c.log_sup = sh.g0;
  else c.log_sup = kInf;
  if (std::isfinite(sh.g0) && !(bounded && sh.kind == Shape::decreasing)) c.log_breaks.push_back(sh.g0);
  c.total_mass = side == Side::inner ? 2.0 * scale : kInf;
  if (side == Side::outer && bounded && sh.kind == Shape::decreasing) c.total_mass = kInf;
  return Tail::closed(std::move(c));
}

namespace {

double log_gamma_moment(double w, double gpow, double base_log, double p) {
  // log of w * Gamma(p*g + 1) * base^(-(p*g + 1)), returned as log-norm.
  const double k = p * gpow + 1.0;
  return (std::log(w) + std::lgamma(k) - k * base_log) / p;
}

CatalogFunction make_f_a_gamma(double a, double gamma) {
  require(a >= 1.0, "f_a_gamma: a must be >= 1");
  require(gamma > -1.0 / a, "f_a_gamma: gamma must exceed -1/a");
  CatalogFunction f;
  f.spec = Call{"f_a_gamma", {{"a", a}, {"gamma", gamma}}};
  f.tail = Profile{Profile::Side::outer, -1.0 / a, gamma, 0.0, 0.5, 1.0}.tail();
  f.log_moment = [a, gamma](double p) { return log_gamma_moment(2.0, gamma, std::log(p / a - 1.0), p); };
  f.p_lo = a;
  f.p_hi = gamma < 0.0 ? -1.0 / gamma : kInf;
  f.domain = Domain::real_line;
  return f;
}

CatalogFunction make_g_b_nu(double b, double nu) {
  require(b >= 1.0 && std::isfinite(b), "g_b_nu: b must be finite and >= 1");
  require(nu > -1.0 / b, "g_b_nu: nu must exceed -1/b");
  CatalogFunction f;
  f.spec = Call{"g_b_nu", {{"b", b}, {"nu", nu}}};
  f.tail = Profile{Profile::Side::inner, 1.0 / b, nu, 0.0, 0.5, 1.0}.tail();
  f.log_moment = [b, nu](double p) { return log_gamma_moment(2.0, nu, std::log1p(-p / b), p); };
  f.p_lo = 1.0;
  f.p_hi = b;
  f.domain = Domain::real_line;
  return f;
}

CatalogFunction make_h_m(double m) {
  require(m > 0.0, "h_m: m must be positive");
  CatalogFunction f;
  f.spec = Call{"h_m", {{"m", m}}};
  f.tail = Profile{Profile::Side::inner, 0.0, 1.0 / m, 0.0, 0.5, 1.0}.tail();
  f.log_moment = [m](double p) { return log_gamma_moment(2.0, 1.0 / m, 0.0, p); };
  f.domain = Domain::real_line;
  return f;
}

CatalogFunction make_log_singular(double d) {
  require(d > 0.0, "log_singular: d must be positive");
  CatalogFunction f;
  f.spec = Call{"log_singular", {{"d", d}}};
  f.tail = Profile{Profile::Side::inner, 0.0, d, 0.0, 0.5, kPi}.tail();
  f.log_moment = [d](double p) { return log_gamma_moment(2.0 * kPi, d, 0.0, p); };
  f.domain = Domain::interval_pi;
  return f;
}

CatalogFunction combine(Call spec, const CatalogFunction& x, const CatalogFunction& y) {
  CatalogFunction f;
  f.spec = std::move(spec);
  f.tail = Tail::disjoint_sum(*x.tail, *y.tail);
  if (x.log_moment && y.log_moment) {
    f.log_moment = [lx = x.log_moment, ly = y.log_moment](double p) { return log_add(p * lx(p), p * ly(p)) / p; };
  }
  f.p_lo = std::max(x.p_lo, y.p_lo);
  f.p_hi = std::min(x.p_hi, y.p_hi);
  f.domain = Domain::real_line;
  return f;
}

}  // namespace

CatalogFunction catalog_make(const Call& call) {
  const std::string& n = call.name;
  if (n == "f_a_gamma") {
    call.check_keys({"a", "gamma"});
    return make_f_a_gamma(call.require_arg("a"), call.get("gamma", 0.0));
  }
  if (n == "g_b_nu") {
    call.check_keys({"b", "nu"});
    return make_g_b_nu(call.require_arg("b"), call.get("nu", 0.0));
  }
  if (n == "h_m") {
    call.check_keys({"m"});
    return make_h_m(call.require_arg("m"));
  }
  if (n == "log_singular") {
    call.check_keys({"d"});
    return make_log_singular(call.get("d", 1.0));
  }
  if (n == "f_ab_gamma_nu" || n == "f_ab") {
    if (n == "f_ab") call.check_keys({"a", "b"});
    else call.check_keys({"a", "b", "gamma", "nu"});
    const double a = call.require_arg("a"), b = call.require_arg("b");
    require(b > a, n + ": need a < b");
    const double g = call.get("gamma", 0.0), v = call.get("nu", 0.0);
    Call spec = n == "f_ab" ? Call{n, {{"a", a}, {"b", b}}} : Call{n, {{"a", a}, {"b", b}, {"gamma", g}, {"nu", v}}};
    return combine(std::move(spec), make_f_a_gamma(a, g), make_g_b_nu(b, v));
  }
  if (n == "g_a_gamma_m") {
    call.check_keys({"a", "gamma", "m"});
    const double a = call.require_arg("a"), g = call.get("gamma", 0.0), m = call.require_arg("m");
    return combine(Call{n, {{"a", a}, {"gamma", g}, {"m", m}}}, make_f_a_gamma(a, g), make_h_m(m));
  }
  if (n == "f_ab_alpha_beta") {
    call.check_keys({"a", "b", "alpha", "beta", "c1", "c2"});
    const double a = call.require_arg("a"), b = call.require_arg("b");
    const double al = call.require_arg("alpha"), be = call.require_arg("beta");
    const double c1 = call.get("c1", 1.0), c2 = call.get("c2", 1.0);
    require(a >= 1.0 && b > a && std::isfinite(b), n + ": need 1 <= a < b < inf");
    require(al > 0.0 && al < 1.0 && be > 0.0 && be < 1.0, n + ": alpha, beta must lie in (0,1)");
    require(c1 > 0.0 && c2 > 0.0, n + ": c1, c2 must be positive");
    CatalogFunction inner, outer;
    inner.tail = Profile{Profile::Side::inner, 1.0 / b, 0.0, c1, 1.0 - al, 1.0}.tail();
    outer.tail = Profile{Profile::Side::outer, -1.0 / a, 0.0, c2, 1.0 - be, 1.0}.tail();
    inner.p_hi = b;
    outer.p_lo = a;
    return combine(Call{n, {{"a", a}, {"b", b}, {"alpha", al}, {"beta", be}, {"c1", c1}, {"c2", c2}}}, inner, outer);
  }
  if (n == "indicator") {
    call.check_keys({"delta"});
    const double d = call.get("delta", 1.0);
    CatalogFunction f;
    f.spec = Call{n, {{"delta", d}}};
    f.tail = Tail::indicator(d);
    f.log_moment = [d](double p) { return std::log(d) / p; };
    f.domain = Domain::real_line;
    return f;
  }
  throw PreconditionError("catalog: unknown family '" + n + "'");
}

CatalogFunction catalog_make(const std::string& text) { return catalog_make(parse_call(text)); }

}  // namespace gls
