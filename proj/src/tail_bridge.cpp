#include "gls/tail_bridge.hpp"

#include <algorithm>

namespace gls {

namespace {

// log inf_p (N psi(p) / u)^p, with the infimum taken as minus a supremum.
double log_chebyshev(double log_norm, const Psi& psi, double log_u) {
  const SupResult s =
      sup_search([&](double p) { return -p * (log_norm + psi.log_at(p) - log_u); }, psi.a(), psi.b());
  return -s.log_value;
}

// Largest value of f(t) over [lo, hi]: dense scan plus golden refinement.
double scan_max(const std::function<double(double)>& f, double lo, double hi, int n = 401) {
  const std::vector<double> ts = linspace(lo, hi, static_cast<std::size_t>(n));
  std::size_t ib = 0;
  std::vector<double> v(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    v[i] = f(ts[i]);
    if (v[i] > v[ib]) ib = i;
  }
  const double a = ts[ib == 0 ? 0 : ib - 1], b = ts[std::min(ib + 1, ts.size() - 1)];
  return std::max(v[ib], golden_max(f, a, b, 1e-12).fx);
}

}  // namespace

double chebyshev_tail_bound(double norm, const Psi& psi, double u) {
  require(u > 0.0, "chebyshev_tail_bound: u must be positive");
  require(norm >= 0.0 && std::isfinite(norm), "chebyshev_tail_bound: norm must be finite");
  if (norm == 0.0) return 0.0;
  return std::exp(log_chebyshev(std::log(norm), psi, std::log(u)));
}

double chebyshev_tail_bound(const GNormResult& norm, const Psi& psi, double u) {
  require(norm.value.is_finite(), "chebyshev_tail_bound: norm must be finite");
  return chebyshev_tail_bound(norm.value.value, psi, u);
}

namespace {

double log_small(const TailBoundSpec& s, double t) {
  return std::log(s.C1) + (s.gamma == 0.0 ? 0.0 : s.gamma * std::log(-t)) - s.a * t;
}

double log_large(const TailBoundSpec& s, double t) {
  if (s.stretched()) return std::log(s.C2) - s.C3 * std::exp(t / s.beta);
  return std::log(s.C2) + (s.tau == 0.0 ? 0.0 : s.tau * std::log(t)) - s.b * t;
}

double log_bound_t(const TailBoundSpec& s, double t) {
  if (s.zero) return -kInf;
  if (t < -kLn2) return log_small(s, t);
  const double cap = log_small(s, -kLn2);
  if (s.stretched()) return std::min(cap, log_large(s, t));
  if (t < kLn2) return cap;
  return std::min(cap, log_large(s, t));
}

}  // namespace

double TailBoundSpec::log_bound(double u) const {
  require(u > 0.0, "tail bound: u must be positive");
  return log_bound_t(*this, std::log(u));
}

Tail TailBoundSpec::as_tail() const {
  if (zero) return Tail::zero();
  const TailBoundSpec s = *this;
  Tail::Closed c;
  c.log_tail = [s](double t) { return log_bound_t(s, t); };
  c.total_mass = kInf;
  c.log_sup = kInf;
  c.log_breaks = stretched() ? std::vector<double>{-kLn2} : std::vector<double>{-kLn2, kLn2};
  return Tail::closed(std::move(c));
}

TailBoundSpec membership_to_tail(double a, double b, double alpha, double beta, double norm) {
  const Psi psi = zeta_make(a, b, alpha, beta);
  require(norm >= 0.0 && std::isfinite(norm), "membership_to_tail: norm must be finite and >= 0");
  TailBoundSpec s;
  s.a = a;
  s.b = b;
  s.gamma = a * alpha;
  if (std::isfinite(b)) s.tau = b * beta;
  else s.beta = -beta;
  if (norm == 0.0) {
    s.zero = true;
    return s;
  }
  const double ln = std::log(norm);
  // Unit constants first; the shapes are then divided out on each side.
  s.C1 = s.C2 = 1.0;
  if (s.stretched()) s.C3 = s.beta / (kE * std::pow(norm, 1.0 / s.beta));
  auto small = [&](double t) { return log_chebyshev(ln, psi, t) - log_small(s, t); };
  auto large = [&](double t) { return log_chebyshev(ln, psi, t) - log_large(s, t); };
  s.C1 = std::exp(scan_max(small, -600.0, -kLn2));
  if (s.stretched()) {
    // Past the crossover the Chebyshev optimum equals the stretched shape
    // exactly, so the ratio tends to 1; beyond u^(1/beta) = e^20 the
    // cancellation in the log ratio outweighs the signal.
    s.C2 = std::max(1.0, std::exp(scan_max(large, -kLn2, std::min(600.0, 20.0 * s.beta))));
  } else {
    s.C2 = std::exp(scan_max(large, kLn2, 600.0));
  }
  return s;
}

MembershipResult tail_to_membership(const TailBoundSpec& spec) {
  require(spec.a >= 1.0 && spec.b > spec.a, "tail_to_membership: need 1 <= a < b");
  require(spec.gamma >= 0.0 && spec.tau >= 0.0, "tail_to_membership: log-powers must be >= 0");
  MembershipResult r{spec.a, spec.b, spec.gamma + 1.0, spec.tau + 1.0, Extended::finite(0.0)};
  if (spec.stretched()) {
    require(spec.beta > 0.0, "tail_to_membership: stretched power must be positive");
    r.beta = -spec.beta;
  }
  if (spec.zero) return r;
  const Psi psi = zeta_make(r.a, r.b, r.alpha, r.beta);
  r.norm_bound = g_norm(spec.as_tail(), psi).value;
  return r;
}

namespace {

RatioLadder make_ladder(std::vector<std::pair<double, double>> pts) {
  RatioLadder l;
  l.points = std::move(pts);
  l.lo = kInf;
  l.hi = -kInf;
  for (const auto& pr : l.points) {
    l.lo = std::min(l.lo, pr.second);
    l.hi = std::max(l.hi, pr.second);
  }
  return l;
}

}  // namespace

double saddle_point_log_moment(const SaddlePointExample& s, double p) {
  std::vector<double> terms(s.log_masses.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = p * std::exp(static_cast<double>(i + 1)) + s.log_masses[i];
  return log_sum_exp(terms) / p;
}

SaddlePointExample saddle_point_example(double b, double beta, int K) {
  require(b > 1.0 && beta > 0.0, "saddle_point_example: need b > 1 and beta > 0");
  require(K >= 20, "saddle_point_example: need at least 20 terms");
  require(K <= 700, "saddle_point_example: exp(exp K) leaves the log-space range");
  SaddlePointExample s{b, beta, K, 0.0, {}, 0.0, {}, {}, {}, {}, Extended::finite(0.0)};
  const double g = beta * b;
  std::vector<double> raw;
  for (int k = 1; k <= K; ++k) raw.push_back(g * k - b * std::exp(static_cast<double>(k)));
  const double lsum = log_sum_exp(raw);
  if (!(raw.back() < lsum - 40.0))
    throw NumericalError("saddle_point_example: normalizing series not converged at K terms");
  s.log_C = -lsum;
  for (double r : raw) s.log_masses.push_back(r + s.log_C);
  s.mass_total = std::exp(log_sum_exp(s.log_masses));

  // |f|_p (b-p)^beta as p -> b, staying where the peak term k0 is well inside K.
  const double eps_min = std::max(1e-8, g * std::exp(-(K - 8.0)));
  std::vector<std::pair<double, double>> pts;
  for (double e : geomspace((b - 1.0) / 2.0, eps_min, 30)) {
    const double p = b - e;
    pts.emplace_back(p, std::exp(saddle_point_log_moment(s, p) + beta * std::log(e)));
  }
  s.moment_ratio = make_ladder(std::move(pts));

  for (int k0 = 1; k0 <= std::min(20, K - 10); ++k0) {
    const double eps = g * std::exp(-static_cast<double>(k0));
    std::vector<double> la;
    for (int k = 1; k <= K; ++k) la.push_back(k * g - eps * std::exp(static_cast<double>(k)));
    s.dominance.emplace_back(k0, std::exp(log_sum_exp(la) - la[static_cast<std::size_t>(k0 - 1)]));
  }

  // mu{f >= x(k)} sums the atoms from k on; rel[k] is its log excess over
  // atom k, kept separate so the shape ratio avoids cancelling b exp(k).
  std::vector<double> rel(static_cast<std::size_t>(K), 0.0);
  for (int k = K - 1; k >= 1; --k) {
    const double step = g - b * std::exp(static_cast<double>(k)) * (kE - 1.0);
    rel[static_cast<std::size_t>(k - 1)] = log_add(0.0, rel[static_cast<std::size_t>(k)] + step);
  }
  for (int k = 1; k <= K; ++k) {
    const double r = rel[static_cast<std::size_t>(k - 1)];
    const double lm = s.log_masses[static_cast<std::size_t>(k - 1)];
    s.hits.emplace_back(k, lm + r, lm);
    s.weaker_shape_ratio.emplace_back(k, r + s.log_C + 0.5 * k);
  }

  const Psi psi = psi_closed("(b-p)^-beta", 1.0, b, [b, beta](double p) { return -beta * std::log(b - p); });
  s.g_norm = g_norm([&s](double p) { return saddle_point_log_moment(s, p); }, psi).value;
  return s;
}

double step_example_log_moment(const StepExample& s, double p) {
  std::vector<double> terms(s.log_Q.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = s.log_Q[i] - p * std::exp(static_cast<double>(i + 1));
  return log_sum_exp(terms) / p;
}

StepExample step_example(double a, double alpha, int K) {
  require(a >= 1.0 && alpha > 0.0, "step_example: need a >= 1 and alpha > 0");
  require(K >= 1, "step_example: need at least one step");
  require(K <= 700, "step_example: exp(exp K) leaves the log-space range");
  StepExample s{a, alpha, K, {}, {}, {}, {}};
  double acc = -kInf;
  for (int k = 1; k <= K; ++k) {
    const double lq = a * alpha * k + a * std::exp(static_cast<double>(k));
    s.log_Q.push_back(lq);
    acc = log_add(acc, lq);
    s.log_S.push_back(acc);
  }
  std::vector<std::pair<double, double>> pts;
  for (double e : geomspace(0.5, 0.01, 25)) {
    const double p = a + e;
    pts.emplace_back(p, std::exp(step_example_log_moment(s, p) + alpha * std::log(e)));
  }
  s.moment_ratio = make_ladder(std::move(pts));
  // g >= u(k) exactly on (0, S(k)]; the comparator is Q(k) itself.
  for (int k = 1; k <= K; ++k)
    s.hits.emplace_back(k, s.log_S[static_cast<std::size_t>(k - 1)], s.log_Q[static_cast<std::size_t>(k - 1)]);
  return s;
}

}  // namespace gls
