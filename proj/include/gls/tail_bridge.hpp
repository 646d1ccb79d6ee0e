#pragma once
// Conversions between zeta-family membership and power-log tail bounds,
// the Chebyshev tail bound, and the two extremal constructions (atoms at
// exp(exp k) on a probability space; steps exp(-exp k) on the half-line).

#include <tuple>
#include <utility>
#include <vector>

#include "gls/gnorm.hpp"
#include "gls/psi.hpp"
#include "gls/tail.hpp"

namespace gls {

/// inf_p (norm * psi(p) / u)^p.
double chebyshev_tail_bound(double norm, const Psi& psi, double u);
double chebyshev_tail_bound(const GNormResult& norm, const Psi& psi, double u);

/// T(u) <= C1 |log u|^gamma u^-a on (0, 1/2) and, on [2, inf),
/// T(u) <= C2 (log u)^tau u^-b (finite b) or C2 exp(-C3 u^(1/beta)) (b = inf).
struct TailBoundSpec {
  double a = 1.0;
  double gamma = 0.0;
  double b = kInf;
  double tau = 0.0;         ///< finite b only
  double beta = 0.0;        ///< stretched-exponential power, b = inf only
  double C1 = 0.0, C2 = 0.0, C3 = 0.0;
  bool zero = false;        ///< T == 0 (norm 0)

  [[nodiscard]] bool stretched() const { return !std::isfinite(b); }
  /// log of the bound; on [1/2, 2) the value at u = 1/2 caps both branches.
  [[nodiscard]] double log_bound(double u) const;
  [[nodiscard]] Tail as_tail() const;
};

/// Constants are the smallest that make the bound dominate the Chebyshev bound
/// of a unit-scaled member, found on a log-u ladder. For b = inf the zeta
/// exponent beta < 0 becomes the stretched power |beta|.
TailBoundSpec membership_to_tail(double a, double b, double alpha, double beta, double norm);

struct MembershipResult {
  double a, b, alpha, beta;  ///< target zeta parameters
  Extended norm_bound;       ///< G-norm of the extremal tail allowed by the bound
};
MembershipResult tail_to_membership(const TailBoundSpec& spec);

/// Bounded-ratio evidence: ratio = |f|_p / shape(p) along a ladder.
struct RatioLadder {
  std::vector<std::pair<double, double>> points;  ///< (p, ratio)
  double lo = kNaN, hi = kNaN;
};

struct SaddlePointExample {
  double b, beta;
  int K;
  double log_C;                              ///< normalizing constant
  std::vector<double> log_masses;            ///< atom k = 1..K at value exp(exp k)
  double mass_total;                         ///< should be 1
  RatioLadder moment_ratio;                  ///< |f|_p (b-p)^beta, p -> b
  std::vector<std::pair<int, double>> dominance;  ///< (k0, W / a(k0)) at eps = gamma e^-k0
  /// (k, log mu{f >= x(k)}, log of C (log x(k))^(b beta) x(k)^-b)
  std::vector<std::tuple<int, double, double>> hits;
  /// (k, log of mu{f >= x(k)} / ((log x(k))^(b beta - 1/2) x(k)^-b)): grows with k
  std::vector<std::pair<int, double>> weaker_shape_ratio;
  Extended g_norm;                           ///< against psi(p) = (b-p)^-beta on (1, b)
};
SaddlePointExample saddle_point_example(double b, double beta, int K);
/// log |f|_p^p for the saddle-point atoms.
double saddle_point_log_moment(const SaddlePointExample& s, double p);

struct StepExample {
  double a, alpha;
  int K;
  std::vector<double> log_Q;                 ///< step lengths
  std::vector<double> log_S;                 ///< cumulative lengths
  RatioLadder moment_ratio;                  ///< |g|_p (p-a)^alpha, p -> a
  /// (k, log mu{g >= u(k)}, log of |log u(k)|^(a alpha) u(k)^-a)
  std::vector<std::tuple<int, double, double>> hits;
};
StepExample step_example(double a, double alpha, int K);
double step_example_log_moment(const StepExample& s, double p);

}  // namespace gls
