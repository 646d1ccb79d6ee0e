#pragma once
// Tail functions T(u) = mu{|f| > u} and the L_p engine built on them.

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "gls/common.hpp"

namespace gls {

enum class TailKind { closed_form, piecewise_step, truncated_numeric };
const char* to_string(TailKind k);

class TailImpl;

/// Immutable tail function. All evaluation is in log space: log_at(t) is
/// log T(e^t) and equals -inf where T vanishes.
class Tail {
 public:
  /// Closed form given as t -> log T(e^t).
  struct Closed {
    std::function<double(double)> log_tail;
    double total_mass = kInf;
    double log_sup = kInf;                ///< log ess sup |f|; T = 0 above it
    std::vector<double> log_breaks;       ///< kinks of log_tail in t
  };
  static Tail closed(Closed c);
  /// |f| takes value values[i] on a set of measure masses[i].
  static Tail step(std::vector<double> values, std::vector<double> masses);
  static Tail indicator(double delta);
  static Tail zero();
  /// Tail of a sum of functions with disjoint supports.
  static Tail disjoint_sum(const Tail& x, const Tail& y);

  [[nodiscard]] TailKind kind() const;
  [[nodiscard]] double log_at(double t) const;
  double operator()(double u) const;
  [[nodiscard]] double total_mass() const;
  [[nodiscard]] double log_sup() const;
  [[nodiscard]] std::vector<double> log_breaks() const;
  [[nodiscard]] bool is_zero() const;

  /// log |f|_p; +inf when the moment diverges, -inf for the zero function.
  [[nodiscard]] double log_lp_norm(double p) const;
  [[nodiscard]] Extended lp_norm(double p) const;

  /// Tail of c * f.
  [[nodiscard]] Tail scaled(double c) const;
  /// Tail of f * I(|f| > N) (inclusive: I(|f| >= N)).
  [[nodiscard]] Tail truncated(double N, bool inclusive = false) const;
  /// Tail of f * I(|f| < N) (inclusive: I(|f| <= N)).
  [[nodiscard]] Tail below(double N, bool inclusive = false) const;

  /// Step representation (values descending), nullptr for other kinds.
  [[nodiscard]] const std::vector<double>* step_values() const;
  [[nodiscard]] const std::vector<double>* step_masses() const;

  explicit Tail(std::shared_ptr<const TailImpl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const TailImpl> impl_;
};

/// Z(p, p1, p2): the Lyapunov (log-convexity) interpolation bound on |f|_p.
double lyapunov_interpolate(double norm_p1, double norm_p2, double p1, double p2, double p);

/// Tail of f * I(|f| > N).
inline Tail tail_truncate(const Tail& t, double N) { return t.truncated(N); }

}  // namespace gls
