#pragma once
// Moment weights psi(p) on an open exponent interval (a, b), the two-branch
// power family zeta(a,b;alpha,beta;.), index transforms, and structural checks.
//
// Convention: the G-norm divides by psi, so the zeta family enters as
// psi = 1 / zeta.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gls/common.hpp"

namespace gls {

enum class PsiKind { zeta_family, catalog_moment, tabulated_grid, transformed, closed_form };
const char* to_string(PsiKind k);

struct ZetaParams {
  double a = 1.0;
  double b = kInf;
  double alpha = 0.0;
  double beta = 0.0;
  double h = kNaN;  ///< crossover root
};

/// zeta(p) itself (not its reciprocal).
double zeta_value(const ZetaParams& z, double p);
double log_zeta_value(const ZetaParams& z, double p);

class Psi {
 public:
  using LogFn = std::function<double(double)>;

  Psi(double a, double b, LogFn log_eval, PsiKind kind, std::string label);

  [[nodiscard]] double a() const { return a_; }
  [[nodiscard]] double b() const { return b_; }
  [[nodiscard]] bool finite_b() const { return std::isfinite(b_); }
  [[nodiscard]] bool contains(double p) const { return p > a_ && p < b_; }
  [[nodiscard]] PsiKind kind() const { return kind_; }
  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] const std::optional<ZetaParams>& zeta() const { return zeta_; }

  /// log psi(p); throws PreconditionError outside (a, b).
  [[nodiscard]] double log_at(double p) const;
  double operator()(double p) const { return std::exp(log_at(p)); }

  Psi with_zeta(ZetaParams z) const;

 private:
  double a_, b_;
  LogFn log_eval_;
  PsiKind kind_;
  std::string label_;
  std::optional<ZetaParams> zeta_;
};

/// psi = 1/zeta(a,b;alpha,beta;.) with the crossover root h solved by bisection.
Psi zeta_make(double a, double b, double alpha, double beta);
ZetaParams zeta_params(double a, double b, double alpha, double beta);

Psi psi_constant(double a, double b, double c = 1.0);
Psi psi_closed(std::string label, double a, double b, Psi::LogFn log_eval);
/// psi(p) = |f|_p given as log-moments.
Psi psi_from_moments(std::string label, double a, double b, Psi::LogFn log_norm);
/// Monotone piecewise-cubic interpolation of log psi over p.
Psi psi_tabulated(std::vector<double> p, std::vector<double> psi);
Psi psi_product(const Psi& x, const Psi& y);
/// "zeta(a=..,b=..,alpha=..,beta=..)", "constant(a=..,b=..,c=..)",
/// "log_model()" ((2 pi Gamma(p+1))^{1/p} on (1, inf)),
/// "power_moments(b=..)" ((1 - p/b)^{-1/p} on (1, b), the moments of x^{-1/b} on [0,1]).
Psi psi_parse(const std::string& text);

enum class TransformRule { conjugate_index, mult_s, conv_s, lambda_gamma };
struct Transform {
  TransformRule rule = TransformRule::lambda_gamma;
  double s = 2.0;
  double lambda = 0.0;
  double gamma = 0.0;
};
Psi psi_transform(const Psi& psi, const Transform& t);

struct EnvelopeConstants {
  double lo = kNaN;
  double hi = kNaN;
};
/// (inf, sup) over the grid of zeta(p) / min{(p-a)^alpha, (b-p)^beta or p^beta}.
EnvelopeConstants zeta_envelope_check(const ZetaParams& z, std::span<const double> p_grid);

struct EndpointProbe {
  bool applicable = false;  ///< nu2 blows up at this endpoint
  bool vanishes = false;
  double last_p = kNaN;
  double last_ratio = kNaN;
  std::vector<std::pair<double, double>> ladder;  ///< (p, nu1/nu2)
};
struct DominationReport {
  bool dominates = false;
  EndpointProbe lower;
  EndpointProbe upper;
};
/// nu1 << nu2: nu1/nu2 -> 0 at every endpoint where nu2 blows up.
DominationReport psi_dominates(const Psi& nu1, const Psi& nu2, double eps = 1e-6);

struct ConvexityReport {
  bool convex = true;
  double max_violation = 0.0;
};
ConvexityReport plog_convexity_check(const Psi& psi, std::span<const double> p_grid);

/// Geometric endpoint-approach ladder: offsets {1e-1..1e-k}(b-a) for finite b,
/// p_ref * 10^k toward infinity.
std::vector<double> lower_ladder(double a, double b, double eps = 1e-6);
std::vector<double> upper_ladder(double a, double b, double eps = 1e-6, double p_ref = 0.0);

}  // namespace gls
