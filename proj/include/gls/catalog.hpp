#pragma once
// Named example functions with closed-form tails and, where available,
// closed-form moments.

#include <functional>
#include <optional>
#include <string>

#include "gls/grammar.hpp"
#include "gls/tail.hpp"

namespace gls {

enum class Domain { real_line, interval_pi, half_line, probability_space, unit_interval };
const char* to_string(Domain d);

/// log v(y) = s*y + c*log(y) + C*y^kappa on y > 0, with |x| = e^y (outer,
/// |x| >= 1) or |x| = e^-y (inner, |x| < 1), symmetric in x, measure
/// 2*scale*e^(+-y) dy. Used to build tails of the power-log families.
struct Profile {
  enum class Side { outer, inner };
  Side side = Side::inner;
  double s = 0.0;
  double c = 0.0;
  double C = 0.0;
  double kappa = 0.5;
  double scale = 1.0;

  [[nodiscard]] double log_value(double y) const;
  /// log mu{|f| > e^L}.
  [[nodiscard]] double log_measure_above(double L) const;
  [[nodiscard]] Tail tail() const;
};

struct CatalogFunction {
  Call spec;                                     ///< canonical name and parameters
  std::optional<Tail> tail;                      ///< absent for series-valued entries
  std::function<double(double)> log_moment;      ///< closed-form log |f|_p, empty when unknown
  double p_lo = 1.0;                             ///< moments finite on (p_lo, p_hi)
  double p_hi = kInf;
  Domain domain = Domain::real_line;

  [[nodiscard]] std::string name() const { return spec.str(); }
  [[nodiscard]] bool has_closed_moments() const { return static_cast<bool>(log_moment); }
};

CatalogFunction catalog_make(const Call& call);
CatalogFunction catalog_make(const std::string& text);

}  // namespace gls
