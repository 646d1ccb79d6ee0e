#pragma once
// Dyadic martingales f_n = E[f | F_n] on [0,1]: conditional expectations,
// Doob and upcrossing audits, convergence ladders in G(nu), and the bounded
// martingale that does not converge in G(psi).

#include <functional>
#include <string>
#include <vector>

#include "gls/gnorm.hpp"
#include "gls/psi.hpp"
#include "gls/tail.hpp"

namespace gls {

/// A function on [0,1] with Lebesgue measure.
struct UnitFunction {
  std::string label;
  std::function<double(double)> value;
  /// int_x^1 f; empty means cell means come from adaptive quadrature.
  std::function<double(double)> upper_primitive;
  Tail tail = Tail::zero();  ///< distribution of |f| on [0,1]
  /// f decreasing on (0,1) and unbounded at 0; the first dyadic cell is then
  /// handled through the tail instead of quadrature nodes.
  bool singular_at_zero = false;
  /// Non-empty: f is constant on steps.size() equal cells (a power of two).
  std::vector<double> steps;
};

/// "const(c=..)", "identity()", "half_indicator()", "power(r=..)" (x^r, r > 0),
/// "g_b_nu(b=..,nu=..)" (x^{-1/b} |log x|^nu, b > 1, nu >= 0),
/// "step(v0=..,v1=..,...)" (2^k values).
UnitFunction unit_function(const std::string& text);
UnitFunction unit_step(std::vector<double> values);

/// Cell means of f on the 2^n dyadic cells.
std::vector<double> condition_on_dyadic(const UnitFunction& f, int n);

struct DyadicMartingale {
  UnitFunction source;
  std::vector<std::vector<double>> levels;  ///< levels[n] has 2^n cell values

  [[nodiscard]] int depth() const { return static_cast<int>(levels.size()) - 1; }
  /// levels[n][k] == (levels[n+1][2k] + levels[n+1][2k+1]) / 2 bit for bit.
  [[nodiscard]] bool martingale_identity() const;
  [[nodiscard]] Tail level_tail(int n) const;
  /// Tail of max_n f_n over the stored levels.
  [[nodiscard]] Tail running_max_tail() const;
  /// p -> log |f_n - f|_p.
  [[nodiscard]] LogMomentFn difference_log_moment(int n) const;
};

/// Finest level from exact cell means, coarser levels by pairwise means.
DyadicMartingale dyadic_martingale(const UnitFunction& f, int depth = 12);

struct DoobRow {
  double p = kNaN;
  double max_norm = kNaN;   ///< |max_n f_n|_p
  double sup_level = kNaN;  ///< max_n |f_n|_p
  double ratio = kNaN;      ///< max_norm / sup_level
  double bound = kNaN;      ///< p / (p - 1)
  bool holds = false;       ///< ratio <= 1.001 bound
};
struct DoobAudit {
  std::vector<DoobRow> rows;
  bool holds = true;
};
DoobAudit doob_audit(const DyadicMartingale& m, const std::vector<double>& p_grid);

struct UpcrossingAudit {
  double c = kNaN, d = kNaN, p = kNaN;
  double mean_upcrossings = 0.0;  ///< E nu over paths indexed by finest cells
  double bound = kNaN;            ///< (d-c)^-p [2^{p-1} sup|f_n|_p^p + 2^{p-1} c^p + (d-c)^p]
  double doob_bound = kNaN;       ///< sup_n E (f_n - c)^+ / (d - c)
  bool holds = false;             ///< mean <= 1.001 bound
};
UpcrossingAudit upcrossing_audit(const DyadicMartingale& m, double c, double d, double p);

struct MartingaleConvergence {
  double sup_level_norm = kNaN;    ///< sup_n ||f_n||G(psi)
  double running_max_norm = kNaN;  ///< ||max_n f_n||G(psi_{0,1})
  std::vector<double> ladder;      ///< ||f_n - f||G(nu), n = 0..depth
  bool monotone_after_3 = false;
  double final_ratio = kNaN;       ///< last / first
  bool trend_to_zero = false;      ///< monotone_after_3 and final_ratio < 0.05
};
/// Requires psi_{0,1} << nu and sup_n ||f_n||G(psi) finite.
MartingaleConvergence martingale_convergence(const DyadicMartingale& m, const Psi& psi, const Psi& nu);

struct MartingaleDivergence {
  double g_norm_f = kNaN;
  double g0_distance = kNaN;
  std::vector<double> level_norms;  ///< ||f_n||G(psi)
  double sup_level_norm = kNaN;
  bool uniform_bound = false;       ///< sup_n ||f_n|| <= ||f|| (relative slack 1e-9)
  std::vector<double> gaps;         ///< ||f_n - f||G(psi)
  std::vector<double> defects;      ///< max(0, g0 - gap_n)
  double min_gap = kNaN;
};
/// f must lie in G(psi) with positive distance to G0(psi).
MartingaleDivergence martingale_divergence(const UnitFunction& f, const Psi& psi, int depth = 12);

/// |f_n - f|_p for n = 0..depth at one p.
std::vector<double> lp_convergence_ladder(const DyadicMartingale& m, double p);

}  // namespace gls
