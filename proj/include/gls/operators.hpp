#pragma once
// Operator-induced weight maps, partial-sum growth audits, the half-line
// Fourier transform of f_{a,b}, Young's inequality on the circle, and the
// Fourier series that does not converge in G(psi).

#include <string>
#include <tuple>
#include <vector>

#include "gls/psi.hpp"
#include "gls/series.hpp"
#include "gls/tail.hpp"

namespace gls {

enum class OperatorKind {
  fourier_transform,  ///< psi -> psi(p / (p - 1))
  riesz_partial_sum,  ///< psi_{1,1}
  maximal_fourier,    ///< psi_{2,2}
  singular,           ///< psi_{lambda,gamma}
  convolution,        ///< psi^(s)
  multiplication,     ///< psi_(s)
};
const char* to_string(OperatorKind k);

struct OperatorMap {
  OperatorKind kind = OperatorKind::riesz_partial_sum;
  double lambda = 0.0, gamma = 0.0;  ///< singular
  double s = 2.0;                    ///< convolution / multiplication
};
/// "fourier-transform", "riesz-partial-sum", "maximal-fourier",
/// "singular(lambda=..,gamma=..)", "convolution(s=..)", "multiplication(s=..)".
OperatorMap operator_parse(const std::string& text);
std::string operator_name(const OperatorMap& map);

Psi operator_psi_image(const OperatorMap& map, const Psi& psi);
/// Zeta parameters equivalent to the psi_{lambda,gamma} image of zeta(a,b;alpha,beta).
ZetaParams operator_zeta_image(const ZetaParams& z, double lambda, double gamma);

struct RieszAudit {
  struct Row {
    double p;
    double norm_f;
    double max_ratio;   ///< max_M |s_M f|_p / |f|_p
    long argmax_M;
    double normalized;  ///< max_ratio / (p^2 / (p - 1))
  };
  std::vector<Row> rows;
  double max_normalized = 0.0;
  /// (M, p, |f - s_M f|_p); filled when requested.
  std::vector<std::tuple<long, double, double>> remainders;
};
RieszAudit riesz_growth_audit(const FourierSeries& f, const std::vector<double>& p_grid,
                              const std::vector<long>& M_grid, bool with_remainders = false);

/// F[f](t) = int e^{itx} f(x) dx for f_{a,b}(x) = |x|^-1/b on |x| < 1, |x|^-1/a beyond.
double fourier_transform_fab(double a, double b, double t);
/// int_R |F[f_{a,b}]|^2 dt (finite for a < 2 < b).
double fourier_fab_l2_squared(double a, double b);

struct HalfLineTransform {
  double a = kNaN, b = kNaN;
  double A = kNaN, B = kNaN;  ///< conjugate indices b/(b-1), a/(a-1) (B = inf when a = 1)
  std::vector<std::tuple<double, double, double>> samples;  ///< (t, F[f](t), f_{A,B}(t))
  double ratio_lo = kNaN, ratio_hi = kNaN;                  ///< band of F / f_{A,B} over compared t
  double t_compare_from = 0.0;                              ///< 1 when a = 1: F has a log singularity at 0
  double g_norm = kNaN;                                     ///< f_{a,b} in G(a,b;1/a,1/b)
  bool converged = true;
};
HalfLineTransform fourier_transform_halfline_example(double a, double b, const std::vector<double>& t_grid);

struct YoungCheck {
  double s = kNaN, r = kNaN, q = kNaN;  ///< q = r t / (r + t), t = s / (s - 1)
  double norm_f = kNaN, norm_g = kNaN;
  double lhs = kNaN;                    ///< |f * g|_r
  double rhs = kNaN;                    ///< |f|_s |g|_q
  bool holds = false;                   ///< lhs <= 1.01 rhs
};
/// Step tails laid out as decreasing rearrangements from 0 on the circle of
/// length 2 pi (g rotated by `shift`), convolved on `cells` grid cells.
YoungCheck circle_convolution_bound(const Tail& f, const Tail& g, double s, double r, double shift = 0.0,
                                    long cells = 1L << 14);

struct FourierGap {
  long M = 0;
  double gap = 0.0;           ///< sup_p |f - s_M f|_p / psi(p): lower bound on ||f - s_M f||
  double p_at = kNaN;
  double sup_partial = 0.0;   ///< max |s_M f| on the grid: s_M is bounded, hence in G0
};
std::vector<FourierGap> fourier_gaps(const FourierSeries& f, const Psi& psi, const std::vector<long>& M_grid,
                                     const std::vector<double>& p_ladder);

struct FourierDivergenceReport {
  double g0_distance = kNaN;
  double match_lo = kNaN, match_hi = kNaN;  ///< band of |f|_p / psi(p) over the ladder
  std::vector<FourierGap> gaps;
  double min_gap = kNaN;
  std::vector<double> p_ladder;
};
/// f(x) = log(pi/|x|) has |f|_p^p = 2 pi Gamma(p+1); f must lie in G(psi)
/// but not in G0(psi). Reports the gap of s_M f to f at each M against the
/// distance of f to G0.
FourierDivergenceReport fourier_divergence_demo(const Psi& psi, const std::vector<long>& M_grid,
                                                const std::vector<double>& p_ladder = {2, 4, 8, 16, 32, 64, 128});
/// psi(p) = (2 pi Gamma(p+1))^{1/p} on (1, inf).
Psi log_model_psi();

}  // namespace gls
