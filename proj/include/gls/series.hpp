#pragma once
// Trigonometric series on [-pi, pi]: catalog entries, partial sums and
// tails, the conjugate (Hilbert) series, grid sampling and L_p norms.
//
// An infinite series is its stored terms n_min..n_max plus a continuous
// tail: the sum over n > n_max is replaced by the integral of smooth(t)
// against the same trigonometric factor from n_max + 1/2.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gls/common.hpp"

namespace gls {

enum class SeriesKind { sine, cosine };
const char* to_string(SeriesKind k);

struct FourierSeries {
  SeriesKind kind = SeriesKind::sine;
  std::function<double(long)> coef;      ///< c(n), n >= n_min
  std::function<double(double)> smooth;  ///< continuous c(t) for the tail; empty for trigonometric polynomials
  /// Optional closed form of int_A^inf smooth(t) trig(x t) dt, trig per `kind`.
  std::function<double(double x, double A, SeriesKind kind)> tail_integral;
  long n_min = 1;
  long n_max = 1L << 18;
  double constant = 0.0;
  /// Bound on sum_{n > N} |c(n) - smooth(n)|, the part the continuous tail drops.
  std::function<double(long N)> discrete_defect;
  std::string label;

  [[nodiscard]] bool finite() const { return !smooth; }
};

/// sum_{n>=2} n^-1 log^d n sin(nx).
FourierSeries series_f_d(double d, long n_max = 1L << 18);
/// sum_{n>=1} n^(d-1) sin(nx), 0 < d < 1.
FourierSeries series_g_d(double d, long n_max = 1L << 18);
/// Cosine series of log(pi/|x|): 1 + sum 2 Si(n pi) / (pi n) cos(nx).
FourierSeries series_log_model(long n_max = 1L << 18);
/// Finite series with c[k] the coefficient of harmonic k + 1.
FourierSeries series_trig_poly(SeriesKind kind, std::vector<double> c, double constant = 0.0);
/// "f_d(d=1)", "g_d(d=0.5)", "log_model()", optional key n_max.
FourierSeries series_parse(const std::string& text);

/// s_M: harmonics up to M (a trigonometric polynomial).
FourierSeries partial_sum(const FourierSeries& f, long M);
/// f - s_M: harmonics above M, no constant term.
FourierSeries series_tail(const FourierSeries& f, long M);
/// Conjugate series: sin -> cos, cos -> -sin, constant dropped.
FourierSeries hilbert_transform_series(const FourierSeries& f);

/// Stored terms and constant on x_j = 2 pi j / n, j = 0..n-1 (n a power of two > 2 n_max).
std::vector<double> series_sample(const FourierSeries& f, long n);
/// Pointwise value including the continuous tail.
double series_value(const FourierSeries& f, double x);

struct SeriesNorm {
  double p = kNaN;
  double value = kNaN;       ///< |f|_p on [-pi, pi]; +inf when the integral diverges
  double value_fine = kNaN;  ///< same on the doubled grid
  double rel_change = 0.0;
  long grid = 0;
  double near_cut = 0.0;     ///< below this |x| the integral runs in log x
  double tail_error = 0.0;   ///< pointwise error bound of the continuous tail
};
/// Trapezoid on the uniform grid for |x| >= near_cut, log-x quadrature
/// below it; the grid and the doubled grid must agree to 1e-4 relative.
std::vector<SeriesNorm> series_lp_norms(const FourierSeries& f, std::span<const double> ps, long grid_size = 1L << 12);
SeriesNorm series_lp_norm(const FourierSeries& f, double p, long grid_size = 1L << 12);

}  // namespace gls
