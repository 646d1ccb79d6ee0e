#pragma once
// One-dimensional quadrature: adaptive Gauss-Kronrod (plain and log-space),
// Gauss-Legendre rules, and integration of exp(F(t)) over the real line.

#include <functional>
#include <span>
#include <vector>

#include "gls/common.hpp"

namespace gls {

using RealFn = std::function<double(double)>;

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

/// Adaptive GK15 on a finite interval.
QuadResult integrate(const RealFn& f, double lo, double hi, double rel_tol = 1e-10, double abs_tol = 0.0,
                     int max_segments = 2000);

/// log of the integral of exp(F) over [lo, hi]; F may return -inf.
struct LogQuadResult {
  double log_value = -kInf;
  double log_error = -kInf;
};
LogQuadResult integrate_log(const RealFn& F, double lo, double hi, double rel_tol, int max_segments = 400);

/// Integral of exp(F(t)) over (t_lo, t_hi), either end possibly infinite.
/// Panels grow outward from the maximum of F; `breaks` are points where F is
/// not smooth. `divergent` is set when the panel contributions fail to decay.
struct LineIntegral {
  double log_value = -kInf;
  bool divergent = false;
  int panels = 0;
};
LineIntegral integrate_exp_line(const RealFn& F, double t_lo, double t_hi, std::span<const double> breaks,
                                double rel_tol);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};
const Rule& gauss_legendre(int n);

}  // namespace gls
