#pragma once
// Supremum of a log-ratio r(p) over an open exponent interval (a, b):
// endpoint-clustered grid, golden-section refinement, endpoint ladders.

#include <utility>
#include <vector>

#include "gls/common.hpp"
#include "gls/quadrature.hpp"

namespace gls {

struct EndpointLimit {
  Extended limit;
  bool converged = false;
  bool unbounded = false;
  std::vector<std::pair<double, Extended>> ladder;  ///< (p, ratio)
};

struct SupOptions {
  int grid_points = 257;
  double eps = 1e-6;        ///< closest relative approach to an endpoint
  double upper_ref = 0.0;   ///< first rung of the p -> infinity ladder (0 = default)
  int refine_cells = 3;
};

struct SupResult {
  Extended value;
  double log_value = -kInf;  ///< log of value, usable beyond the double range
  double p_star = kNaN;
  bool endpoint_sup = false;
  EndpointLimit lower, upper;
  std::vector<std::pair<double, Extended>> profile;  ///< sampled ratio curve
  int evaluations = 0;
};

/// Points clustered geometrically toward a and toward b (or spread
/// geometrically toward infinity).
std::vector<double> endpoint_grid(double a, double b, int n, double eps = 1e-6);

/// `log_ratio` may return +inf (ratio infinite) or -inf (ratio zero).
SupResult sup_search(const RealFn& log_ratio, double a, double b, const SupOptions& opt = {});

Extended extended_exp(double log_value);

}  // namespace gls
