#pragma once
// G(psi) norms, fundamental functions, distance to G0 and the direct-sum split.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gls/catalog.hpp"
#include "gls/psi.hpp"
#include "gls/sup_search.hpp"
#include "gls/tail.hpp"

namespace gls {

/// p -> log |f|_p (+inf when divergent, -inf for the zero function).
using LogMomentFn = std::function<double(double)>;

struct GNormResult {
  Extended value;
  double p_star = kNaN;
  bool endpoint_sup = false;
  EndpointLimit lower;  ///< |f|_p / psi(p) as p -> a+0
  EndpointLimit upper;  ///< |f|_p / psi(p) as p -> b-0
  std::vector<std::pair<double, Extended>> profile;
};

struct GNormOptions {
  int grid_points = 257;
  double upper_ref = 0.0;
  bool prefer_closed = true;  ///< use closed-form moments of catalog entries when present
};

GNormResult g_norm(const LogMomentFn& log_moment, const Psi& psi, const GNormOptions& opt = {});
GNormResult g_norm(const Tail& f, const Psi& psi, const GNormOptions& opt = {});
GNormResult g_norm(const CatalogFunction& f, const Psi& psi, const GNormOptions& opt = {});

/// log |f|_p for a catalog entry; +inf outside its finite-moment range.
double catalog_log_norm(const CatalogFunction& f, double p, bool prefer_closed = true);

enum class PhiBranch { phi1, phi2, phi3, crossover, grid_oracle };
const char* to_string(PhiBranch b);

struct FundamentalProfile {
  double delta = kNaN;
  double phi = kNaN;            ///< authoritative value (grid oracle)
  PhiBranch branch = PhiBranch::grid_oracle;
  double p_opt = kNaN;
  std::optional<double> closed_phi;  ///< closed-form branch value (zeta family)
  std::optional<PhiBranch> closed_branch;
  std::optional<double> closed_p;
  double rel_diff = 0.0;
  bool flagged = false;         ///< closed form and oracle disagree beyond 1e-6
};

FundamentalProfile fundamental_phi(const Psi& psi, double delta);
/// log phi(G(psi), e^log_delta) from the default-resolution sup engine.
double log_fundamental(const Psi& psi, double log_delta, int grid_points = 257);
/// Closed-form branch evaluation for the zeta family: (phi, branch, p_opt).
struct PhiClosed {
  double phi;
  PhiBranch branch;
  double p;
};
PhiClosed phi_closed_form(const ZetaParams& z, double delta);

/// lim_{N->inf} ||f I(|f| > N)||, N = 2^0 .. 2^30 with Aitken extrapolation.
struct G0Distance {
  double value = 0.0;
  bool converged = false;
  std::vector<std::pair<double, double>> ladder;  ///< (N, truncated norm)
};
G0Distance g0_distance(const Tail& f, const Psi& psi);

struct SplitResult {
  Tail f1;  ///< f I(|f| >= 1)
  Tail f2;  ///< f I(|f| < 1)
  Psi nu1;
  Psi nu2;
  double p0;
  double C;
};
SplitResult direct_sum_split(const Tail& f, const Psi& psi);

enum class Tri { yes, no, indeterminate };
const char* to_string(Tri t);

struct ConvergenceCheck {
  Tri verdict = Tri::indeterminate;
  double interior_sup = kNaN;
  double endpoint_sup = kNaN;
  std::string note;
};
/// Endpoint/interior split bound for ||f_n - f||G(psi) from |f_n - f|_p on a
/// grid and a uniform bound B >= sup_n ||f_n - f||G(psi2), psi2 << psi.
ConvergenceCheck convergence_bound_check(const std::vector<std::pair<double, double>>& fn_minus_f_norms,
                                         const Psi& psi, const Psi& psi2, std::optional<double> uniform_bound,
                                         double tol = 1e-3);

}  // namespace gls
