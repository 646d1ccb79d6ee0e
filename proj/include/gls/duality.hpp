#pragma once
// Orlicz envelope of a moment weight, its Young conjugate, and numerical
// witnesses for non-equivalence with Orlicz / Marcinkiewicz spaces and for
// the adjoint-space necessary condition.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gls/catalog.hpp"
#include "gls/gnorm.hpp"
#include "gls/psi.hpp"
#include "gls/tail.hpp"

namespace gls {

enum class Verdict { diverges, converges, inconclusive };
const char* to_string(Verdict v);

/// Verdict on a non-decreasing sequence of partial values (one per decade).
/// Diverges: the last three increments are positive and each at least 0.7x
/// the previous. Converges: the last three shrink by at least half and the
/// last is below 1e-3 of the total. Otherwise inconclusive.
Verdict ladder_verdict(const std::vector<double>& partial);

class OrliczEnvelope {
 public:
  explicit OrliczEnvelope(Psi psi);

  [[nodiscard]] const Psi& source() const { return psi_; }
  /// N(u) = sup_p |u|^p psi(p)^-p.
  [[nodiscard]] double n(double u) const;
  [[nodiscard]] double log_n(double u) const;
  /// Phi(u) = sup_z (|u| z - N(z)).
  [[nodiscard]] double conjugate(double u) const;
  /// Maximizer z of |u| z - N(z).
  [[nodiscard]] double conjugate_argmax(double u) const;

  struct Table {
    std::vector<double> u, n, conjugate;
  };
  [[nodiscard]] Table tabulate(const std::vector<double>& u_grid) const;

 private:
  Psi psi_;
};

OrliczEnvelope orlicz_envelope(const Psi& psi);

/// Convexity check on a grid: max relative chord violation.
double convexity_defect(const std::vector<double>& x, const std::vector<double>& y);

/// The Orlicz function N implied by the fundamental function,
/// N^(-1)(1/delta) = 1/phi(G(psi), delta), tabulated in log-log form.
class FundamentalOrlicz {
 public:
  explicit FundamentalOrlicz(const Psi& psi, double log_delta_span = 400.0);
  /// log phi(G(psi), e^s).
  [[nodiscard]] double log_phi(double s) const;
  /// log delta with 1/phi(delta) = w, given log w.
  [[nodiscard]] double log_delta_for(double log_w) const;
  [[nodiscard]] double log_n(double log_w) const { return -log_delta_for(log_w); }

 private:
  std::vector<double> s_, lphi_;
  std::function<double(double)> interp_;  ///< monotone cubic through (s_, lphi_)
};

/// Integral of N(eps |g|) over the level band {1/R < |g| <= R}, per decade.
struct ModularLadder {
  double eps = 1.0;
  std::vector<std::pair<double, double>> partial;  ///< (R, integral over the band)
  Verdict verdict = Verdict::inconclusive;
};

struct NonEquivReport {
  bool matches = false;   ///< |g|_p / psi(p) stays within a bounded band
  double log_match_spread = kNaN;
  std::vector<ModularLadder> ladders;
  Verdict verdict = Verdict::inconclusive;  ///< diverges only if every eps diverges
};

/// (2.1)-type witness. `strict` rejects g whose moments do not track psi.
NonEquivReport orlicz_nonequiv_witness(const Psi& psi, const Tail& g, const std::vector<double>& eps_ladder,
                                       const std::vector<double>& R_ladder, bool strict = true);

/// Band integral of N(eps |g|) for an arbitrary log N, using a level grid of
/// `per_decade` cells per decade of |g|.
ModularLadder modular_ladder(const std::function<double(double)>& log_n, const Tail& g, double eps,
                             const std::vector<double>& R_ladder, int per_decade = 64);

/// The generating function f_{a,b;gamma,nu} whose moments track zeta(a,b;alpha,beta).
CatalogFunction generating_function(double a, double b, double alpha, double beta);

struct MarcinkiewiczReport {
  Tail tail;              ///< T(x) = (1/phi)^(-1)(x)
  GNormResult norm;       ///< sup_p |T|_p / psi(p)
  std::vector<std::pair<double, Extended>> ladder;  ///< (p, ratio) toward the endpoints
  Verdict verdict = Verdict::inconclusive;          ///< diverges = unbounded ratio
};
MarcinkiewiczReport marcinkiewicz_nonequiv_witness(const Psi& psi);

struct AdjointReport {
  Extended max_ratio;
  double z_at_max = kNaN;
  std::vector<std::pair<double, Extended>> ladder;  ///< (z, ratio)
  Verdict verdict = Verdict::inconclusive;          ///< diverges = unbounded growth
};
/// max_z (int_z^inf T(g,u) du) / phi(G(psi), T(g,z)).
AdjointReport adjoint_condition_ratio(const Tail& g, const Psi& psi, const std::vector<double>& z_grid);

/// Tail u^-1 (log u)^-k for u >= 2, constant below 2.
Tail log_heavy_tail(double k);

}  // namespace gls
