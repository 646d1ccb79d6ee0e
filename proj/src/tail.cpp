#include "gls/tail.hpp"

#include <algorithm>
#include <numeric>

#include "gls/kernels.hpp"
#include "gls/quadrature.hpp"

namespace gls {

const char* to_string(TailKind k) {
  switch (k) {
    case TailKind::closed_form: return "closed-form";
    case TailKind::piecewise_step: return "piecewise-step";
    case TailKind::truncated_numeric: return "truncated-numeric";
  }
  return "unknown";
}

class TailImpl {
 public:
  virtual ~TailImpl() = default;
  virtual TailKind kind() const = 0;
  virtual double log_at(double t) const = 0;
  virtual double total_mass() const = 0;
  virtual double log_sup() const = 0;
  virtual std::vector<double> log_breaks() const = 0;
  virtual double log_lp_norm(double p) const;
};

namespace {

// Moment quadrature: |f|_p^p = p * int exp(p t + log T(e^t)) dt.
double quadrature_log_norm(const TailImpl& t, double p) {
  const double ls = t.log_sup();
  if (ls == -kInf) return -kInf;
  auto F = [&t, p](double x) { return p * x + t.log_at(x); };
  // The norm needs relative accuracy tol; the p-th power tolerates p * tol.
  const double tol = std::min(1e-3, quadrature_rel_tol() * std::max(1.0, p));
  const std::vector<double> br = t.log_breaks();
  const LineIntegral I = integrate_exp_line(F, -kInf, std::isfinite(ls) ? ls : kInf, br, tol);
  if (I.divergent || I.log_value == kInf) return kInf;
  if (I.log_value == -kInf) return -kInf;
  return (std::log(p) + I.log_value) / p;
}

}  // namespace

double TailImpl::log_lp_norm(double p) const { return quadrature_log_norm(*this, p); }

namespace {

class ClosedTail final : public TailImpl {
 public:
  explicit ClosedTail(Tail::Closed c) : c_(std::move(c)) {}
  TailKind kind() const override { return TailKind::closed_form; }
  double log_at(double t) const override { return t >= c_.log_sup ? -kInf : c_.log_tail(t); }
  double total_mass() const override { return c_.total_mass; }
  double log_sup() const override { return c_.log_sup; }
  std::vector<double> log_breaks() const override { return c_.log_breaks; }

 private:
  Tail::Closed c_;
};

class StepTail final : public TailImpl {
 public:
  StepTail(std::vector<double> values, std::vector<double> masses) {
    require(values.size() == masses.size(), "step tail: length mismatch");
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
      return std::abs(values[i]) > std::abs(values[j]);
    });
    for (std::size_t i : idx) {
      require(masses[i] >= 0.0 && std::isfinite(masses[i]), "step tail: masses must be finite and >= 0");
      const double v = std::abs(values[i]);
      require(std::isfinite(v), "step tail: values must be finite");
      if (v == 0.0 || masses[i] == 0.0) continue;
      if (!v_.empty() && v_.back() == v) {
        m_.back() += masses[i];
      } else {
        v_.push_back(v);
        m_.push_back(masses[i]);
      }
    }
    cum_.resize(m_.size());
    double s = 0.0;
    for (std::size_t i = 0; i < m_.size(); ++i) cum_[i] = (s += m_[i]);
  }
  TailKind kind() const override { return TailKind::piecewise_step; }
  double log_at(double t) const override {
    // Number of cells with value > e^t (values are descending).
    const double u = std::exp(t);
    const auto it = std::partition_point(v_.begin(), v_.end(), [u](double v) { return v > u; });
    const auto k = static_cast<std::size_t>(it - v_.begin());
    return k == 0 ? -kInf : std::log(cum_[k - 1]);
  }
  double total_mass() const override { return cum_.empty() ? 0.0 : cum_.back(); }
  double log_sup() const override { return v_.empty() ? -kInf : std::log(v_.front()); }
  std::vector<double> log_breaks() const override {
    std::vector<double> b;
    for (double v : v_) b.push_back(std::log(v));
    return b;
  }
  double log_lp_norm(double p) const override {
    if (v_.empty()) return -kInf;
    require(p >= 1.0, "lp_norm: p must be >= 1");
    const double s = kernels::pow_sum(v_, m_, p, 1.0 / v_.front());
    return std::log(v_.front()) + std::log(s) / p;
  }
  const std::vector<double>& values() const { return v_; }
  const std::vector<double>& masses() const { return m_; }

 private:
  std::vector<double> v_, m_, cum_;
};

class ScaledTail final : public TailImpl {
 public:
  ScaledTail(std::shared_ptr<const TailImpl> in, double c) : in_(std::move(in)), lc_(std::log(c)) {}
  TailKind kind() const override { return in_->kind(); }
  double log_at(double t) const override { return in_->log_at(t - lc_); }
  double total_mass() const override { return in_->total_mass(); }
  double log_sup() const override { return in_->log_sup() + lc_; }
  std::vector<double> log_breaks() const override {
    auto b = in_->log_breaks();
    for (double& x : b) x += lc_;
    return b;
  }
  double log_lp_norm(double p) const override { return in_->log_lp_norm(p) + lc_; }

 private:
  std::shared_ptr<const TailImpl> in_;
  double lc_;
};

// f * I(|f| > N): T'(u) = T(max(u, N)).
class UpperPartTail final : public TailImpl {
 public:
  UpperPartTail(std::shared_ptr<const TailImpl> in, double N) : in_(std::move(in)), ln_(std::log(N)) {
    lt_n_ = in_->log_at(ln_);
  }
  TailKind kind() const override { return TailKind::truncated_numeric; }
  double log_at(double t) const override { return in_->log_at(std::max(t, ln_)); }
  double total_mass() const override { return std::exp(lt_n_); }
  double log_sup() const override { return lt_n_ == -kInf ? -kInf : in_->log_sup(); }
  std::vector<double> log_breaks() const override {
    std::vector<double> b{ln_};
    for (double x : in_->log_breaks())
      if (x > ln_) b.push_back(x);
    return b;
  }

 private:
  std::shared_ptr<const TailImpl> in_;
  double ln_, lt_n_;
};

// f * I(|f| <= N): T'(u) = T(u) - T(N) for u < N.
class LowerPartTail final : public TailImpl {
 public:
  LowerPartTail(std::shared_ptr<const TailImpl> in, double N) : in_(std::move(in)), ln_(std::log(N)) {
    lt_n_ = in_->log_at(ln_);
  }
  TailKind kind() const override { return TailKind::truncated_numeric; }
  double log_at(double t) const override {
    if (t >= ln_) return -kInf;
    const double l = in_->log_at(t);
    if (lt_n_ == -kInf) return l;
    if (l <= lt_n_) return -kInf;
    return l + std::log1p(-std::exp(lt_n_ - l));
  }
  double total_mass() const override {
    const double m = in_->total_mass();
    return std::isfinite(m) ? m - std::exp(lt_n_) : m;
  }
  double log_sup() const override { return std::min(in_->log_sup(), ln_); }
  std::vector<double> log_breaks() const override {
    std::vector<double> b{ln_};
    for (double x : in_->log_breaks())
      if (x < ln_) b.push_back(x);
    return b;
  }

 private:
  std::shared_ptr<const TailImpl> in_;
  double ln_, lt_n_;
};

class SumTail final : public TailImpl {
 public:
  SumTail(std::shared_ptr<const TailImpl> x, std::shared_ptr<const TailImpl> y) : x_(std::move(x)), y_(std::move(y)) {}
  TailKind kind() const override { return TailKind::closed_form; }
  double log_at(double t) const override { return log_add(x_->log_at(t), y_->log_at(t)); }
  double total_mass() const override { return x_->total_mass() + y_->total_mass(); }
  double log_sup() const override { return std::max(x_->log_sup(), y_->log_sup()); }
  std::vector<double> log_breaks() const override {
    auto b = x_->log_breaks();
    auto c = y_->log_breaks();
    b.insert(b.end(), c.begin(), c.end());
    for (double s : {x_->log_sup(), y_->log_sup()})
      if (std::isfinite(s)) b.push_back(s);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  }
  // Disjoint supports: the p-th powers add.
  double log_lp_norm(double p) const override {
    const double lx = x_->log_lp_norm(p), ly = y_->log_lp_norm(p);
    if (lx == kInf || ly == kInf) return kInf;
    return log_add(p * lx, p * ly) / p;
  }

 private:
  std::shared_ptr<const TailImpl> x_, y_;
};

}  // namespace

Tail Tail::closed(Closed c) {
  require(static_cast<bool>(c.log_tail), "closed tail: missing evaluator");
  return Tail(std::make_shared<ClosedTail>(std::move(c)));
}

Tail Tail::step(std::vector<double> values, std::vector<double> masses) {
  return Tail(std::make_shared<StepTail>(std::move(values), std::move(masses)));
}

Tail Tail::indicator(double delta) {
  require(delta > 0.0, "indicator: measure must be positive");
  return step({1.0}, {delta});
}

Tail Tail::zero() { return step({}, {}); }

Tail Tail::disjoint_sum(const Tail& x, const Tail& y) {
  if (x.kind() == TailKind::piecewise_step && y.kind() == TailKind::piecewise_step) {
    auto v = *x.step_values(), m = *x.step_masses();
    v.insert(v.end(), y.step_values()->begin(), y.step_values()->end());
    m.insert(m.end(), y.step_masses()->begin(), y.step_masses()->end());
    return step(std::move(v), std::move(m));
  }
  return Tail(std::make_shared<SumTail>(x.impl_, y.impl_));
}

TailKind Tail::kind() const { return impl_->kind(); }
double Tail::log_at(double t) const { return impl_->log_at(t); }
double Tail::operator()(double u) const {
  require(u > 0.0, "tail: u must be positive");
  return std::exp(impl_->log_at(std::log(u)));
}
double Tail::total_mass() const { return impl_->total_mass(); }
double Tail::log_sup() const { return impl_->log_sup(); }
std::vector<double> Tail::log_breaks() const { return impl_->log_breaks(); }
bool Tail::is_zero() const { return impl_->log_sup() == -kInf; }

double Tail::log_lp_norm(double p) const {
  require(p >= 1.0, "lp_norm: p must be >= 1");
  return impl_->log_lp_norm(p);
}

Extended Tail::lp_norm(double p) const {
  const double l = log_lp_norm(p);
  if (l == kInf || l > 709.0) return Extended::infinity();
  return Extended::finite(std::exp(l));
}

Tail Tail::scaled(double c) const {
  require(c >= 0.0 && std::isfinite(c), "tail scale: factor must be finite and >= 0");
  if (c == 0.0) return zero();
  if (const auto* s = dynamic_cast<const StepTail*>(impl_.get())) {
    auto v = s->values();
    for (double& x : v) x *= c;
    return step(std::move(v), s->masses());
  }
  return Tail(std::make_shared<ScaledTail>(impl_, c));
}

Tail Tail::truncated(double N, bool inclusive) const {
  require(N > 0.0, "truncation level must be positive");
  if (const auto* s = dynamic_cast<const StepTail*>(impl_.get())) {
    std::vector<double> v, m;
    for (std::size_t i = 0; i < s->values().size(); ++i) {
      const double x = s->values()[i];
      if (x > N || (inclusive && x == N)) {
        v.push_back(x);
        m.push_back(s->masses()[i]);
      }
    }
    return step(std::move(v), std::move(m));
  }
  return Tail(std::make_shared<UpperPartTail>(impl_, N));
}

Tail Tail::below(double N, bool inclusive) const {
  require(N > 0.0, "truncation level must be positive");
  if (const auto* s = dynamic_cast<const StepTail*>(impl_.get())) {
    std::vector<double> v, m;
    for (std::size_t i = 0; i < s->values().size(); ++i) {
      const double x = s->values()[i];
      if (x < N || (inclusive && x == N)) {
        v.push_back(x);
        m.push_back(s->masses()[i]);
      }
    }
    return step(std::move(v), std::move(m));
  }
  return Tail(std::make_shared<LowerPartTail>(impl_, N));
}

const std::vector<double>* Tail::step_values() const {
  const auto* s = dynamic_cast<const StepTail*>(impl_.get());
  return s != nullptr ? &s->values() : nullptr;
}

const std::vector<double>* Tail::step_masses() const {
  const auto* s = dynamic_cast<const StepTail*>(impl_.get());
  return s != nullptr ? &s->masses() : nullptr;
}

double lyapunov_interpolate(double norm_p1, double norm_p2, double p1, double p2, double p) {
  require(p1 >= 1.0 && p1 <= p && p <= p2 && std::isfinite(p2), "lyapunov: need 1 <= p1 <= p <= p2 < inf");
  require(std::isfinite(norm_p1) && std::isfinite(norm_p2) && norm_p1 >= 0.0 && norm_p2 >= 0.0,
          "lyapunov: norms must be finite and >= 0");
  if (p1 == p2) return norm_p1;
  // Exponents from 1/p = theta/p1 + (1-theta)/p2.
  const double theta = (1.0 / p - 1.0 / p2) / (1.0 / p1 - 1.0 / p2);
  if (norm_p1 == 0.0 || norm_p2 == 0.0) return 0.0;
  return std::exp(theta * std::log(norm_p1) + (1.0 - theta) * std::log(norm_p2));
}

}  // namespace gls
