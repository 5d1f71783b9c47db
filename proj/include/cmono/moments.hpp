#ifndef CMONO_MOMENTS_HPP
#define CMONO_MOMENTS_HPP

// Discrete signed measures on [0, inf), their exponential moments, and the
// push-forward s = e^{-t} onto (0, 1] where exponential moments become power
// (Hausdorff) moments:
//
//   int e^{-nt} dmu(t) = int s^n dF_*mu(s),   F(t) = e^{-t}.
//
// Distinct discrete measures differ in some moment of order below their total
// atom count (Vandermonde), and a sequence is a Hausdorff moment sequence of a
// nonnegative measure iff all (-1)^{n-k} Delta^{n-k} c_k are nonnegative.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "cmono/errors.hpp"
#include "cmono/exact.hpp"

namespace cmono {

/// Where a measure lives: t in [0, inf) or s = e^{-t} in (0, 1].
enum class MeasureDomain { Time, Unit };

struct Atom {
  double location;
  double weight;
};

/// Finitely many atoms with strictly increasing locations and nonzero real
/// weights. Atoms at equal locations are merged; zero weights are dropped.
class DiscreteSignedMeasure {
 public:
  explicit DiscreteSignedMeasure(std::vector<Atom> atoms = {}, MeasureDomain domain = MeasureDomain::Time)
      : domain_(domain) {
    for (const auto& a : atoms) {
      if (!std::isfinite(a.location) || !std::isfinite(a.weight)) {
        throw DomainError("measure atoms must be finite");
      }
      if (domain == MeasureDomain::Time && !(a.location >= 0.0)) {
        throw DomainError("time-domain atoms must lie in [0, inf), got " + std::to_string(a.location));
      }
      if (domain == MeasureDomain::Unit && !(a.location > 0.0 && a.location <= 1.0)) {
        throw DomainError("unit-domain atoms must lie in (0, 1], got " + std::to_string(a.location));
      }
    }
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& x, const Atom& y) { return x.location < y.location; });
    for (const auto& a : atoms) {
      if (!atoms_.empty() && atoms_.back().location == a.location) {
        atoms_.back().weight += a.weight;
      } else {
        atoms_.push_back(a);
      }
    }
    std::erase_if(atoms_, [](const Atom& a) { return a.weight == 0.0; });
  }

  [[nodiscard]] std::span<const Atom> atoms() const noexcept { return atoms_; }
  [[nodiscard]] std::size_t size() const noexcept { return atoms_.size(); }
  [[nodiscard]] bool empty() const noexcept { return atoms_.empty(); }
  [[nodiscard]] MeasureDomain domain() const noexcept { return domain_; }

  /// |mu|([0, inf)) = sum |w_i|.
  [[nodiscard]] double total_variation() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += std::abs(a.weight);
    return s;
  }

  [[nodiscard]] double total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.weight;
    return s;
  }

  /// mu([a, b]).
  [[nodiscard]] double mass_in(double a, double b) const {
    double s = 0.0;
    for (const auto& atom : atoms_) {
      if (atom.location >= a && atom.location <= b) s += atom.weight;
    }
    return s;
  }

  friend bool operator==(const DiscreteSignedMeasure& x, const DiscreteSignedMeasure& y) {
    if (x.domain_ != y.domain_ || x.atoms_.size() != y.atoms_.size()) return false;
    for (std::size_t i = 0; i < x.atoms_.size(); ++i) {
      if (x.atoms_[i].location != y.atoms_[i].location || x.atoms_[i].weight != y.atoms_[i].weight) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<Atom> atoms_;
  MeasureDomain domain_;
};

enum class MomentDomain { ExponentialT, HausdorffS };

/// c_0..c_N with an absolute rounding bound per entry (zero when exact).
struct MomentSequence {
  std::vector<double> values;
  std::vector<double> abs_error;
  MomentDomain domain_tag = MomentDomain::ExponentialT;

  [[nodiscard]] int max_order() const { return static_cast<int>(values.size()) - 1; }
  [[nodiscard]] double error_at(std::size_t n) const { return n < abs_error.size() ? abs_error[n] : 0.0; }

  static MomentSequence exact(std::vector<double> values, MomentDomain tag = MomentDomain::HausdorffS) {
    return {std::move(values), {}, tag};
  }
};

/// F_*mu for F(t) = e^{-t}: (t, w) -> (e^{-t}, w).
inline DiscreteSignedMeasure pushforward(const DiscreteSignedMeasure& mu) {
  if (mu.domain() != MeasureDomain::Time) throw UsageError("pushforward: measure must live on [0, inf)");
  std::vector<Atom> out;
  out.reserve(mu.size());
  for (const auto& a : mu.atoms()) out.push_back({std::exp(-a.location), a.weight});
  return DiscreteSignedMeasure{std::move(out), MeasureDomain::Unit};
}

namespace detail {

inline void check_order(int n) {
  if (n < 0) throw UsageError("moment order must be nonnegative");
}

// sum_i w_i s_i^n with s_i^n = pow(s_i, n), plus a rounding bound.
inline MomentSequence power_sums(const DiscreteSignedMeasure& mu_s, int max_order, MomentDomain tag) {
  check_order(max_order);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double atoms = static_cast<double>(mu_s.size());
  MomentSequence c{std::vector<double>(max_order + 1), std::vector<double>(max_order + 1), tag};
  for (int n = 0; n <= max_order; ++n) {
    double sum = 0.0;
    double abs_sum = 0.0;
    for (const auto& a : mu_s.atoms()) {
      const double term = a.weight * std::pow(a.location, n);
      sum += term;
      abs_sum += std::abs(term);
    }
    c.values[n] = sum;
    // pow of a rounded location (n ulp), the product, and the sum.
    c.abs_error[n] = (atoms + n + 3.0) * eps * abs_sum;
  }
  return c;
}

}  // namespace detail

/// Power moments sum_i w_i s_i^n of a measure on (0, 1].
inline MomentSequence power_moments(const DiscreteSignedMeasure& mu_s, int max_order) {
  if (mu_s.domain() != MeasureDomain::Unit) throw UsageError("power_moments: measure must live on (0, 1]");
  return detail::power_sums(mu_s, max_order, MomentDomain::HausdorffS);
}

/// c_n = int e^{-nt} dmu(t), n = 0..max_order, evaluated through the
/// push-forward so that c_n equals the power moments of F_*mu bit for bit.
inline MomentSequence exp_moments(const DiscreteSignedMeasure& mu, int max_order) {
  if (mu.domain() != MeasureDomain::Time) throw UsageError("exp_moments: measure must live on [0, inf)");
  return detail::power_sums(pushforward(mu), max_order, MomentDomain::ExponentialT);
}

/// Moments in whichever domain the measure lives in.
inline MomentSequence moments_of(const DiscreteSignedMeasure& mu, int max_order) {
  return mu.domain() == MeasureDomain::Time ? exp_moments(mu, max_order) : power_moments(mu, max_order);
}

/// Smallest n <= max_order with |c_n(mu) - c_n(nu)| > 1e-12 (M_mu + M_nu).
/// max_order must be at least the total atom count, which suffices to
/// separate distinct measures.
inline std::optional<int> first_differing_moment(const DiscreteSignedMeasure& mu, const DiscreteSignedMeasure& nu,
                                                 int max_order) {
  if (mu.domain() != nu.domain()) throw UsageError("first_differing_moment: measures live in different domains");
  if (max_order < static_cast<int>(mu.size() + nu.size())) {
    throw UsageError("first_differing_moment: order bound " + std::to_string(max_order) +
                     " is below the total atom count " + std::to_string(mu.size() + nu.size()));
  }
  const auto cm = moments_of(mu, max_order);
  const auto cn = moments_of(nu, max_order);
  const double tol = 1e-12 * (mu.total_variation() + nu.total_variation());
  for (int n = 0; n <= max_order; ++n) {
    if (std::abs(cm.values[n] - cn.values[n]) > tol) return n;
  }
  return std::nullopt;
}

namespace detail {

inline void check_difference_indices(const MomentSequence& c, int n, int k) {
  if (k < 0 || k > n || n > c.max_order() || n > kMaxBinomialOrder) {
    throw UsageError("hausdorff difference indices out of range (n=" + std::to_string(n) +
                     ", k=" + std::to_string(k) + ", N=" + std::to_string(c.max_order()) + ")");
  }
}

inline DyadicSum exact_difference(const MomentSequence& c, int n, int k) {
  DyadicSum sum;
  const int r = n - k;
  for (int j = 0; j <= r; ++j) {
    const auto b = static_cast<std::int64_t>(binomial(r, j));
    sum.add(j % 2 == 0 ? b : -b, c.values[k + j]);
  }
  return sum;
}

}  // namespace detail

/// (-1)^{n-k} Delta^{n-k} c_k = sum_j (-1)^j C(n-k, j) c_{k+j}, summed exactly
/// and rounded once. For Hausdorff moments this is int s^k (1-s)^{n-k} dmu.
inline double hausdorff_difference(const MomentSequence& c, int n, int k) {
  detail::check_difference_indices(c, n, k);
  return detail::exact_difference(c, n, k).to_double();
}

struct MonotonicityWitness {
  int n = 0;
  int k = 0;
  double value = 0.0;
  double threshold = 0.0;
};

struct TotalMonotonicity {
  bool holds = true;
  std::optional<MonotonicityWitness> witness;  // first violation, n then k ascending
};

/// Checks (-1)^{n-k} Delta^{n-k} c_k >= -(1e-12 |c_0| + propagated input
/// error) for all 0 <= k <= n <= max_order.
inline TotalMonotonicity is_totally_monotone(const MomentSequence& c, int max_order) {
  if (max_order < 0 || max_order > c.max_order()) {
    throw UsageError("is_totally_monotone: order bound exceeds the sequence length");
  }
  const double base = c.values.empty() ? 0.0 : 1e-12 * std::abs(c.values[0]);
  for (int n = 0; n <= max_order; ++n) {
    for (int k = 0; k <= n; ++k) {
      const double value = hausdorff_difference(c, n, k);
      double propagated = 0.0;
      for (int j = 0; j <= n - k; ++j) {
        propagated += static_cast<double>(binomial(n - k, j)) * c.error_at(k + j);
      }
      const double threshold = base + propagated;
      if (value < -threshold) return {false, MonotonicityWitness{n, k, value, threshold}};
    }
  }
  return {true, std::nullopt};
}

/// Bernstein-type reconstruction of F_*mu((0, x]) from c_0..c_n:
///   sum_{k <= n x} C(n, k) (-1)^{n-k} Delta^{n-k} c_k.
/// The whole sum is exact before the final rounding, so x = 1 returns c_0.
inline double reconstruct_cdf(const MomentSequence& c, int n, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("reconstruct_cdf: x must lie in [0, 1]");
  detail::check_difference_indices(c, n, 0);
  const auto upper = static_cast<int>(std::floor(static_cast<double>(n) * x));
  DyadicSum total;
  for (int k = 0; k <= std::min(upper, n); ++k) {
    total.add(DyadicSum::BigInt(binomial(n, k)), detail::exact_difference(c, n, k));
  }
  return total.to_double();
}

/// The piecewise-linear bump: 0 outside [a - delta, b + delta], 1 on [a, b],
/// linear on the two ramps.
class IndicatorProfile {
 public:
  IndicatorProfile(double a, double b, double delta) : a_(a), b_(b), delta_(delta) {
    if (!(a > 0.0 && a <= b && b <= 1.0)) throw DomainError("indicator profile needs 0 < a <= b <= 1");
    if (!(delta > 0.0 && a - delta > 0.0)) throw DomainError("indicator profile needs delta > 0 and a - delta > 0");
  }

  [[nodiscard]] double a() const noexcept { return a_; }
  [[nodiscard]] double b() const noexcept { return b_; }
  [[nodiscard]] double delta() const noexcept { return delta_; }

  [[nodiscard]] double operator()(double s) const {
    if (s >= a_ && s <= b_) return 1.0;  // plateau first: exact at the endpoints
    if (s < a_ - delta_ || s > b_ + delta_) return 0.0;
    return s < a_ ? (s - (a_ - delta_)) / delta_ : (b_ + delta_ - s) / delta_;
  }

 private:
  double a_;
  double b_;
  double delta_;
};

/// sum_i w_i I_delta(s_i) for a measure on (0, 1].
inline double integrate_indicator(const DiscreteSignedMeasure& mu_s, const IndicatorProfile& profile) {
  if (mu_s.domain() != MeasureDomain::Unit) throw UsageError("integrate_indicator: measure must live on (0, 1]");
  double sum = 0.0;
  for (const auto& a : mu_s.atoms()) sum += a.weight * profile(a.location);
  return sum;
}

}  // namespace cmono

#endif  // CMONO_MOMENTS_HPP
