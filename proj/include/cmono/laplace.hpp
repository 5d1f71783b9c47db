#ifndef CMONO_LAPLACE_HPP
#define CMONO_LAPLACE_HPP

// Improper Laplace-type integrals
//
//   M_n(x) = int_0^inf t^n phi(t) e^{-xt} dt  =  (-1)^n f^{(n)}(x)
//
// split as a finite adaptive quadrature on [0, T] plus a certified bound on
// the tail over [T, inf).
//
// Tail envelopes. With g(t) = t/(1-e^{-t}) <= t+1 and
// S(m,t) <= I_0(2 sqrt(mt)) <= e^{2 sqrt(mt)}:
//   TrigammaMinusSinh: |phi| <= (t+1) e^{-t} + e^{2 sqrt(mt) - t}
//   SinhMinusTrigamma: |phi| <= e^{2 sqrt(mt)} + 1
//   UnitControl:       |phi| =  1
// Each envelope term times t^n e^{-xt} is exp(psi(t)) with psi concave, so
//   int_T^inf exp(psi) <= exp(psi(T)) / (-psi'(T))   whenever psi'(T) < 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "cmono/errors.hpp"
#include "cmono/quadrature.hpp"
#include "cmono/specfun.hpp"

namespace cmono {

inline constexpr int kMaxMomentOrder = 60;

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  double tail_bound = 0.0;
  std::size_t nodes_used = 0;
  double truncation_point = 0.0;
  bool converged = false;  // false: tolerance not met or tail not certifiable

  [[nodiscard]] double total_error() const { return abs_error_estimate + tail_bound; }
};

/// One concave log-envelope term: exp(p ln t + q ln(t+1) + b sqrt(t) - r t).
struct EnvelopeTerm {
  double p = 0.0;
  double q = 0.0;
  double b = 0.0;
  double r = 0.0;

  [[nodiscard]] double log_value(double t) const {
    return p * std::log(t) + q * std::log1p(t) + b * std::sqrt(t) - r * t;
  }
  [[nodiscard]] double log_slope(double t) const {
    return p / t + q / (t + 1.0) + 0.5 * b / std::sqrt(t) - r;
  }
  /// Upper bound on the integral over [t, inf); +inf when not certifiable at t.
  [[nodiscard]] double tail_from(double t) const {
    const double slope = log_slope(t);
    if (!(slope < 0.0)) return std::numeric_limits<double>::infinity();
    return std::exp(log_value(t)) / -slope;
  }
};

/// Envelope of t^n |phi(t)| e^{-xt}; x = 0 gives the envelope of |phi| itself.
inline std::vector<EnvelopeTerm> moment_envelope(const Kernel& k, int n, double x) {
  const double p = static_cast<double>(n);
  const double b = 2.0 * std::sqrt(k.m());
  switch (k.kind) {
    case KernelKind::TrigammaMinusSinh:
      return {{p, 1.0, 0.0, x + 1.0}, {p, 0.0, b, x + 1.0}};
    case KernelKind::SinhMinusTrigamma:
      return {{p, 0.0, b, x}, {p, 0.0, 0.0, x}};
    case KernelKind::UnitControl:
      return {{p, 0.0, 0.0, x}};
  }
  return {};
}

inline double envelope_tail(const std::vector<EnvelopeTerm>& terms, double t) {
  double total = 0.0;
  for (const auto& term : terms) total += term.tail_from(t);
  return total;
}

namespace detail {

// t^n phi(t) e^{-xt}, with the exponentials folded together so that the
// decaying factors are applied once.
inline double moment_integrand(const Kernel& k, int n, double x, double t) {
  if (t == 0.0) return n == 0 ? kernel_value(k, 0.0) : 0.0;
  const double log_weight = n * std::log(t) - x * t;
  switch (k.kind) {
    case KernelKind::TrigammaMinusSinh:
      return (trigamma_density(t) - sinh_density(k.m(), t)) * std::exp(log_weight - t);
    case KernelKind::SinhMinusTrigamma:
      return sinh_density(k.m(), t) * std::exp(log_weight) -
             trigamma_density(t) * std::exp(log_weight - t);
    case KernelKind::UnitControl:
      return std::exp(log_weight);
  }
  return 0.0;
}

// Geometric partition 0, 1, 2, 4, ..., hi.
inline std::vector<double> geometric_breakpoints(double lo, double hi) {
  std::vector<double> points{lo};
  for (double p = std::max(1.0, 2.0 * lo); p < hi; p *= 2.0) {
    if (p > lo) points.push_back(p);
  }
  points.push_back(hi);
  return points;
}

inline constexpr double kInitialTruncation = 16.0;
inline constexpr double kMaxTruncation = 16.0 * 1048576.0;

// Smallest T = 16 * 2^j with envelope tail <= budget, or kMaxTruncation.
inline double choose_truncation(const std::vector<EnvelopeTerm>& env, double budget) {
  double t = kInitialTruncation;
  while (envelope_tail(env, t) > budget && t < kMaxTruncation) t *= 2.0;
  return t;
}

template <class Integrand>
QuadratureResult integrate_with_tail(Integrand&& f, const std::vector<EnvelopeTerm>& env, double tol) {
  QuadratureResult result;
  const double tail_budget = 0.5 * tol;
  const double t_cut = choose_truncation(env, tail_budget);
  const double tail = envelope_tail(env, t_cut);
  const bool tail_ok = tail <= tail_budget;
  // An uncertifiable tail means the integral over [0, inf) may diverge; the
  // finite part is still reported over [0, 16].
  const double upper = tail_ok ? t_cut : kInitialTruncation;
  const auto points = geometric_breakpoints(0.0, upper);
  const auto est = integrate_adaptive(f, points, 0.5 * tol, 0.5 * tol);
  result.value = est.value;
  result.abs_error_estimate = est.abs_error;
  result.tail_bound = tail_ok ? tail : std::numeric_limits<double>::infinity();
  result.nodes_used = est.evaluations;
  result.truncation_point = upper;
  result.converged = tail_ok && est.converged;
  return result;
}

inline void check_moment_arguments(int n, double x, double tol, double min_tol) {
  if (n < 0 || n > kMaxMomentOrder) {
    throw UsageError("moment order must lie in [0, 60], got " + std::to_string(n));
  }
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("transform argument x must be positive, got " + std::to_string(x));
  }
  if (!(tol >= min_tol)) {
    throw UsageError("tolerance below the supported minimum " + std::to_string(min_tol));
  }
}

}  // namespace detail

/// int_0^inf t^n phi(t) e^{-xt} dt, i.e. (-1)^n f^{(n)}(x).
///
/// The quadrature error target is tol * max(1, int |integrand|); the tail
/// beyond the truncation point is bounded absolutely by tol/2. When either
/// cannot be met the best effort is returned with converged = false.
inline QuadratureResult laplace_moment(const Kernel& k, int n, double x, double tol = 1e-9) {
  detail::check_moment_arguments(n, x, tol, 1e-12);
  auto integrand = [&k, n, x](double t) { return detail::moment_integrand(k, n, x, t); };
  return detail::integrate_with_tail(integrand, moment_envelope(k, n, x), tol);
}

/// The same integrand restricted to [lo, hi], without tail accounting.
inline QuadratureEstimate laplace_moment_on(const Kernel& k, int n, double x, double lo, double hi,
                                            double tol = 1e-9) {
  detail::check_moment_arguments(n, x, tol, 1e-12);
  if (!(0.0 <= lo && lo < hi)) throw UsageError("laplace_moment_on: need 0 <= lo < hi");
  auto integrand = [&k, n, x](double t) { return detail::moment_integrand(k, n, x, t); };
  const auto points = detail::geometric_breakpoints(lo, hi);
  return integrate_adaptive(integrand, points, 0.5 * tol, 0.5 * tol);
}

/// int_0^inf |phi(t)| dt with a certified tail. Kernels whose envelope does
/// not decay (SinhMinusTrigamma, UnitControl) come back with converged = false
/// and an infinite tail bound.
inline QuadratureResult integral_abs_kernel(const Kernel& k, double tol = 1e-9) {
  if (!(tol >= 1e-10)) throw UsageError("integral_abs_kernel: tolerance must be >= 1e-10");
  auto integrand = [&k](double t) { return std::abs(kernel_value(k, t)); };
  return detail::integrate_with_tail(integrand, moment_envelope(k, 0, 0.0), tol);
}

}  // namespace cmono

#endif  // CMONO_LAPLACE_HPP
