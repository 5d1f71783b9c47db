#ifndef CMONO_QUADRATURE_HPP
#define CMONO_QUADRATURE_HPP

// Globally adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "cmono/errors.hpp"

namespace cmono {

struct QuadratureEstimate {
  double value = 0.0;
  double abs_error = 0.0;     // sum of per-panel |K15 - G7| (with roundoff floor)
  double abs_integral = 0.0;  // K15 estimate of the integral of |f|
  std::size_t evaluations = 0;
  std::size_t panels = 0;
  bool converged = false;
};

namespace detail {

// Abscissae and weights from QUADPACK qk15.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5 and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  double abs_value;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_15(F& f, double lo, double hi) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(centre);
  if (!std::isfinite(fc)) throw OverflowError("quadrature: non-finite integrand value");
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(fc) * kKronrodWeights[7];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double f1 = f(centre - dx);
    const double f2 = f(centre + dx);
    if (!std::isfinite(f1) || !std::isfinite(f2)) {
      throw OverflowError("quadrature: non-finite integrand value");
    }
    kronrod += kKronrodWeights[j] * (f1 + f2);
    abs_sum += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  const double value = kronrod * half;
  const double abs_value = abs_sum * std::abs(half);
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_value;
  const double error = std::max(std::abs((kronrod - gauss) * half), roundoff);
  return {lo, hi, value, error, abs_value};
}

}  // namespace detail

/// Integrates f over the partition given by `breakpoints` (sorted, at least
/// two entries). Panels with the largest error are bisected until the summed
/// error is at most max(abs_tol, rel_tol * integral of |f|) or `max_panels`
/// is reached.
template <class F>
QuadratureEstimate integrate_adaptive(F&& f, std::span<const double> breakpoints, double abs_tol,
                                      double rel_tol, std::size_t max_panels = 5000) {
  if (breakpoints.size() < 2) throw UsageError("integrate_adaptive: need at least two breakpoints");
  std::priority_queue<detail::Panel> queue;
  QuadratureEstimate est;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) {
      throw UsageError("integrate_adaptive: breakpoints must be strictly increasing");
    }
    queue.push(detail::gauss_kronrod_15(f, breakpoints[i], breakpoints[i + 1]));
    est.evaluations += 15;
  }

  auto totals = [&queue] {
    // priority_queue has no iteration; copy is cheap at these sizes.
    auto copy = queue;
    double value = 0.0, error = 0.0, abs_value = 0.0;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      abs_value += copy.top().abs_value;
      copy.pop();
    }
    return std::array<double, 3>{value, error, abs_value};
  };

  double error = 0.0;
  double abs_value = 0.0;
  for (auto it = totals(); ; ) {
    error = it[1];
    abs_value = it[2];
    const double target = std::max(abs_tol, rel_tol * abs_value);
    if (error <= target) break;
    if (queue.size() >= max_panels) break;
    const detail::Panel worst = queue.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(worst.lo < mid && mid < worst.hi)) break;  // cannot split further
    queue.pop();
    const auto left = detail::gauss_kronrod_15(f, worst.lo, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.hi);
    est.evaluations += 30;
    queue.push(left);
    queue.push(right);
    // Incremental update; exact totals are recomputed below.
    it[0] += left.value + right.value - worst.value;
    it[1] += left.error + right.error - worst.error;
    it[2] += left.abs_value + right.abs_value - worst.abs_value;
  }

  const auto final_totals = totals();
  est.value = final_totals[0];
  est.abs_error = final_totals[1];
  est.abs_integral = final_totals[2];
  est.panels = queue.size();
  est.converged = est.abs_error <= std::max(abs_tol, rel_tol * est.abs_integral) * (1.0 + 1e-12);
  return est;
}

}  // namespace cmono

#endif  // CMONO_QUADRATURE_HPP
