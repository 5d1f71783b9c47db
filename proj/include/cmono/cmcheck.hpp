#ifndef CMONO_CMCHECK_HPP
#define CMONO_CMCHECK_HPP

// Deciding and refuting complete monotonicity of f(x) = int phi(t) e^{-xt} dt.
//
// Two independent routes:
//  * kernel sign: a continuous, absolutely integrable phi that goes negative
//    rules out complete monotonicity, whatever the derivatives show;
//  * derivative margins: (-1)^n f^{(n)}(x) = int t^n phi(t) e^{-xt} dt must be
//    nonnegative for every n and x.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cmono/errors.hpp"
#include "cmono/exact.hpp"
#include "cmono/laplace.hpp"
#include "cmono/specfun.hpp"

namespace cmono {

/// Beyond T(m) the TrigammaMinusSinh kernel is provably negative:
/// t/(1-e^{-t}) <= t+1 < a t^2 <= S(m,t) for t > T(m), with a = m^2/2880.
/// T(m) is the positive root of a t^2 = t + 1.
inline double negativity_threshold(double m) {
  const double a = KernelParam{m}.value() * m / 2880.0;
  return (1.0 + std::sqrt(1.0 + 4.0 * a)) / (2.0 * a);
}

struct SignChangeCertificate {
  double m = 0.0;
  double bracket_lo = 0.0;  // kernel_sign > 0 here
  double bracket_hi = 0.0;  // kernel_sign < 0 here
  double root_estimate = 0.0;
  std::optional<double> analytic_threshold;  // set for TrigammaMinusSinh
};

inline constexpr std::size_t kDefaultScanPoints = 512;

/// Log-spaced grid on [lo, hi]; lo = 0 is replaced by 1e-6 * min(1, hi).
inline std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (points < 2) throw UsageError("log_grid: need at least two points");
  if (!(lo >= 0.0 && lo < hi)) throw UsageError("log_grid: need 0 <= lo < hi");
  const double start = lo > 0.0 ? lo : 1e-6 * std::min(1.0, hi);
  const double log_lo = std::log(start);
  const double step = (std::log(hi) - log_lo) / static_cast<double>(points - 1);
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) grid[i] = std::exp(log_lo + step * static_cast<double>(i));
  grid.front() = start;
  grid.back() = hi;
  return grid;
}

/// Scans kernel_sign on a log grid over [t_lo, t_hi] for the first
/// positive-to-negative transition and bisects it to relative width 1e-8.
inline std::optional<SignChangeCertificate> find_sign_change(const Kernel& k, double t_lo, double t_hi,
                                                             std::size_t points = kDefaultScanPoints) {
  const auto grid = log_grid(t_lo, t_hi, points);
  double last_positive = -1.0;
  for (const double t : grid) {
    const double s = kernel_sign(k, t);
    if (s > 0.0) {
      last_positive = t;
    } else if (s < 0.0 && last_positive >= 0.0) {
      double lo = last_positive;
      double hi = t;
      while (hi - lo > 1e-8 * std::max(1.0, lo)) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double sm = kernel_sign(k, mid);
        if (sm > 0.0) {
          lo = mid;
        } else if (sm < 0.0) {
          hi = mid;
        } else {
          lo = hi = mid;  // exact zero: degenerate bracket
          break;
        }
      }
      SignChangeCertificate cert;
      cert.m = k.m();
      cert.bracket_lo = lo;
      cert.bracket_hi = hi;
      cert.root_estimate = 0.5 * (lo + hi);
      if (k.kind == KernelKind::TrigammaMinusSinh) cert.analytic_threshold = negativity_threshold(k.m());
      return cert;
    }
  }
  return std::nullopt;
}

/// Default scan window [1e-6, min(500, 2 T(m))].
inline double default_scan_upper(double m) { return std::min(500.0, 2.0 * negativity_threshold(m)); }

inline std::optional<SignChangeCertificate> find_sign_change(const Kernel& k) {
  return find_sign_change(k, 1e-6, default_scan_upper(k.m()));
}

enum class VerdictKind { ConsistentWithCM, RefutedAtDerivative, RefutedByKernelSign };

inline std::string_view verdict_name(VerdictKind v) {
  switch (v) {
    case VerdictKind::ConsistentWithCM:
      return "ConsistentWithCM";
    case VerdictKind::RefutedAtDerivative:
      return "RefutedAtDerivative";
    case VerdictKind::RefutedByKernelSign:
      return "RefutedByKernelSign";
  }
  return "unknown";
}

struct Verdict {
  VerdictKind kind = VerdictKind::ConsistentWithCM;
  int order = -1;     // RefutedAtDerivative
  double x = 0.0;     // RefutedAtDerivative
  double t = 0.0;     // RefutedByKernelSign: root estimate
};

struct OrderMargin {
  int order = 0;
  double min_margin = 0.0;  // min over the grid of int t^n phi e^{-xt} dt
  double x_at_min = 0.0;
  double error_at_min = 0.0;  // total quadrature error of that entry
  bool near_zero = false;     // some negative value within its error bar
};

struct CMReport {
  Kernel kernel;
  int max_order = 0;
  std::vector<double> x_grid;
  std::vector<OrderMargin> margins;
  Verdict verdict;
  std::optional<SignChangeCertificate> certificate;
};

/// Checks (-1)^n f^{(n)}(x) >= 0 for n = 0..max_order on x_grid via
/// laplace_moment. A negative value refutes only when it exceeds its total
/// reported error; otherwise it is recorded as near zero.
inline CMReport cm_verify(const Kernel& k, int max_order, std::span<const double> x_grid, double tol = 1e-9) {
  if (max_order < 0 || max_order > kMaxMomentOrder) {
    throw UsageError("cm_verify: order bound must lie in [0, 60]");
  }
  if (x_grid.empty()) throw UsageError("cm_verify: x grid is empty");
  for (const double x : x_grid) {
    if (!(x > 0.0)) throw UsageError("cm_verify: x grid entries must be positive");
  }

  CMReport report{k, max_order, {x_grid.begin(), x_grid.end()}, {}, {}, std::nullopt};
  bool refuted = false;
  for (int n = 0; n <= max_order; ++n) {
    OrderMargin om;
    om.order = n;
    om.min_margin = std::numeric_limits<double>::infinity();
    for (const double x : x_grid) {
      const auto r = laplace_moment(k, n, x, tol);
      if (!r.converged) {
        throw QuadratureError("cm_verify: quadrature did not converge at n=" + std::to_string(n) +
                              ", x=" + std::to_string(x));
      }
      if (r.value < om.min_margin) {
        om.min_margin = r.value;
        om.x_at_min = x;
        om.error_at_min = r.total_error();
      }
      if (r.value < 0.0) {
        if (-r.value > r.total_error()) {
          if (!refuted) {
            report.verdict = {VerdictKind::RefutedAtDerivative, n, x, 0.0};
            refuted = true;
          }
        } else {
          om.near_zero = true;
        }
      }
    }
    report.margins.push_back(om);
  }
  return report;
}

/// Kernel sign first, derivative margins second. A sign-change certificate
/// refutes complete monotonicity regardless of the margins.
inline CMReport assess_cm(const Kernel& k, int max_order, std::span<const double> x_grid, double tol = 1e-9) {
  auto cert = find_sign_change(k);
  auto report = cm_verify(k, max_order, x_grid, tol);
  if (cert) {
    report.verdict = {VerdictKind::RefutedByKernelSign, -1, 0.0, cert->root_estimate};
    report.certificate = cert;
  }
  return report;
}

inline const std::vector<double>& default_x_grid() {
  static const std::vector<double> grid{0.25, 0.5, 1.0, 2.0, 5.0, 10.0};
  return grid;
}

/// (-1)^n Delta_h^n f(x0) for n = 0..max_order from samples f(x0 + j h).
/// The alternating binomial sums are accumulated exactly.
inline std::vector<double> finite_difference_cm_probe(std::span<const double> samples, int max_order) {
  if (max_order < 0 || max_order > kMaxBinomialOrder) {
    throw UsageError("finite_difference_cm_probe: order must lie in [0, 60]");
  }
  if (samples.size() < static_cast<std::size_t>(max_order) + 1) {
    throw UsageError("finite_difference_cm_probe: need at least max_order + 1 samples");
  }
  std::vector<double> margins;
  margins.reserve(max_order + 1);
  for (int n = 0; n <= max_order; ++n) {
    DyadicSum sum;
    for (int j = 0; j <= n; ++j) {
      const auto c = static_cast<std::int64_t>(binomial(n, j));
      sum.add(j % 2 == 0 ? c : -c, samples[j]);
    }
    margins.push_back(sum.to_double());
  }
  return margins;
}

}  // namespace cmono

#endif  // CMONO_CMCHECK_HPP
