#ifndef CMONO_SPECFUN_HPP
#define CMONO_SPECFUN_HPP

// Scalar special functions and the two Laplace kernels built from them.
//
//   trigamma(x)        = sum_{k>=0} 1/(x+k)^2
//   trigamma_density   = t/(1-e^{-t}), the Laplace density of trigamma
//   sinh_density(m,t)  = sum_n (mt)^{2n}/((2n)!(2n+1)!), the Laplace
//                        density of (1/m) sinh(m/x)
//
// The kernels combine them:
//   TrigammaMinusSinh : phi(t) = (t/(1-e^{-t}) - S(m,t)) e^{-t}
//                       f(x)   = trigamma(x+1) - sinh(m/(x+1))/m
//   SinhMinusTrigamma : phi(t) = S(m,t) - t e^{-t}/(1-e^{-t})
//                       f(x)   = sinh(m/x)/m - trigamma(x+1)
//   UnitControl       : phi(t) = 1, f(x) = 1/x  (test control)

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "cmono/errors.hpp"

namespace cmono {

/// Largest argument for which exp() is finite.
inline constexpr double kMaxExpArgument = 709.782712893384;

/// Positive, finite kernel parameter m.
class KernelParam {
 public:
  explicit KernelParam(double m) : m_(m) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw DomainError("kernel parameter m must be positive and finite, got " + std::to_string(m));
    }
  }
  [[nodiscard]] double value() const noexcept { return m_; }

 private:
  double m_;
};

enum class KernelKind {
  TrigammaMinusSinh,  // "phi3": not completely monotonic for any m
  SinhMinusTrigamma,  // "phi4": completely monotonic for every m
  UnitControl,        // phi = 1; divergent control for integrability checks
};

struct Kernel {
  KernelKind kind;
  KernelParam param;

  static Kernel trigamma_minus_sinh(double m) { return {KernelKind::TrigammaMinusSinh, KernelParam{m}}; }
  static Kernel sinh_minus_trigamma(double m) { return {KernelKind::SinhMinusTrigamma, KernelParam{m}}; }
  static Kernel unit_control() { return {KernelKind::UnitControl, KernelParam{1.0}}; }

  [[nodiscard]] double m() const noexcept { return param.value(); }
};

/// Short identifier used on the command line and in reports.
inline std::string_view kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::TrigammaMinusSinh:
      return "phi3";
    case KernelKind::SinhMinusTrigamma:
      return "phi4";
    case KernelKind::UnitControl:
      return "unit";
  }
  return "unknown";
}

inline KernelKind parse_kind(std::string_view name) {
  if (name == "phi3") return KernelKind::TrigammaMinusSinh;
  if (name == "phi4") return KernelKind::SinhMinusTrigamma;
  if (name == "unit") return KernelKind::UnitControl;
  throw UsageError("unknown kernel kind '" + std::string(name) + "' (expected phi3, phi4 or unit)");
}

namespace detail {

inline void require_nonnegative(double t, const char* what) {
  if (!(t >= 0.0)) {
    throw DomainError(std::string(what) + ": argument must be >= 0, got " + std::to_string(t));
  }
}

inline void require_positive(double x, const char* what) {
  if (!(x > 0.0)) {
    throw DomainError(std::string(what) + ": argument must be > 0, got " + std::to_string(x));
  }
}

}  // namespace detail

/// Trigamma function psi'(x) for x > 0.
///
/// Shifts x upward with psi'(x) = psi'(x+1) + 1/x^2 until x >= 10, then sums
/// the asymptotic expansion 1/x + 1/(2x^2) + sum_{k=1..6} B_{2k}/x^{2k+1}.
inline double trigamma(double x) {
  detail::require_positive(x, "trigamma");
  if (std::isinf(x)) return 0.0;

  constexpr double kShift = 10.0;
  double shifted = x;
  int shifts = 0;
  while (shifted < kShift) {
    shifted += 1.0;
    ++shifts;
  }

  // B_2 .. B_12
  constexpr double kBernoulli[] = {1.0 / 6.0,  -1.0 / 30.0, 1.0 / 42.0,
                                   -1.0 / 30.0, 5.0 / 66.0,  -691.0 / 2730.0};
  const double inv = 1.0 / shifted;
  const double inv2 = inv * inv;
  double series = 0.0;
  for (int k = 5; k >= 0; --k) {
    series = series * inv2 + kBernoulli[k];
  }
  double result = inv + 0.5 * inv2 + series * inv2 * inv;

  // Smallest terms first.
  for (int j = shifts; j >= 1; --j) {
    const double y = x + static_cast<double>(j - 1);
    result += 1.0 / (y * y);
  }
  if (!std::isfinite(result)) {
    throw OverflowError("trigamma: result overflows for x = " + std::to_string(x));
  }
  return result;
}

/// t / (1 - e^{-t}) with the removable singularity at 0 filled in (value 1).
inline double trigamma_density(double t) {
  detail::require_nonnegative(t, "trigamma_density");
  if (t < 1e-2) {
    const double t2 = t * t;
    return 1.0 + t * 0.5 + t2 * (1.0 / 12.0) - t2 * t2 * (1.0 / 720.0);
  }
  return t / -std::expm1(-t);
}

/// S(m,t) = sum_{n>=0} (mt)^{2n} / ((2n)! (2n+1)!).
///
/// Throws OverflowError when the growth estimate 2 sqrt(mt) leaves the
/// exponent range. Summation stops once a term drops below 1e-17 of the sum.
inline double sinh_density(double m, double t) {
  detail::require_positive(m, "sinh_density (m)");
  detail::require_nonnegative(t, "sinh_density (t)");
  const double mt = m * t;
  if (!std::isfinite(mt) || 2.0 * std::sqrt(mt) > kMaxExpArgument) {
    throw OverflowError("sinh_density: 2*sqrt(m*t) exceeds the exponent range (m*t = " +
                        std::to_string(mt) + ")");
  }
  const double z2 = mt * mt;
  double term = 1.0;
  double sum = 1.0;
  constexpr int kMaxTerms = 10000;
  for (int n = 0; n < kMaxTerms; ++n) {
    const double a = 2.0 * n;
    term *= z2 / ((a + 1.0) * (a + 2.0) * (a + 2.0) * (a + 3.0));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  if (!std::isfinite(sum)) {
    throw OverflowError("sinh_density: sum overflows (m*t = " + std::to_string(mt) + ")");
  }
  return sum;
}

/// Kernel value phi(t). Continuous at 0 where both families vanish.
inline double kernel_value(const Kernel& k, double t) {
  detail::require_nonnegative(t, "kernel_value");
  switch (k.kind) {
    case KernelKind::TrigammaMinusSinh:
      return (trigamma_density(t) - sinh_density(k.m(), t)) * std::exp(-t);
    case KernelKind::SinhMinusTrigamma:
      if (t == 0.0) return 0.0;
      return sinh_density(k.m(), t) - trigamma_density(t) * std::exp(-t);
    case KernelKind::UnitControl:
      return 1.0;
  }
  return 0.0;
}

/// A function with the sign of phi(t) but without the decaying e^{-t}
/// prefactor, so it stays representable far into the tail:
///   TrigammaMinusSinh: t/(1-e^{-t}) - S(m,t)
///   SinhMinusTrigamma: (e^t - 1) S(m,t) - t
inline double kernel_sign(const Kernel& k, double t) {
  detail::require_nonnegative(t, "kernel_sign");
  switch (k.kind) {
    case KernelKind::TrigammaMinusSinh:
      return trigamma_density(t) - sinh_density(k.m(), t);
    case KernelKind::SinhMinusTrigamma: {
      if (t > kMaxExpArgument) {
        throw OverflowError("kernel_sign: e^t overflows for t = " + std::to_string(t));
      }
      const double v = std::expm1(t) * sinh_density(k.m(), t) - t;
      if (!std::isfinite(v)) {
        throw OverflowError("kernel_sign: product overflows for t = " + std::to_string(t));
      }
      return v;
    }
    case KernelKind::UnitControl:
      return 1.0;
  }
  return 0.0;
}

/// Closed form of f(x) = int_0^inf phi(t) e^{-xt} dt, for x > 0.
inline double closed_form(const Kernel& k, double x) {
  detail::require_positive(x, "closed_form");
  const double m = k.m();
  auto scaled_sinh = [m](double arg) {
    if (arg > kMaxExpArgument) {
      throw OverflowError("closed_form: sinh overflows at argument " + std::to_string(arg));
    }
    return std::sinh(arg) / m;
  };
  switch (k.kind) {
    case KernelKind::TrigammaMinusSinh:
      return trigamma(x + 1.0) - scaled_sinh(m / (x + 1.0));
    case KernelKind::SinhMinusTrigamma:
      return scaled_sinh(m / x) - trigamma(x + 1.0);
    case KernelKind::UnitControl:
      return 1.0 / x;
  }
  return 0.0;
}

}  // namespace cmono

#endif  // CMONO_SPECFUN_HPP
