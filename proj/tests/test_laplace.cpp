#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cmono/laplace.hpp"
#include "cmono/quadrature.hpp"

using namespace cmono;

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TEST(Quadrature, SmoothIntegrands) {
  const std::vector<double> pts{0.0, std::numbers::pi};
  const auto r = integrate_adaptive([](double x) { return std::sin(x); }, pts, 1e-13, 0.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 2.0, 1e-13);
  EXPECT_LE(std::abs(r.value - 2.0), r.abs_error + 1e-15);

  const std::vector<double> unit{0.0, 0.5, 1.0};
  const auto kink = integrate_adaptive([](double x) { return std::abs(x - 1.0 / 3.0); }, unit, 1e-12, 0.0);
  EXPECT_TRUE(kink.converged);
  EXPECT_NEAR(kink.value, 5.0 / 18.0, 1e-12);
}

TEST(Quadrature, FlagsUnmetTolerance) {
  const std::vector<double> pts{0.0, 1.0};
  const auto r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, pts, 1e-14, 0.0, 4);
  EXPECT_FALSE(r.converged);
  EXPECT_THROW(integrate_adaptive([](double) { return 1.0; }, std::vector<double>{1.0}, 1e-9, 0.0),
               UsageError);
  EXPECT_THROW(integrate_adaptive([](double) { return 1.0; }, std::vector<double>{1.0, 0.0}, 1e-9, 0.0),
               UsageError);
}

TEST(LaplaceMoment, ClosedFormExamples) {
  const auto r4 = laplace_moment(Kernel::sinh_minus_trigamma(1.0), 0, 1.0, 1e-9);
  EXPECT_TRUE(r4.converged);
  EXPECT_NEAR(r4.value, closed_form(Kernel::sinh_minus_trigamma(1.0), 1.0), 1e-8);
  EXPECT_NEAR(r4.value, 0.53026712679557608, 1e-8);

  const auto r3 = laplace_moment(Kernel::trigamma_minus_sinh(1.0), 0, 2.0, 1e-9);
  EXPECT_TRUE(r3.converged);
  EXPECT_NEAR(r3.value, closed_form(Kernel::trigamma_minus_sinh(1.0), 2.0), 1e-8);
}

TEST(LaplaceMoment, UnitKernelGivesFactorialOverPower) {
  const auto r = laplace_moment(Kernel::unit_control(), 3, 2.0, 1e-9);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 0.375, 1e-9);
  for (int n : {0, 1, 5, 10, 20}) {
    for (double x : {0.5, 1.0, 3.0}) {
      const double want = factorial(n) / std::pow(x, n + 1);
      const auto q = laplace_moment(Kernel::unit_control(), n, x, 1e-10);
      EXPECT_TRUE(q.converged);
      EXPECT_LE(std::abs(q.value - want), 1e-9 * std::max(1.0, want)) << "n=" << n << " x=" << x;
    }
  }
}

TEST(LaplaceMoment, OracleEquivalence) {
  const double tol = 1e-9;
  for (double m : {0.5, 1.0, 2.0}) {
    for (const auto& k : {Kernel::trigamma_minus_sinh(m), Kernel::sinh_minus_trigamma(m)}) {
      for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        const auto r = laplace_moment(k, 0, x, tol);
        EXPECT_TRUE(r.converged);
        EXPECT_LE(std::abs(r.value - closed_form(k, x)), 10.0 * tol)
            << kind_name(k.kind) << " m=" << m << " x=" << x;
      }
    }
  }
}

// (-1)^n f^{(n)}(x) from central differences of the closed form must agree
// with the n-th moment within the Richardson estimate of the truncation error
// plus the roundoff amplification of the difference stencil.
TEST(LaplaceMoment, DerivativeConsistencyWithFiniteDifferences) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const auto k = Kernel::sinh_minus_trigamma(1.0);
  auto central = [&k](int n, double x, double h) {
    double sum = 0.0;
    double scale = 0.0;
    double c = 1.0;  // C(n, j)
    for (int j = 0; j <= n; ++j) {
      const double f = closed_form(k, x + (0.5 * n - j) * h);
      sum += (j % 2 == 0 ? c : -c) * f;
      scale += c * std::abs(f);
      c = c * (n - j) / (j + 1);
    }
    return std::pair{sum / std::pow(h, n), scale / std::pow(h, n)};
  };
  for (double x : {0.5, 1.0, 2.0, 5.0}) {
    for (int n = 0; n <= 6; ++n) {
      const double h = 1e-2 * x;
      const auto [d1, s1] = central(n, x, h);
      const auto [d2, s2] = central(n, x, 2.0 * h);
      const double sign = n % 2 == 0 ? 1.0 : -1.0;
      const double estimate = 2.0 * std::abs(d2 - d1) / 3.0 + 8.0 * eps * (s1 + s2);
      const auto r = laplace_moment(k, n, x, 1e-10);
      EXPECT_NEAR(sign * d1, r.value, estimate + r.total_error()) << "n=" << n << " x=" << x;
    }
  }
}

TEST(LaplaceMoment, TailBoundIsSound) {
  for (const auto& k : {Kernel::trigamma_minus_sinh(1.0), Kernel::sinh_minus_trigamma(1.0),
                        Kernel::sinh_minus_trigamma(5.0), Kernel::trigamma_minus_sinh(20.0)}) {
    for (int n : {0, 3, 12}) {
      for (double x : {0.5, 2.0}) {
        const auto r = laplace_moment(k, n, x, 1e-9);
        ASSERT_TRUE(r.converged);
        const double cut = r.truncation_point;
        const auto extra = laplace_moment_on(k, n, x, cut, 2.0 * cut, 1e-12);
        EXPECT_LE(std::abs(extra.value), r.tail_bound) << kind_name(k.kind) << " n=" << n << " x=" << x;
      }
    }
  }
}

TEST(LaplaceMoment, EnvelopeDominatesIntegrand) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> log_t(std::log(1e-4), std::log(400.0));
  std::uniform_real_distribution<double> log_m(std::log(0.05), std::log(20.0));
  std::uniform_real_distribution<double> xs(0.1, 10.0);
  std::uniform_int_distribution<int> ns(0, 20);
  for (int trial = 0; trial < 2000; ++trial) {
    const double t = std::exp(log_t(rng));
    const double m = std::exp(log_m(rng));
    const double x = xs(rng);
    const int n = ns(rng);
    for (const auto& k : {Kernel::trigamma_minus_sinh(m), Kernel::sinh_minus_trigamma(m)}) {
      double env = 0.0;
      for (const auto& term : moment_envelope(k, n, x)) env += std::exp(term.log_value(t));
      const double integrand = std::pow(t, n) * std::abs(kernel_value(k, t)) * std::exp(-x * t);
      EXPECT_LE(integrand, env * (1.0 + 1e-12)) << kind_name(k.kind) << " m=" << m << " t=" << t;
    }
  }
}

TEST(LaplaceMoment, ArgumentErrors) {
  const auto k = Kernel::sinh_minus_trigamma(1.0);
  EXPECT_THROW(laplace_moment(k, 61, 1.0), UsageError);
  EXPECT_THROW(laplace_moment(k, -1, 1.0), UsageError);
  EXPECT_THROW(laplace_moment(k, 0, 0.0), DomainError);
  EXPECT_THROW(laplace_moment(k, 0, -2.0), DomainError);
  EXPECT_THROW(laplace_moment(k, 0, 1.0, 1e-13), UsageError);
}

TEST(IntegralAbsKernel, TrigammaMinusSinhIsIntegrable) {
  for (double m : {0.5, 1.0, 2.0, 50.0}) {
    const auto r = integral_abs_kernel(Kernel::trigamma_minus_sinh(m), 1e-9);
    EXPECT_TRUE(r.converged) << "m=" << m;
    EXPECT_TRUE(std::isfinite(r.value));
    EXPECT_GT(r.value, 0.0);
    EXPECT_LE(r.total_error(), 1e-9 * std::max(1.0, r.value));
  }
}

TEST(IntegralAbsKernel, DivergentKernelsAreFlagged) {
  const auto unit = integral_abs_kernel(Kernel::unit_control(), 1e-9);
  EXPECT_FALSE(unit.converged);
  EXPECT_TRUE(std::isinf(unit.tail_bound));
  // S(m,t) >= 1 + (mt)^2/12, so |phi| is not integrable for this family.
  const auto grows = integral_abs_kernel(Kernel::sinh_minus_trigamma(1.0), 1e-9);
  EXPECT_FALSE(grows.converged);
  EXPECT_TRUE(std::isinf(grows.tail_bound));
  EXPECT_THROW(integral_abs_kernel(Kernel::unit_control(), 1e-11), UsageError);
}
