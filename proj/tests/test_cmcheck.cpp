#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cmono/cmcheck.hpp"
#include "oracles.hpp"

using namespace cmono;

namespace {

double sign_or_nan(const Kernel& k, double t) {
  try {
    return kernel_sign(k, t);
  } catch (const OverflowError&) {
    return std::nan("");
  }
}

}  // namespace

TEST(NegativityThreshold, MatchesBisection) {
  for (double m : {0.1, 0.5, 1.0, 2.0, 10.0, 50.0, 300.0}) {
    const double a = m * m / 2880.0;
    const double want = oracle::quadratic_root_bisection(a);
    EXPECT_NEAR(negativity_threshold(m), want, 1e-12 * want) << "m=" << m;
  }
  EXPECT_NEAR(negativity_threshold(1.0), 2880.999653, 1e-6);
  EXPECT_NEAR(negativity_threshold(50.0), 1.7941034438831539, 1e-14);
  EXPECT_THROW(negativity_threshold(0.0), DomainError);
}

TEST(NegativityThreshold, DecreasingInM) {
  for (double m = 0.05; m < 500.0; m *= 1.7) {
    EXPECT_LT(negativity_threshold(2.0 * m), negativity_threshold(m)) << "m=" << m;
  }
}

TEST(NegativityThreshold, KernelNegativeBeyondIt) {
  for (double m : {0.5, 1.0, 2.0, 10.0, 50.0}) {
    const auto k = Kernel::trigamma_minus_sinh(m);
    const double t = negativity_threshold(m);
    for (double f : {1.0001, 1.01, 1.5, 3.0}) {
      const double s = sign_or_nan(k, f * t);
      if (std::isnan(s)) continue;
      EXPECT_LT(s, 0.0) << "m=" << m << " t=" << f * t;
    }
  }
}

TEST(SignChange, MatchesHighPrecisionRoot) {
  // Roots of t/(1-e^{-t}) = S(m,t), frozen from 50-digit bisection.
  const std::vector<std::pair<double, double>> frozen{
      {0.5, 25.796753167517409}, {1.0, 8.1526601803035166}, {2.0, 1.8306398369365033},
      {10.0, 0.060512736515264158}, {50.0, 0.002400816177768368}};
  for (const auto& [m, approx] : frozen) {
    const auto cert = find_sign_change(Kernel::trigamma_minus_sinh(m));
    ASSERT_TRUE(cert.has_value()) << "m=" << m;
    const double want = oracle::sign_change_root(m, cert->bracket_lo * 0.5, cert->bracket_hi * 2.0);
    EXPECT_NEAR(cert->root_estimate, want, 2e-8 * std::max(1.0, want)) << "m=" << m;
    EXPECT_NEAR(cert->root_estimate, approx, 1e-8 * std::max(1.0, approx)) << "m=" << m;
    EXPECT_LE(cert->bracket_hi - cert->bracket_lo, 1e-8 * std::max(1.0, cert->root_estimate));
    EXPECT_LE(cert->root_estimate, negativity_threshold(m));
    ASSERT_TRUE(cert->analytic_threshold.has_value());
    EXPECT_EQ(*cert->analytic_threshold, negativity_threshold(m));
  }
}

TEST(SignChange, CertificatesAreSoundForRandomM) {
  std::mt19937_64 rng(20261018);
  std::uniform_real_distribution<double> log_m(std::log(0.3), std::log(60.0));
  for (int trial = 0; trial < 30; ++trial) {
    const double m = std::exp(log_m(rng));
    const auto k = Kernel::trigamma_minus_sinh(m);
    const auto cert = find_sign_change(k);
    ASSERT_TRUE(cert.has_value()) << "m=" << m;
    EXPECT_GT(kernel_sign(k, cert->bracket_lo), 0.0) << "m=" << m;
    EXPECT_LE(kernel_sign(k, cert->bracket_hi), 0.0) << "m=" << m;
    EXPECT_LE(cert->bracket_lo, cert->root_estimate);
    EXPECT_LE(cert->root_estimate, cert->bracket_hi);
    EXPECT_LE(cert->root_estimate, negativity_threshold(m)) << "m=" << m;
    const double beyond = sign_or_nan(k, 1.01 * negativity_threshold(m));
    if (!std::isnan(beyond)) {
      EXPECT_LT(beyond, 0.0) << "m=" << m;
    }
  }
}

TEST(SignChange, NoneForNonnegativeKernel) {
  EXPECT_FALSE(find_sign_change(Kernel::sinh_minus_trigamma(1.0), 0.0, 100.0).has_value());
  EXPECT_FALSE(find_sign_change(Kernel::sinh_minus_trigamma(1.0)).has_value());
  EXPECT_FALSE(find_sign_change(Kernel::unit_control(), 0.0, 100.0).has_value());
}

TEST(SignChange, ScanWindowMatters) {
  const auto k = Kernel::trigamma_minus_sinh(50.0);
  const auto cert = find_sign_change(k, 1e-6, 10.0);
  ASSERT_TRUE(cert.has_value());
  EXPECT_LT(cert->root_estimate, negativity_threshold(50.0));
  EXPECT_LT(cert->root_estimate, 0.1);
  // The kernel is already negative throughout [0.1, 10].
  EXPECT_FALSE(find_sign_change(k, 0.1, 10.0).has_value());
}

TEST(SignChange, StableUnderGridRefinement) {
  for (double m : {0.5, 1.0, 10.0}) {
    const auto k = Kernel::trigamma_minus_sinh(m);
    const double hi = default_scan_upper(m);
    const auto a = find_sign_change(k, 1e-6, hi, 512);
    const auto b = find_sign_change(k, 1e-6, hi, 1023);
    const auto c = find_sign_change(k, 1e-6, hi, 2045);
    ASSERT_TRUE(a && b && c);
    EXPECT_NEAR(a->root_estimate, b->root_estimate, 2e-8 * std::max(1.0, a->root_estimate));
    EXPECT_NEAR(b->root_estimate, c->root_estimate, 2e-8 * std::max(1.0, b->root_estimate));
  }
}

TEST(SignChange, ArgumentErrors) {
  const auto k = Kernel::trigamma_minus_sinh(1.0);
  EXPECT_THROW(find_sign_change(k, 5.0, 1.0), UsageError);
  EXPECT_THROW(find_sign_change(k, 1.0, 5.0, 1), UsageError);
}

TEST(CmVerify, SinhMinusTrigammaIsConsistent) {
  const std::vector<double> xs{0.5, 1.0, 2.0, 5.0};
  const auto report = cm_verify(Kernel::sinh_minus_trigamma(1.0), 12, xs);
  EXPECT_EQ(report.verdict.kind, VerdictKind::ConsistentWithCM);
  ASSERT_EQ(report.margins.size(), 13u);
  for (const auto& om : report.margins) EXPECT_GE(om.min_margin, -1e-8) << "n=" << om.order;
}

TEST(CmVerify, TrigammaMinusSinhLargeMIsRefuted) {
  const auto report = cm_verify(Kernel::trigamma_minus_sinh(50.0), 12, default_x_grid());
  EXPECT_EQ(report.verdict.kind, VerdictKind::RefutedAtDerivative);
  const auto assessed = assess_cm(Kernel::trigamma_minus_sinh(50.0), 12, default_x_grid());
  EXPECT_EQ(assessed.verdict.kind, VerdictKind::RefutedByKernelSign);
  ASSERT_TRUE(assessed.certificate.has_value());
  EXPECT_EQ(assessed.verdict.t, assessed.certificate->root_estimate);
}

TEST(CmVerify, TrigammaMinusSinhUnitMRefutedAtHighOrder) {
  const std::vector<double> xs{0.5, 1.0, 2.0};
  const auto report = cm_verify(Kernel::trigamma_minus_sinh(1.0), 12, xs);
  EXPECT_EQ(report.verdict.kind, VerdictKind::RefutedAtDerivative);
  EXPECT_EQ(report.verdict.order, 10);
  EXPECT_EQ(report.verdict.x, 0.5);
  for (int n = 0; n < 10; ++n) EXPECT_GE(report.margins[n].min_margin, -report.margins[n].error_at_min);
  const auto& last = report.margins.back();
  EXPECT_EQ(last.x_at_min, 0.5);
  EXPECT_NEAR(last.min_margin, -5907665.408375898, 1e-8 * 5907665.408375898);
}

TEST(CmVerify, SinhMinusTrigammaNeverRefutedAcrossM) {
  const std::vector<double> xs{0.5, 1.0, 2.0, 5.0, 10.0};
  for (double m : {0.1, 0.5, 2.0, 10.0}) {
    const auto report = assess_cm(Kernel::sinh_minus_trigamma(m), 8, xs);
    EXPECT_EQ(report.verdict.kind, VerdictKind::ConsistentWithCM) << "m=" << m;
    EXPECT_FALSE(report.certificate.has_value());
  }
}

TEST(CmVerify, ArgumentErrors) {
  const auto k = Kernel::sinh_minus_trigamma(1.0);
  const std::vector<double> empty;
  const std::vector<double> bad{1.0, -1.0};
  EXPECT_THROW(cm_verify(k, 61, default_x_grid()), UsageError);
  EXPECT_THROW(cm_verify(k, 4, empty), UsageError);
  EXPECT_THROW(cm_verify(k, 4, bad), UsageError);
}

TEST(FiniteDifferenceProbe, SinhMinusTrigammaClosedForm) {
  const auto k = Kernel::sinh_minus_trigamma(1.0);
  std::vector<double> samples;
  for (int j = 0; j <= 8; ++j) samples.push_back(closed_form(k, 1.0 + 0.1 * j));
  const auto margins = finite_difference_cm_probe(samples, 8);
  ASSERT_EQ(margins.size(), 9u);
  for (int n = 0; n <= 8; ++n) EXPECT_GE(margins[n], 0.0) << "n=" << n;
}

TEST(FiniteDifferenceProbe, GeometricSequence) {
  const double x0 = 0.3, h = 0.25;
  std::vector<double> samples;
  for (int j = 0; j <= 20; ++j) samples.push_back(std::exp(-(x0 + j * h)));
  const auto margins = finite_difference_cm_probe(samples, 20);
  for (int n = 0; n <= 20; ++n) {
    const double want = std::exp(-x0) * std::pow(-std::expm1(-h), n);
    // Each sample carries up to one ulp; the stencil amplifies that by 2^n.
    const double roundoff = std::ldexp(2.0 * std::numeric_limits<double>::epsilon() * std::exp(-x0), n);
    EXPECT_NEAR(margins[n], want, 1e-7 * want + roundoff) << "n=" << n;
  }
}

TEST(FiniteDifferenceProbe, DetectsNonMonotoneFunction) {
  std::vector<double> samples;
  for (int j = 0; j <= 6; ++j) samples.push_back(std::sin(0.5 * j));
  const auto margins = finite_difference_cm_probe(samples, 6);
  bool negative = false;
  for (double v : margins) negative = negative || v < 0.0;
  EXPECT_TRUE(negative);
  EXPECT_THROW(finite_difference_cm_probe(samples, 7), UsageError);
  EXPECT_THROW(finite_difference_cm_probe(samples, -1), UsageError);
}

TEST(FiniteDifferenceProbe, FirstOrderConvergenceToDerivatives) {
  // (-1)^n d^n/dx^n (1/x) at x = 1 is n!.
  for (int n = 1; n <= 3; ++n) {
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    double prev_err = 0.0;
    for (double h : {0.01, 0.005, 0.0025, 0.00125}) {
      std::vector<double> samples;
      for (int j = 0; j <= n; ++j) samples.push_back(1.0 / (1.0 + j * h));
      const double d = finite_difference_cm_probe(samples, n)[n] / std::pow(h, n);
      const double err = std::abs(d - fact);
      if (prev_err > 0.0) {
        EXPECT_GT(prev_err / err, 1.9) << "n=" << n << " h=" << h;
        EXPECT_LT(prev_err / err, 2.1) << "n=" << n << " h=" << h;
      }
      prev_err = err;
    }
  }
}
