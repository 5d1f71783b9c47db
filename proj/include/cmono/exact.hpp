#ifndef CMONO_EXACT_HPP
#define CMONO_EXACT_HPP

// Exact accumulation of integer-weighted sums of doubles.
//
// Every finite double is a dyadic rational mant * 2^exp. Alternating binomial
// sums of moments cancel catastrophically in floating point, so they are
// accumulated here as big integers and rounded to double exactly once.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cmono/errors.hpp"

namespace cmono {

/// Largest n for which binomial(n, k) is tabulated exactly.
inline constexpr int kMaxBinomialOrder = 60;

/// Exact C(n, k) for 0 <= k <= n <= 60.
inline std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > kMaxBinomialOrder || k < 0 || k > n) {
    throw UsageError("binomial: indices out of range (n=" + std::to_string(n) +
                     ", k=" + std::to_string(k) + ")");
  }
  static const auto table = [] {
    std::vector<std::vector<std::uint64_t>> rows(kMaxBinomialOrder + 1);
    for (int i = 0; i <= kMaxBinomialOrder; ++i) {
      rows[i].assign(i + 1, 1);
      for (int j = 1; j < i; ++j) rows[i][j] = rows[i - 1][j - 1] + rows[i - 1][j];
    }
    return rows;
  }();
  return table[n][k];
}

/// Exact sum of terms coef * value with integer coefficients and double values.
class DyadicSum {
 public:
  using BigInt = boost::multiprecision::cpp_int;

  DyadicSum() = default;

  void add(const BigInt& coef, double value) {
    if (value == 0.0 || coef == 0) return;
    if (!std::isfinite(value)) {
      throw DomainError("DyadicSum: non-finite term");
    }
    int exp = 0;
    const double frac = std::frexp(value, &exp);  // value = frac * 2^exp, 0.5 <= |frac| < 1
    const auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
    add_scaled(coef * mant, exp - 53);
  }

  void add(std::int64_t coef, double value) { add(BigInt(coef), value); }

  /// Adds coef times another exact sum.
  void add(const BigInt& coef, const DyadicSum& other) {
    if (other.mant_ == 0 || coef == 0) return;
    add_scaled(coef * other.mant_, other.exp_);
  }

  [[nodiscard]] bool is_zero() const { return mant_ == 0; }

  /// Correctly rounded (to nearest) conversion, barring subnormal results.
  [[nodiscard]] double to_double() const {
    if (mant_ == 0) return 0.0;
    const bool negative = mant_ < 0;
    BigInt mag = negative ? BigInt(-mant_) : mant_;
    int shift = 0;
    const auto top_bit = static_cast<int>(boost::multiprecision::msb(mag));
    if (top_bit > 62) {
      shift = top_bit - 62;
      const bool sticky = (mag & ((BigInt(1) << shift) - 1)) != 0;
      mag >>= shift;
      if (sticky) mag |= 1;
    }
    const auto small = static_cast<std::uint64_t>(mag);
    const double r = std::ldexp(static_cast<double>(small), shift + exp_);
    return negative ? -r : r;
  }

 private:
  void add_scaled(const BigInt& mant, int exp) {
    if (mant_ == 0) {
      mant_ = mant;
      exp_ = exp;
      return;
    }
    if (exp >= exp_) {
      mant_ += mant << (exp - exp_);
    } else {
      mant_ = (mant_ << (exp_ - exp)) + mant;
      exp_ = exp;
    }
  }

  BigInt mant_{0};
  int exp_{0};
};

}  // namespace cmono

#endif  // CMONO_EXACT_HPP
