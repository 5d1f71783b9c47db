#ifndef CMONO_ERRORS_HPP
#define CMONO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cmono {

/// Argument outside the mathematical domain of a function (x <= 0, m <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An intermediate quantity would leave the double exponent range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Caller misuse: empty grids, too few samples, order caps.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file or text.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A quadrature could not reach its requested accuracy.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cmono

#endif  // CMONO_ERRORS_HPP
