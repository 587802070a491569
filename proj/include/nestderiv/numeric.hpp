#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace nestderiv {

namespace bmp = boost::multiprecision;

/// Exact rational scalar (GMP).
using Rational = bmp::number<bmp::gmp_rational, bmp::et_off>;
/// Arbitrary-precision integer (GMP).
using Integer = bmp::number<bmp::gmp_int, bmp::et_off>;
/// Variable-precision binary float (MPFR). Precision is process-wide, see set_precision_bits().
using Real = bmp::number<bmp::mpfr_float_backend<0>, bmp::et_off>;

inline constexpr unsigned kDefaultPrecisionBits = 256;

/// Math failures: non-invertible series, caustics, missing roots, out-of-domain inputs.
class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside an instance's declared domain.
class DomainError : public MathError {
 public:
  using MathError::MathError;
};

/// Bad user input: unknown names, malformed literals, invalid flags.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sets the significand width of newly created Real values. Must be >= 64.
/// Not safe to call while other threads create Real values.
void set_precision_bits(unsigned bits);
unsigned precision_bits();

/// Parses "p/q", "-12", "0.125", "1e-3" exactly.
Rational parse_rational(std::string_view text);

Real to_real(const Rational& q);
inline Real to_real(const Real& x) { return x; }

/// Nearest rational to a Real (exact binary value).
Rational to_rational(const Real& x);

/// Exact textual form: "p/q" or "p".
std::string format_rational(const Rational& q);

/// Scientific decimal with `digits` significant digits, '.' decimal point.
std::string format_real(const Real& x, int digits = 20);

/// True when q is an integer.
bool is_integer(const Rational& q);

Real pi();

}  // namespace nestderiv
