#pragma once

#include <string>

#include "nestderiv/numeric.hpp"

namespace nestderiv {

/// A real number stored as sign and natural log of its magnitude, so factorial-size
/// quantities can be multiplied and summed without overflow. `logmag` is meaningless
/// when `sign == 0`.
class SignedLog {
 public:
  SignedLog() = default;
  SignedLog(int sign, Real logmag);

  static SignedLog zero() { return {}; }
  static SignedLog from_real(const Real& x);
  static SignedLog from_rational(const Rational& q);
  /// e^{logmag} with sign +1.
  static SignedLog from_log(Real logmag) { return SignedLog(1, std::move(logmag)); }

  int sign() const { return sign_; }
  const Real& logmag() const { return logmag_; }
  Real log10_mag() const;
  bool is_zero() const { return sign_ == 0; }

  /// Plain value; may be 0 or infinite only if the working float range is exceeded.
  Real to_real() const;
  /// True when the value fits a double without overflow or underflow to zero.
  bool fits_double() const;

  SignedLog abs() const { return sign_ == 0 ? *this : SignedLog(1, logmag_); }
  SignedLog operator-() const { return sign_ == 0 ? *this : SignedLog(-sign_, logmag_); }
  SignedLog pow(long long k) const;

  friend SignedLog operator*(const SignedLog& a, const SignedLog& b);
  friend SignedLog operator/(const SignedLog& a, const SignedLog& b);
  friend SignedLog operator+(const SignedLog& a, const SignedLog& b);
  friend SignedLog operator-(const SignedLog& a, const SignedLog& b) { return a + (-b); }
  SignedLog& operator*=(const SignedLog& o) { return *this = *this * o; }
  SignedLog& operator+=(const SignedLog& o) { return *this = *this + o; }

  friend bool operator==(const SignedLog& a, const SignedLog& b) {
    return a.sign_ == b.sign_ && (a.sign_ == 0 || a.logmag_ == b.logmag_);
  }

 private:
  int sign_ = 0;
  Real logmag_ = 0;
};

/// |a/b - 1| evaluated in log space; |a| when b is zero.
Real relative_error(const SignedLog& a, const SignedLog& b);

/// Scientific decimal string of arbitrary exponent range, e.g. "-1.2345678901234567890e-2210".
std::string format_signed_log(const SignedLog& v, int digits = 20);

}  // namespace nestderiv
