#include "nestderiv/signed_log.hpp"

#include <cfloat>
#include <cmath>
#include <utility>

namespace nestderiv {

SignedLog::SignedLog(int sign, Real logmag) : sign_(sign > 0 ? 1 : (sign < 0 ? -1 : 0)), logmag_(std::move(logmag)) {
  if (sign_ == 0) logmag_ = 0;
}

SignedLog SignedLog::from_real(const Real& x) {
  if (x == 0) return {};
  return SignedLog(x > 0 ? 1 : -1, bmp::log(bmp::abs(x)));
}

SignedLog SignedLog::from_rational(const Rational& q) {
  if (q == 0) return {};
  Real num = nestderiv::to_real(Rational(bmp::abs(bmp::numerator(q))));
  Real den = nestderiv::to_real(Rational(bmp::denominator(q)));
  return SignedLog(q > 0 ? 1 : -1, bmp::log(num) - bmp::log(den));
}

Real SignedLog::log10_mag() const { return logmag_ / bmp::log(Real(10)); }

Real SignedLog::to_real() const {
  if (sign_ == 0) return 0;
  Real m = bmp::exp(logmag_);
  return sign_ > 0 ? m : Real(-m);
}

bool SignedLog::fits_double() const {
  if (sign_ == 0) return true;
  // Stay inside the normal double range.
  return logmag_ < Real(std::log(DBL_MAX)) && logmag_ > Real(std::log(DBL_MIN));
}

SignedLog SignedLog::pow(long long k) const {
  if (k == 0) return SignedLog(1, Real(0));
  if (sign_ == 0) {
    if (k < 0) throw MathError("zero to a negative power");
    return {};
  }
  int s = (sign_ < 0 && (k % 2 != 0)) ? -1 : 1;
  return SignedLog(s, logmag_ * Real(k));
}

SignedLog operator*(const SignedLog& a, const SignedLog& b) {
  if (a.sign_ == 0 || b.sign_ == 0) return {};
  return SignedLog(a.sign_ * b.sign_, a.logmag_ + b.logmag_);
}

SignedLog operator/(const SignedLog& a, const SignedLog& b) {
  if (b.sign_ == 0) throw MathError("division by zero");
  if (a.sign_ == 0) return {};
  return SignedLog(a.sign_ * b.sign_, a.logmag_ - b.logmag_);
}

SignedLog operator+(const SignedLog& a, const SignedLog& b) {
  if (a.sign_ == 0) return b;
  if (b.sign_ == 0) return a;
  const SignedLog& big = a.logmag_ >= b.logmag_ ? a : b;
  const SignedLog& small = a.logmag_ >= b.logmag_ ? b : a;
  Real gap = small.logmag_ - big.logmag_;  // <= 0
  if (a.sign_ == b.sign_) return SignedLog(big.sign_, big.logmag_ + bmp::log1p(bmp::exp(gap)));
  if (gap == 0) return {};
  return SignedLog(big.sign_, big.logmag_ + bmp::log(-bmp::expm1(gap)));
}

Real relative_error(const SignedLog& a, const SignedLog& b) {
  if (b.is_zero()) return bmp::abs(a.to_real());
  if (a.is_zero()) return 1;
  Real d = a.logmag() - b.logmag();
  if (a.sign() == b.sign()) return bmp::abs(bmp::expm1(d));
  return 1 + bmp::exp(d);
}

std::string format_signed_log(const SignedLog& v, int digits) {
  if (v.is_zero()) return format_real(Real(0), digits);
  Real l10 = v.log10_mag();
  Real e = bmp::floor(l10);
  Real mant = bmp::pow(Real(10), l10 - e);
  // Rounding the mantissa to `digits` places can carry it up to 10.
  std::string m = format_real(mant, digits);
  long long exp10 = e.convert_to<long long>();
  auto epos = m.find('e');
  exp10 += std::stoll(m.substr(epos + 1));
  m.resize(epos);
  std::string out = (v.sign() < 0 ? "-" : "") + m + "e";
  out += (exp10 < 0 ? "-" : "+");
  std::string digits_e = std::to_string(exp10 < 0 ? -exp10 : exp10);
  if (digits_e.size() < 2) digits_e.insert(0, "0");
  return out + digits_e;
}

}  // namespace nestderiv
