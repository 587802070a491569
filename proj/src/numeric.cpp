#include "nestderiv/numeric.hpp"

#include <cctype>
#include <ios>

#include <boost/math/constants/constants.hpp>

#include <gmp.h>
#include <mpfr.h>

namespace nestderiv {

namespace {

unsigned g_precision_bits = 0;

unsigned digits10_for_bits(unsigned bits) {
  // Boost maps digits10 -> bits as d*1000/301 + (1 or 2); pick the smallest d reaching `bits`.
  unsigned d = 1;
  while (bmp::detail::digits10_2_2(d) < bits) ++d;
  return d;
}

struct PrecisionInit {
  PrecisionInit() {
    mpfr_set_emax(mpfr_get_emax_max());
    mpfr_set_emin(mpfr_get_emin_min());
    set_precision_bits(kDefaultPrecisionBits);
  }
};
const PrecisionInit g_init;

}  // namespace

void set_precision_bits(unsigned bits) {
  if (bits < 64) throw UsageError("precision-bits must be >= 64");
  g_precision_bits = bits;
  Real::default_precision(digits10_for_bits(bits));
}

unsigned precision_bits() { return g_precision_bits; }

Rational parse_rational(std::string_view text) {
  auto fail = [&] { return UsageError("malformed number: '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (!is_integer(num) || !is_integer(den)) throw fail();
    if (den == 0) throw UsageError("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
  std::string digits;
  long long scale = 0;  // value = digits * 10^scale
  bool seen_point = false;
  bool any_digit = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      any_digit = true;
      if (seen_point) --scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw fail();
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw fail();
    ++i;
    std::string exp_text(text.substr(i));
    if (exp_text.empty()) throw fail();
    std::size_t used = 0;
    long long e = 0;
    try {
      e = std::stoll(exp_text, &used);
    } catch (const std::exception&) {
      throw fail();
    }
    if (used != exp_text.size() || e > 100000 || e < -100000) throw fail();
    scale += e;
  }
  // Leading zeros would make the GMP parser read octal.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  Rational value{Integer(digits)};
  Integer ten = 10;
  if (scale > 0) value *= Rational(bmp::pow(ten, static_cast<unsigned>(scale)));
  if (scale < 0) value /= Rational(bmp::pow(ten, static_cast<unsigned>(-scale)));
  return negative ? Rational(-value) : value;
}

Real to_real(const Rational& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
  return r;
}

Rational to_rational(const Real& x) {
  if (!bmp::isfinite(x)) throw MathError("cannot convert non-finite value to rational");
  if (x == 0) return Rational(0);
  mpz_t mant;
  mpz_init(mant);
  mpfr_exp_t e = mpfr_get_z_2exp(mant, x.backend().data());
  Rational q{Integer(mant)};
  mpz_clear(mant);
  Integer two = 2;
  if (e > 0) q *= Rational(bmp::pow(two, static_cast<unsigned>(e)));
  if (e < 0) q /= Rational(bmp::pow(two, static_cast<unsigned>(-e)));
  return q;
}

std::string format_rational(const Rational& q) { return q.str(); }

std::string format_real(const Real& x, int digits) {
  return x.str(digits - 1, std::ios_base::scientific);
}

bool is_integer(const Rational& q) { return bmp::denominator(q) == 1; }

Real pi() { return boost::math::constants::pi<Real>(); }

}  // namespace nestderiv
