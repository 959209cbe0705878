#ifndef RECURPADE_SCALAR_HPP
#define RECURPADE_SCALAR_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "recurpade/errors.hpp"

namespace recurpade {

namespace mp = boost::multiprecision;

// Expression templates off: plain value semantics everywhere.
using Rational = mp::number<mp::gmp_rational, mp::et_off>;
using BigFloat = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;
using BigInt = mp::number<mp::gmp_int, mp::et_off>;

template <class R>
inline constexpr bool is_exact_field = std::is_same_v<R, Rational>;

// ---------------------------------------------------------------------------
// Complex numbers over an arbitrary real field.  std::complex is only
// specified for builtin floating point, so we carry our own.

template <class R>
struct Complex {
  R re{};
  R im{};

  Complex() = default;
  Complex(R r) : re(std::move(r)) {}
  Complex(R r, R i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  Complex conj() const { return {re, R(-im)}; }
  R norm() const { return re * re + im * im; }  // |z|^2, exact for rationals

  Complex operator-() const { return {R(-re), R(-im)}; }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    R r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    R d = o.norm();
    if (d == 0) throw std::domain_error("Complex division by zero");
    R r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = std::move(r);
    return *this;
  }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }
};

using CxQ = Complex<Rational>;
using CxF = Complex<BigFloat>;

template <class T>
T int_pow(const T& base, long e) {
  if (e < 0) throw std::invalid_argument("int_pow: negative exponent");
  T acc(1), b = base;
  unsigned long n = static_cast<unsigned long>(e);
  while (n) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Field conversions and magnitude helpers.  Magnitudes always go through
// MPFR so huge exponents (|f_n| ~ 3^800) never overflow a double.

inline BigFloat to_bigfloat(const Rational& q) { return BigFloat(q); }
inline BigFloat to_bigfloat(const BigFloat& x) { return x; }

inline CxF to_bigfloat_cx(const CxQ& z) { return {BigFloat(z.re), BigFloat(z.im)}; }
inline CxF to_bigfloat_cx(const CxF& z) { return z; }

// Exact: every finite BigFloat is a dyadic rational.
inline Rational rational_from_bigfloat(const BigFloat& x) { return Rational(x); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(const BigFloat& x) { return x.convert_to<double>(); }

template <class R>
BigFloat abs_bf(const Complex<R>& z) {
  if (z.im == 0) return abs(to_bigfloat(z.re));
  if (z.re == 0) return abs(to_bigfloat(z.im));
  return sqrt(to_bigfloat(z.norm()));
}

template <class R>
double abs_double(const Complex<R>& z) {
  return to_double(abs_bf(z));
}

// Natural log of |z| as a double; -inf for zero.
template <class R>
double log_abs(const Complex<R>& z) {
  if (z.is_zero()) return -std::numeric_limits<double>::infinity();
  BigFloat n = to_bigfloat(z.norm());
  return 0.5 * to_double(log(n));
}

// ---------------------------------------------------------------------------
// Precision policy.  ExactRational: ring operations are exact and the zero
// threshold is literally 0.  BigFloat: MPFR reals at float_precision_bits,
// with zero_threshold governing rank/degeneracy decisions.  In exact mode
// float_precision_bits is still meaningful: it is the working precision of
// the approximate subroutines (root finding, radius estimation).

class PrecisionContext {
 public:
  enum class Mode { ExactRational, BigFloat };

  static PrecisionContext exact_rational(unsigned working_bits = 256) {
    PrecisionContext ctx;
    ctx.mode_ = Mode::ExactRational;
    ctx.bits_ = check_bits(working_bits);
    ctx.apply();
    ctx.zero_threshold_ = 0;
    ctx.zero_threshold_log10_ = -std::numeric_limits<double>::infinity();
    return ctx;
  }

  // zero_threshold_log10: override for the degenerate-decision knob;
  // default is one third of the available decimal digits.
  static PrecisionContext big_float(unsigned bits = 256, double zero_threshold_log10 = 0) {
    PrecisionContext ctx;
    ctx.mode_ = Mode::BigFloat;
    ctx.bits_ = check_bits(bits);
    ctx.apply();
    double digits10 = bits * 0.30102999566398119521;
    ctx.zero_threshold_log10_ = (zero_threshold_log10 < 0) ? zero_threshold_log10 : -digits10 / 3.0;
    ctx.zero_threshold_ = pow(BigFloat(10), BigFloat(ctx.zero_threshold_log10_));
    return ctx;
  }

  Mode mode() const { return mode_; }
  bool exact() const { return mode_ == Mode::ExactRational; }
  unsigned float_precision_bits() const { return bits_; }
  const BigFloat& zero_threshold() const { return zero_threshold_; }
  double zero_threshold_log10() const { return zero_threshold_log10_; }

  // Residual tolerance of the iterative root refiner: 10^-(bits/4).
  double root_residual_tol_log10() const { return -static_cast<double>(bits_) / 4.0; }

  // Make this context's precision the thread's MPFR default.
  void apply() const {
    unsigned digits10 = static_cast<unsigned>(bits_ * 0.30102999566398119521);
    BigFloat::default_precision(digits10);
  }

  bool negligible(const BigFloat& magnitude, const BigFloat& scale) const {
    if (exact()) return magnitude == 0;
    return magnitude <= zero_threshold_ * scale;
  }

  template <class R>
  bool treat_as_zero(const Complex<R>& v, const BigFloat& scale) const {
    if constexpr (is_exact_field<R>) {
      (void)scale;
      return v.is_zero();
    } else {
      return negligible(abs(v.re) + abs(v.im), scale);
    }
  }

 private:
  static unsigned check_bits(unsigned bits) {
    if (bits < 64) throw std::invalid_argument("float_precision_bits must be >= 64");
    return bits;
  }

  Mode mode_ = Mode::BigFloat;
  unsigned bits_ = 256;
  BigFloat zero_threshold_;
  double zero_threshold_log10_ = 0;
};

// ---------------------------------------------------------------------------
// Scalar parsing / formatting.  Accepted forms: "p/q", integers, and decimal
// strings with optional exponent.  Rationals round-trip decimals exactly.

inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty scalar string");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rational(num) / Rational(den);
  }
  // decimal: sign, digits, optional fraction, optional exponent
  std::size_t pos = 0;
  bool neg = false;
  if (s[pos] == '+' || s[pos] == '-') neg = (s[pos] == '-'), ++pos;
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false, seen_digit = false;
  for (; pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.'); ++pos) {
    if (s[pos] == '.') {
      if (seen_dot) throw std::invalid_argument("malformed scalar '" + s + "'");
      seen_dot = true;
    } else {
      digits += s[pos];
      seen_digit = true;
      if (seen_dot) ++frac_digits;
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed scalar '" + s + "'");
  long exp10 = 0;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    exp10 = std::stol(s.substr(pos + 1));
    pos = s.size();
  }
  if (pos != s.size()) throw std::invalid_argument("malformed scalar '" + s + "'");
  Rational v(BigInt(digits.empty() ? "0" : digits));
  long shift = exp10 - frac_digits;
  if (shift > 0) v *= Rational(int_pow(BigInt(10), shift));
  if (shift < 0) v /= Rational(int_pow(BigInt(10), -shift));
  return neg ? Rational(-v) : v;
}

template <class R>
R parse_real(const std::string& s);

template <>
inline Rational parse_real<Rational>(const std::string& s) {
  return parse_rational(s);
}

template <>
inline BigFloat parse_real<BigFloat>(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    BigFloat num(s.substr(0, slash));
    BigFloat den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return num / den;
  }
  return BigFloat(s);
}

inline std::string format_real(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

inline std::string format_real(const BigFloat& x) {
  return x.str(0, std::ios_base::scientific);
}

}  // namespace recurpade

#endif
