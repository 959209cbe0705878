#ifndef RECURPADE_POLYNOMIAL_HPP
#define RECURPADE_POLYNOMIAL_HPP

#include <utility>
#include <vector>

#include "recurpade/scalar.hpp"

namespace recurpade {

// Dense polynomial, coefficients in ascending degree order.  The trailing
// coefficient is nonzero; the zero polynomial is canonically the empty
// coefficient list (degree() == -1).
template <class R>
class Polynomial {
 public:
  Polynomial() = default;

  explicit Polynomial(std::vector<Complex<R>> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial zero() { return Polynomial(); }
  static Polynomial one() { return constant(Complex<R>(R(1))); }
  static Polynomial constant(Complex<R> v) { return Polynomial(std::vector<Complex<R>>{std::move(v)}); }

  static Polynomial monomial(int degree, Complex<R> coeff = Complex<R>(R(1))) {
    std::vector<Complex<R>> c(static_cast<std::size_t>(degree) + 1);
    c.back() = std::move(coeff);
    return Polynomial(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  const std::vector<Complex<R>>& coeffs() const { return c_; }

  Complex<R> coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return Complex<R>();
    return c_[static_cast<std::size_t>(i)];
  }

  Complex<R> leading() const { return is_zero() ? Complex<R>() : c_.back(); }

  Complex<R> eval(const Complex<R>& z) const {
    Complex<R> acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return zero();
    std::vector<Complex<R>> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Complex<R>(R(static_cast<long>(i)));
    return Polynomial(std::move(d));
  }

  // z^m * p(1/z); m defaults to deg(p).  This is the alpha <-> char-poly
  // reversal: the zeros of the two are reciprocal.
  Polynomial reversed(int m = -1) const {
    if (is_zero()) return zero();
    if (m < 0) m = degree();
    std::vector<Complex<R>> r(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= degree() && i <= m; ++i) r[static_cast<std::size_t>(m - i)] = coeff(i);
    return Polynomial(std::move(r));
  }

  Polynomial monic() const {
    if (is_zero()) return zero();
    Polynomial r = *this;
    Complex<R> lead = c_.back();
    for (auto& x : r.c_) x /= lead;
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex<R>> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
    return Polynomial(std::move(c));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex<R>> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
    return Polynomial(std::move(c));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    std::vector<Complex<R>> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }

  friend Polynomial operator*(const Polynomial& a, const Complex<R>& s) {
    std::vector<Complex<R>> c = a.c_;
    for (auto& x : c) x *= s;
    return Polynomial(std::move(c));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  std::vector<Complex<R>> c_;
};

// Synthetic division of p by (z - lambda): p = q*(z - lambda) + rem.
// Exact in the rational field.
template <class R>
std::pair<Polynomial<R>, Complex<R>> poly_deflate_linear(const Polynomial<R>& p, const Complex<R>& lambda) {
  if (p.is_zero() || p.degree() < 1) throw std::invalid_argument("poly_deflate_linear: degree must be >= 1");
  int n = p.degree();
  std::vector<Complex<R>> q(static_cast<std::size_t>(n));
  Complex<R> carry = p.coeff(n);
  for (int i = n - 1; i >= 0; --i) {
    q[static_cast<std::size_t>(i)] = carry;
    carry = p.coeff(i) + carry * lambda;
  }
  return {Polynomial<R>(std::move(q)), carry};
}

template <class R>
Polynomial<Rational> to_rational_poly(const Polynomial<R>& p) {
  static_assert(is_exact_field<R>, "only for rational polynomials");
  return p;
}

template <class R>
Polynomial<BigFloat> to_bigfloat_poly(const Polynomial<R>& p) {
  std::vector<CxF> c;
  c.reserve(p.coeffs().size());
  for (const auto& x : p.coeffs()) c.push_back(to_bigfloat_cx(x));
  return Polynomial<BigFloat>(std::move(c));
}

}  // namespace recurpade

#endif
