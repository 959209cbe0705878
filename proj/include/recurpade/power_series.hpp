#ifndef RECURPADE_POWER_SERIES_HPP
#define RECURPADE_POWER_SERIES_HPP

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "recurpade/polynomial.hpp"

namespace recurpade {

// Truncated Taylor series f_0..f_N with provenance of where the
// coefficients came from.
template <class R>
struct PowerSeries {
  struct Explicit {};
  struct RationalForm {
    Polynomial<R> num, den;
  };
  struct RecurrenceGenerated {
    std::string recurrence_id;
    std::vector<Complex<R>> init;
  };
  using Source = std::variant<Explicit, RationalForm, RecurrenceGenerated>;

  std::vector<Complex<R>> coeffs;
  Source source = Explicit{};

  PowerSeries() = default;
  explicit PowerSeries(std::vector<Complex<R>> c, Source s = Explicit{})
      : coeffs(std::move(c)), source(std::move(s)) {}

  int truncation_order() const { return static_cast<int>(coeffs.size()) - 1; }

  Complex<R> coeff(int n) const {
    if (n < 0 || n >= static_cast<int>(coeffs.size())) return Complex<R>();
    return coeffs[static_cast<std::size_t>(n)];
  }

  // (f - T_{n0}(f)) / z^{n0}: drop the first n0 coefficients.
  PowerSeries shifted(int n0) const {
    if (n0 <= 0) return *this;
    if (n0 >= static_cast<int>(coeffs.size())) return PowerSeries({}, Explicit{});
    return PowerSeries(std::vector<Complex<R>>(coeffs.begin() + n0, coeffs.end()), Explicit{});
  }
};

// First N+1 Taylor coefficients of num/den about 0 by long division.
template <class R>
PowerSeries<R> series_from_rational(const Polynomial<R>& num, const Polynomial<R>& den, int N) {
  if (N < 0) throw std::invalid_argument("series_from_rational: N must be >= 0");
  Complex<R> d0 = den.coeff(0);
  if (d0.is_zero())
    throw ComputeError(Errc::DenominatorVanishesAtOrigin, "den(0) = 0, no expansion about the origin");
  std::vector<Complex<R>> f(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) {
    Complex<R> acc = num.coeff(n);
    for (int k = 1; k <= n && k <= den.degree(); ++k) acc -= den.coeff(k) * f[static_cast<std::size_t>(n - k)];
    f[static_cast<std::size_t>(n)] = acc / d0;
  }
  return PowerSeries<R>(std::move(f), typename PowerSeries<R>::RationalForm{num, den});
}

// Truncated product f * p, cut at f's truncation order.
template <class R>
PowerSeries<R> series_poly_mul(const PowerSeries<R>& f, const Polynomial<R>& p) {
  std::vector<Complex<R>> g(f.coeffs.size());
  for (int j = 0; j < static_cast<int>(g.size()); ++j) {
    Complex<R> acc;
    for (int i = 0; i <= j && i <= p.degree(); ++i) acc += p.coeff(i) * f.coeff(j - i);
    g[static_cast<std::size_t>(j)] = acc;
  }
  return PowerSeries<R>(std::move(g), typename PowerSeries<R>::Explicit{});
}

template <class R>
PowerSeries<R> series_add(const PowerSeries<R>& a, const PowerSeries<R>& b) {
  std::size_t n = std::min(a.coeffs.size(), b.coeffs.size());
  std::vector<Complex<R>> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = a.coeffs[i] + b.coeffs[i];
  return PowerSeries<R>(std::move(c), typename PowerSeries<R>::Explicit{});
}

template <class R>
PowerSeries<R> series_scale(const PowerSeries<R>& a, const Complex<R>& s) {
  std::vector<Complex<R>> c = a.coeffs;
  for (auto& x : c) x *= s;
  return PowerSeries<R>(std::move(c), typename PowerSeries<R>::Explicit{});
}

}  // namespace recurpade

#endif
