#ifndef RECURPADE_TEST_UTIL_HPP
#define RECURPADE_TEST_UTIL_HPP

#include <initializer_list>
#include <string>
#include <vector>

#include "recurpade/polynomial.hpp"
#include "recurpade/power_series.hpp"

namespace rp = recurpade;

using Q = rp::Rational;
using F = rp::BigFloat;

inline rp::CxQ cq(const std::string& re, const std::string& im = "0") {
  return {rp::parse_rational(re), rp::parse_rational(im)};
}

template <class R>
rp::Complex<R> cx(const std::string& re, const std::string& im = "0") {
  return {rp::parse_real<R>(re), rp::parse_real<R>(im)};
}

template <class R>
rp::Polynomial<R> poly(std::initializer_list<std::string> coeffs) {
  std::vector<rp::Complex<R>> c;
  for (const auto& s : coeffs) c.push_back(cx<R>(s));
  return rp::Polynomial<R>(std::move(c));
}

template <class R>
std::vector<rp::Complex<R>> scalars(std::initializer_list<std::string> vals) {
  std::vector<rp::Complex<R>> c;
  for (const auto& s : vals) c.push_back(cx<R>(s));
  return c;
}

inline double dist(const rp::CxF& a, const rp::CxF& b) { return rp::to_double(rp::abs_bf(a - b)); }

#endif
