#ifndef RECURPADE_RADIUS_HPP
#define RECURPADE_RADIUS_HPP

#include <cmath>
#include <limits>
#include <vector>

#include "recurpade/detail/linfit.hpp"
#include "recurpade/power_series.hpp"

namespace recurpade {

enum class RadiusMethod { RatioTest, RootTestRegression };

inline const char* radius_method_name(RadiusMethod m) {
  return m == RadiusMethod::RatioTest ? "RatioTest" : "RootTestRegression";
}

struct RadiusEstimate {
  double value = 0;
  RadiusMethod method = RadiusMethod::RatioTest;
  double confidence_width = 0;
  int first_n = 0;  // samples_used
  int last_n = 0;
};

namespace detail {

// log|f_n| with rounding-level near-zeros blanked out (-inf), so the
// magnitude fits are not polluted by cancellation noise.
template <class R>
std::vector<double> coeff_log_magnitudes(const PowerSeries<R>& f, const PrecisionContext& ctx) {
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(f.coeffs.size(), ninf);
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    if (!f.coeffs[i].is_zero()) logs[i] = log_abs(f.coeffs[i]);
  if (!ctx.exact()) {
    double lz = ctx.zero_threshold_log10() * 2.302585092994046;
    for (std::size_t i = 0; i + 1 < logs.size(); ++i) {
      double neighbor = std::max(i > 0 ? logs[i - 1] : ninf, logs[i + 1]);
      if (std::isfinite(neighbor) && logs[i] < neighbor + lz) logs[i] = ninf;
    }
  }
  return logs;
}

inline bool tail_all_blank(const std::vector<double>& logs) {
  std::size_t lo = logs.size() / 2;
  for (std::size_t i = lo; i < logs.size(); ++i)
    if (std::isfinite(logs[i])) return false;
  return true;
}

}  // namespace detail

// Radius of convergence from the coefficient tail.
//  RatioTest: last-quarter geometric averaging of f_{n+1}/f_n, i.e.
//    |f_b/f_a|^(1/(b-a)) over the endpoints of the window.
//  RootTestRegression: exp(-slope) of the least-squares line of log|f_n|
//    against n over the last half.
template <class R>
RadiusEstimate estimate_radius(const PowerSeries<R>& f, RadiusMethod method, const PrecisionContext& ctx) {
  int N = f.truncation_order();
  if (N + 1 < 32) throw ComputeError(Errc::InsufficientData, "need at least 32 coefficients");
  std::vector<double> logs = detail::coeff_log_magnitudes(f, ctx);
  if (detail::tail_all_blank(logs))
    throw ComputeError(Errc::AllZeroTail, "tail coefficients vanish; polynomial or trivial data");

  RadiusEstimate est;
  est.method = method;
  if (method == RadiusMethod::RatioTest) {
    int lo = N - N / 4;
    int a = lo, b = N;
    while (a <= N && !std::isfinite(logs[static_cast<std::size_t>(a)])) ++a;
    while (b >= a && !std::isfinite(logs[static_cast<std::size_t>(b)])) --b;
    if (b - a < 4) throw ComputeError(Errc::InsufficientData, "too few usable ratios in the tail window");
    auto geo = [&](int i, int j) {
      return std::exp(-(logs[static_cast<std::size_t>(j)] - logs[static_cast<std::size_t>(i)]) / (j - i));
    };
    int c = (a + b) / 2;
    while (c > a && !std::isfinite(logs[static_cast<std::size_t>(c)])) --c;
    est.value = geo(a, b);
    est.first_n = a;
    est.last_n = b;
    double w = 0;
    if (c > a && c < b) w = std::max(std::abs(geo(a, c) - est.value), std::abs(geo(c, b) - est.value));
    est.confidence_width = w;
  } else {
    int lo = N / 2;
    std::vector<double> xs, ys;
    for (int n = lo; n <= N; ++n) {
      if (std::isfinite(logs[static_cast<std::size_t>(n)])) {
        xs.push_back(static_cast<double>(n));
        ys.push_back(logs[static_cast<std::size_t>(n)]);
      }
    }
    if (xs.size() < 8) throw ComputeError(Errc::InsufficientData, "too few usable coefficients in the tail half");
    detail::LinFit fit = detail::linear_fit(xs, ys);
    est.value = std::exp(-fit.slope);
    est.confidence_width = est.value * fit.stderr_slope;
    est.first_n = static_cast<int>(xs.front());
    est.last_n = static_cast<int>(xs.back());
  }
  if (!(est.value > 0) || !std::isfinite(est.value))
    throw ComputeError(Errc::InsufficientData, "radius estimate not finite/positive");
  return est;
}

// Complex limit of f_{n+1}/f_n, averaged over the last quarter of usable
// indices.  Meaningful when a single simple zero dominates (Poincare).
template <class R>
CxF ratio_limit(const PowerSeries<R>& f, const PrecisionContext& ctx) {
  int N = f.truncation_order();
  if (N + 1 < 32) throw ComputeError(Errc::InsufficientData, "need at least 32 coefficients");
  std::vector<double> logs = detail::coeff_log_magnitudes(f, ctx);
  if (detail::tail_all_blank(logs))
    throw ComputeError(Errc::AllZeroTail, "tail coefficients vanish; polynomial or trivial data");
  int lo = N - N / 4;
  CxF sum;
  int count = 0;
  for (int n = lo; n < N; ++n) {
    if (!std::isfinite(logs[static_cast<std::size_t>(n)]) || !std::isfinite(logs[static_cast<std::size_t>(n + 1)]))
      continue;
    CxF num = to_bigfloat_cx(f.coeff(n + 1)), den = to_bigfloat_cx(f.coeff(n));
    sum += num / den;
    ++count;
  }
  if (count < 4) throw ComputeError(Errc::InsufficientData, "too few usable ratios");
  return sum / CxF{BigFloat(count)};
}

}  // namespace recurpade

#endif
