#ifndef RECURPADE_DETAIL_LINFIT_HPP
#define RECURPADE_DETAIL_LINFIT_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace recurpade::detail {

struct LinFit {
  double slope = 0;
  double intercept = 0;
  double stderr_slope = 0;
  double r2 = 0;
  int points = 0;
};

inline LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need >= 2 points");
  std::size_t n = x.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) sx += x[i], sy += y[i];
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinFit fit;
  fit.points = static_cast<int>(n);
  if (sxx == 0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += r * r;
  }
  fit.r2 = (syy == 0) ? 1.0 : 1.0 - ssr / syy;
  fit.stderr_slope = (n > 2) ? std::sqrt((ssr / (n - 2)) / sxx) : 0.0;
  return fit;
}

}  // namespace recurpade::detail

#endif
