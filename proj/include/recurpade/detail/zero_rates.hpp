#ifndef RECURPADE_DETAIL_ZERO_RATES_HPP
#define RECURPADE_DETAIL_ZERO_RATES_HPP

#include <cmath>
#include <vector>

#include "recurpade/detail/linfit.hpp"
#include "recurpade/scalar.hpp"

namespace recurpade {

enum class RateClass { Geometric, Subgeometric, Undetermined };

inline const char* rate_class_name(RateClass c) {
  switch (c) {
    case RateClass::Geometric: return "Geometric";
    case RateClass::Subgeometric: return "Subgeometric";
    case RateClass::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

struct RateFit {
  RateClass rate = RateClass::Undetermined;
  double theta = 0;  // fitted ratio for the geometric class
  double r2 = 0;
  int points = 0;
};

namespace detail {

// Classify the decay of a distance sequence d_n from the regression of
// log d_n on n.  Distances already at the convergence floor count as
// geometric with theta ~ 0 when they dominate the window.
//   geometric:     slope <= log 0.95 with R^2 >= 0.9
//   subgeometric:  slope in [log 0.999, 0]
inline RateFit classify_rate(const std::vector<double>& ns, const std::vector<double>& log_dists,
                             int converged_points) {
  RateFit out;
  int usable = static_cast<int>(ns.size());
  if (converged_points > usable) {
    out.rate = RateClass::Geometric;
    out.theta = 0;
    out.points = converged_points;
    return out;
  }
  if (usable < 6) {
    if (converged_points >= 6) {
      out.rate = RateClass::Geometric;
      out.theta = 0;
      out.points = converged_points;
    }
    return out;
  }
  LinFit fit = linear_fit(ns, log_dists);
  out.r2 = fit.r2;
  out.points = usable;
  const double geo_slope = std::log(0.95);
  const double sub_lo = std::log(0.999);
  if (fit.slope <= geo_slope && fit.r2 >= 0.9) {
    out.rate = RateClass::Geometric;
    out.theta = std::exp(fit.slope);
  } else if (fit.slope >= sub_lo && fit.slope <= 0) {
    out.rate = RateClass::Subgeometric;
    out.theta = std::exp(fit.slope);
  }
  return out;
}

}  // namespace detail
}  // namespace recurpade

#endif
