#ifndef RECURPADE_BUSLAEV_HPP
#define RECURPADE_BUSLAEV_HPP

#include <vector>

#include "recurpade/radius.hpp"
#include "recurpade/recurrence.hpp"

namespace recurpade {

// Outcome of the circle classification: R_0(f) matched to a circle of zeros
// of alpha, the divisor beta built from that circle, and the reduced order
// ell = deg(beta).
template <class R>
struct BuslaevClassification {
  RadiusEstimate R0;
  std::vector<RootSet::Root> circle_zeros;
  Polynomial<R> beta;
  int ell = 0;
};

// beta(z) = prod (1 - z/zeta) over the given zeros with multiplicity.
template <class R>
Polynomial<R> circle_divisor(const std::vector<RootSet::Root>& zeros) {
  Polynomial<R> beta = Polynomial<R>::one();
  for (const auto& z : zeros) {
    Complex<R> zeta = root_in_field<R>(z);
    Polynomial<R> factor(std::vector<Complex<R>>{Complex<R>(R(1)), -(Complex<R>(R(1)) / zeta)});
    for (int i = 0; i < z.multiplicity; ++i) beta = beta * factor;
  }
  return beta;
}

template <class R>
BuslaevClassification<R> buslaev_classify(const Recurrence<R>& rec, const Solution<R>& f,
                                          const PrecisionContext& ctx, double circle_tol = 1e-3) {
  RootSet alpha_zeros = poly_roots(alpha_limit_poly(rec), ctx);

  auto try_match = [&](RadiusMethod method) -> std::optional<BuslaevClassification<R>> {
    RadiusEstimate est = estimate_radius(f.series, method, ctx);
    // nearest circle in relative terms
    double best_rel = std::numeric_limits<double>::infinity();
    double best_r = 0;
    for (const auto& root : alpha_zeros.roots) {
      double r = abs_double(root.location);
      if (r == 0) continue;
      double rel = std::abs(est.value - r) / r;
      if (rel < best_rel) {
        best_rel = rel;
        best_r = r;
      }
    }
    if (best_rel > circle_tol) return std::nullopt;
    BuslaevClassification<R> out;
    out.R0 = est;
    for (const auto& root : alpha_zeros.roots) {
      double r = abs_double(root.location);
      if (r > 0 && std::abs(r - best_r) <= circle_tol * best_r) out.circle_zeros.push_back(root);
    }
    out.beta = circle_divisor<R>(out.circle_zeros);
    out.ell = 0;
    for (const auto& z : out.circle_zeros) out.ell += z.multiplicity;
    return out;
  };

  if (auto hit = try_match(RadiusMethod::RatioTest)) return *hit;
  if (auto hit = try_match(RadiusMethod::RootTestRegression)) return *hit;
  throw ComputeError(Errc::NoMatchingCircle,
                     "no zero of alpha within tolerance of the estimated radius of convergence");
}

}  // namespace recurpade

#endif
