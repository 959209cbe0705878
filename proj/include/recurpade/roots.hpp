#ifndef RECURPADE_ROOTS_HPP
#define RECURPADE_ROOTS_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "recurpade/polynomial.hpp"

namespace recurpade {

struct RootSolveOptions {
  int max_iterations = 200;
  double clustering_radius_rel = 1e-8;  // relative to max root modulus
};

// Roots with multiplicities.  Locations are always reported in working
// (MPFR) precision; `exact` is set when a root was reconstructed as a
// rational and verified exactly against the input polynomial.
struct RootSet {
  struct Root {
    CxF location;
    int multiplicity = 1;
    std::optional<CxQ> exact;
  };
  std::vector<Root> roots;
  double residual_bound = 0;

  int total_multiplicity() const {
    int s = 0;
    for (const auto& r : roots) s += r.multiplicity;
    return s;
  }
};

template <class R>
Complex<R> root_in_field(const RootSet::Root& root) {
  if constexpr (is_exact_field<R>) {
    if (root.exact) return *root.exact;
    return {rational_from_bigfloat(root.location.re), rational_from_bigfloat(root.location.im)};
  } else {
    return root.location;
  }
}

namespace detail {

// Best rational approximation of x by continued fractions. Candidates are
// only suggestions; callers must verify exactly before trusting them.
inline std::optional<Rational> snap_candidate(const BigFloat& x, double err_log10, const BigInt& max_den) {
  if (x == 0) return Rational(0);
  BigFloat target = abs(x);
  BigFloat err_tol = pow(BigFloat(10), BigFloat(err_log10)) * (target > 1 ? target : BigFloat(1));
  BigFloat v = x;
  BigInt p0(1), q0(0), p1, q1;  // convergents p1/q1
  bool first = true;
  for (int iter = 0; iter < 64; ++iter) {
    BigFloat fl = floor(v);
    BigInt a(fl.convert_to<BigInt>());
    BigInt p2 = first ? a : a * p1 + p0;
    BigInt q2 = first ? BigInt(1) : a * q1 + q0;
    if (!first) {
      p0 = p1;
      q0 = q1;
    }
    p1 = p2;
    q1 = q2;
    first = false;
    if (q1 > max_den) return std::nullopt;
    Rational cand = Rational(p1) / Rational(q1);
    if (abs(BigFloat(cand) - x) <= err_tol) return cand;
    BigFloat frac = v - fl;
    if (frac == 0) return std::nullopt;
    v = 1 / frac;
  }
  return std::nullopt;
}

inline std::optional<CxQ> snap_candidate_cx(const CxF& z, double err_log10) {
  BigInt max_den = int_pow(BigInt(10), 12);
  auto re = snap_candidate(z.re, err_log10, max_den);
  if (!re) return std::nullopt;
  auto im = snap_candidate(z.im, err_log10, max_den);
  if (!im) return std::nullopt;
  return CxQ{*re, *im};
}

// Aberth-Ehrlich simultaneous iteration on a monic polynomial.
// Residuals are measured against the coefficient-magnitude scale
// s(|z|) = sum |c_k| |z|^k, i.e. backward-error style.
inline std::vector<CxF> aberth(const Polynomial<BigFloat>& p, const PrecisionContext& ctx,
                               const RootSolveOptions& opt) {
  int d = p.degree();
  std::vector<CxF> z(static_cast<std::size_t>(d));
  BigFloat maxc(0);
  for (int k = 0; k < d; ++k) maxc = std::max(maxc, abs_bf(p.coeff(k)));
  BigFloat upper = 1 + maxc;
  BigFloat c0 = abs_bf(p.coeff(0));
  BigFloat others(0);
  for (int k = 1; k <= d; ++k) others = std::max(others, abs_bf(p.coeff(k)));
  BigFloat lower = c0 / (c0 + others);
  BigFloat r0 = sqrt(upper * lower);
  if (r0 == 0) r0 = 1;
  const double two_pi = 6.283185307179586476925286766559;
  for (int j = 0; j < d; ++j) {
    double ang = two_pi * j / d + 0.376;
    z[static_cast<std::size_t>(j)] = CxF{r0 * BigFloat(std::cos(ang)), r0 * BigFloat(std::sin(ang))};
  }

  BigFloat tol = pow(BigFloat(10), BigFloat(ctx.root_residual_tol_log10()));
  std::vector<bool> done(static_cast<std::size_t>(d), false);
  for (int it = 0; it < opt.max_iterations; ++it) {
    bool all_done = true;
    for (int i = 0; i < d; ++i) {
      if (done[static_cast<std::size_t>(i)]) continue;
      CxF zi = z[static_cast<std::size_t>(i)];
      // Horner for p, p' and the residual scale
      CxF pv, dv;
      BigFloat zmag = abs_bf(zi), scale(0);
      for (int k = d; k >= 0; --k) {
        dv = dv * zi + pv;
        pv = pv * zi + p.coeff(k);
        scale = scale * zmag + abs_bf(p.coeff(k));
      }
      if (abs_bf(pv) <= tol * scale) {
        done[static_cast<std::size_t>(i)] = true;
        continue;
      }
      all_done = false;
      if (dv.is_zero()) {  // nudge off a stationary point
        z[static_cast<std::size_t>(i)] += CxF{tol + BigFloat(1e-3), BigFloat(1e-3)};
        continue;
      }
      CxF newton = pv / dv;
      CxF repulse;
      for (int j = 0; j < d; ++j) {
        if (j == i) continue;
        CxF diff = zi - z[static_cast<std::size_t>(j)];
        if (diff.is_zero()) diff = CxF{BigFloat(1e-20), BigFloat(0)};
        repulse += CxF{BigFloat(1)} / diff;
      }
      CxF denom = CxF{BigFloat(1)} - newton * repulse;
      CxF step = denom.is_zero() ? newton : newton / denom;
      z[static_cast<std::size_t>(i)] = zi - step;
    }
    if (all_done) return z;
  }
  // final residual check
  for (int i = 0; i < d; ++i) {
    CxF zi = z[static_cast<std::size_t>(i)];
    CxF pv;
    BigFloat zmag = abs_bf(zi), scale(0);
    for (int k = d; k >= 0; --k) {
      pv = pv * zi + p.coeff(k);
      scale = scale * zmag + abs_bf(p.coeff(k));
    }
    if (abs_bf(pv) > tol * scale)
      throw ComputeError(Errc::DidNotConverge,
                         "root refiner residual above tolerance after " +
                             std::to_string(opt.max_iterations) + " iterations");
  }
  return z;
}

// Merge points within the clustering radius into multiple roots.
inline std::vector<RootSet::Root> cluster_points(const std::vector<CxF>& pts, double rel_radius) {
  std::size_t n = pts.size();
  BigFloat max_mod(0);
  for (const auto& z : pts) max_mod = std::max(max_mod, abs_bf(z));
  BigFloat radius = BigFloat(rel_radius) * (max_mod > 0 ? max_mod : BigFloat(1));
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (abs_bf(pts[i] - pts[j]) <= radius) parent[find(i)] = find(j);

  std::vector<RootSet::Root> out;
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    std::size_t rep = find(i);
    CxF centroid;
    int count = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (find(j) == rep) {
        centroid += pts[j];
        ++count;
        used[j] = true;
      }
    }
    centroid = centroid / CxF{BigFloat(count)};
    out.push_back(RootSet::Root{centroid, count, std::nullopt});
  }
  std::sort(out.begin(), out.end(), [](const RootSet::Root& a, const RootSet::Root& b) {
    BigFloat ma = abs_bf(a.location), mb = abs_bf(b.location);
    if (ma != mb) return ma < mb;
    if (a.location.re != b.location.re) return a.location.re < b.location.re;
    return a.location.im < b.location.im;
  });
  return out;
}

}  // namespace detail

// All complex roots of p with multiplicities.  Aberth-Ehrlich simultaneous
// iteration seeded on a coefficient-magnitude annulus; clusters merged into
// multiple roots.  For rational input, roots are additionally reconstructed
// by continued fractions and kept only when they verify exactly.
template <class R>
RootSet poly_roots(const Polynomial<R>& p, const PrecisionContext& ctx, RootSolveOptions opt = {}) {
  if (p.is_zero()) throw std::invalid_argument("poly_roots: zero polynomial");
  RootSet rs;
  if (p.degree() == 0) return rs;

  // factor out z^k
  int zeros_at_origin = 0;
  while (zeros_at_origin <= p.degree() && p.coeff(zeros_at_origin).is_zero()) ++zeros_at_origin;
  Polynomial<R> work = p;
  if (zeros_at_origin > 0) {
    std::vector<Complex<R>> c(p.coeffs().begin() + zeros_at_origin, p.coeffs().end());
    work = Polynomial<R>(std::move(c));
    RootSet::Root origin;
    origin.location = CxF{};
    origin.multiplicity = zeros_at_origin;
    if constexpr (is_exact_field<R>) origin.exact = CxQ{};
    rs.roots.push_back(origin);
  }
  if (work.degree() == 0) return rs;

  Polynomial<BigFloat> pf = to_bigfloat_poly(work).monic();
  std::vector<CxF> pts = detail::aberth(pf, ctx, opt);
  std::vector<RootSet::Root> clusters = detail::cluster_points(pts, opt.clustering_radius_rel);

  if constexpr (is_exact_field<R>) {
    // Snap cluster centroids to rationals, verify exactly, deflate exactly,
    // then re-solve whatever irrational part remains.
    Polynomial<Rational> rem = work.monic();
    std::vector<RootSet::Root> exact_roots;
    double snap_err_log10 = -static_cast<double>(ctx.float_precision_bits()) / 8.0;
    for (const auto& cl : clusters) {
      if (rem.degree() == 0) break;
      auto cand = detail::snap_candidate_cx(cl.location, snap_err_log10);
      if (!cand) continue;
      if (!rem.eval(*cand).is_zero()) continue;
      int mult = 0;
      while (rem.degree() >= 1) {
        auto [quot, r] = poly_deflate_linear(rem, *cand);
        if (!r.is_zero()) break;
        rem = quot;
        ++mult;
      }
      if (mult > 0) {
        RootSet::Root root;
        root.exact = *cand;
        root.location = to_bigfloat_cx(*cand);
        root.multiplicity = mult;
        exact_roots.push_back(root);
      }
    }
    if (rem.degree() >= 1) {
      Polynomial<BigFloat> remf = to_bigfloat_poly(rem);
      std::vector<CxF> rest = detail::aberth(remf, ctx, opt);
      for (auto& cl : detail::cluster_points(rest, opt.clustering_radius_rel)) exact_roots.push_back(cl);
    }
    clusters = std::move(exact_roots);
    std::sort(clusters.begin(), clusters.end(), [](const RootSet::Root& a, const RootSet::Root& b) {
      BigFloat ma = abs_bf(a.location), mb = abs_bf(b.location);
      if (ma != mb) return ma < mb;
      if (a.location.re != b.location.re) return a.location.re < b.location.re;
      return a.location.im < b.location.im;
    });
  }

  for (auto& cl : clusters) rs.roots.push_back(std::move(cl));

  // residual bound against the original polynomial
  Polynomial<BigFloat> orig = to_bigfloat_poly(p);
  BigFloat residual(0);
  for (const auto& root : rs.roots) {
    if (root.exact) continue;
    residual = std::max(residual, abs_bf(orig.eval(root.location)));
  }
  rs.residual_bound = to_double(residual);
  return rs;
}

}  // namespace recurpade

#endif
