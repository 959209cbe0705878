#ifndef RECURPADE_HERMITE_PADE_HPP
#define RECURPADE_HERMITE_PADE_HPP

#include <map>
#include <optional>
#include <vector>

#include "recurpade/fundamental.hpp"

namespace recurpade {

// d Taylor expansions with the multi-index m = (m_1,...,m_d).
template <class R>
struct VectorSeries {
  std::vector<PowerSeries<R>> components;
  std::vector<int> multi_index;

  int total() const {
    int s = 0;
    for (int v : multi_index) s += v;
    return s;
  }

  void validate() const {
    if (components.empty() || components.size() != multi_index.size())
      throw std::invalid_argument("VectorSeries: need one multi-index entry per component");
    bool any = false;
    for (int v : multi_index) {
      if (v < 0) throw std::invalid_argument("VectorSeries: multi-index entries must be >= 0");
      if (v > 0) any = true;
    }
    if (!any) throw std::invalid_argument("VectorSeries: multi-index must not be all zero");
  }

  int min_truncation() const {
    int t = INT_MAX;
    for (const auto& f : components) t = std::min(t, f.truncation_order());
    return t;
  }
};

template <class R>
struct HermitePadeApproximant {
  int n = 0;
  Polynomial<R> q;
  std::vector<Polynomial<R>> p;
  int kernel_dimension = 1;
};

// Type II (n, m) Hermite-Pade denominator and numerators: the |m| x (|m|+1)
// homogeneous system [z^nu q f_k]_n = 0, k = 1..d, nu = 0..m_k-1, solved by
// deterministic elimination (columns in ascending coefficient order).  When
// the kernel has dimension > 1 the representative with the most leading zero
// coefficients is taken; q is normalized so its lowest-degree nonzero
// coefficient is 1.
template <class R>
HermitePadeApproximant<R> hp_solve(const VectorSeries<R>& vs, int n, const PrecisionContext& ctx) {
  vs.validate();
  int d = static_cast<int>(vs.components.size());
  int total = vs.total();
  for (int v : vs.multi_index)
    if (n < v) throw std::invalid_argument("hp_solve: n must be >= max m_k");
  if (vs.min_truncation() < n)
    throw ComputeError(Errc::TruncationTooShort, "components truncated below n = " + std::to_string(n));

  detail::Mat<R> a;
  for (int k = 0; k < d; ++k)
    for (int nu = 0; nu < vs.multi_index[static_cast<std::size_t>(k)]; ++nu) {
      std::vector<Complex<R>> row(static_cast<std::size_t>(total) + 1);
      for (int i = 0; i <= total; ++i)
        row[static_cast<std::size_t>(i)] = vs.components[static_cast<std::size_t>(k)].coeff(n - nu - i);
      a.push_back(std::move(row));
    }

  BigFloat scale = detail::max_entry_magnitude(a);
  BigFloat tol = ctx.exact() ? BigFloat(0) : ctx.zero_threshold() * scale;
  detail::Mat<R> u = a;
  std::vector<int> pivots;
  detail::eliminate(u, tol, pivots);
  std::vector<std::vector<Complex<R>>> kernel = detail::nullspace_from_echelon(u, pivots);
  if (kernel.empty()) throw std::logic_error("hp_solve: homogeneous system with empty kernel");

  auto leading_zeros = [&](const std::vector<Complex<R>>& v) {
    int c = 0;
    for (const auto& x : v) {
      if (!ctx.treat_as_zero(x, scale)) break;
      ++c;
    }
    return c;
  };
  std::size_t pick = 0;
  int best = leading_zeros(kernel[0]);
  for (std::size_t i = 1; i < kernel.size(); ++i) {
    int lz = leading_zeros(kernel[i]);
    if (lz > best) {
      best = lz;
      pick = i;
    }
  }
  std::vector<Complex<R>> b = kernel[pick];
  for (const auto& x : b)
    if (!x.is_zero()) {
      Complex<R> lead = x;
      for (auto& y : b) y /= lead;
      break;
    }

  HermitePadeApproximant<R> out;
  out.n = n;
  out.kernel_dimension = static_cast<int>(kernel.size());
  out.q = Polynomial<R>(std::move(b));
  for (int k = 0; k < d; ++k) {
    PowerSeries<R> qf = series_poly_mul(vs.components[static_cast<std::size_t>(k)], out.q);
    int deg = n - vs.multi_index[static_cast<std::size_t>(k)];
    std::vector<Complex<R>> pc;
    for (int i = 0; i <= deg; ++i) pc.push_back(qf.coeff(i));
    out.p.emplace_back(std::move(pc));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Row sequences

struct ZeroTrajectory {
  std::vector<std::pair<int, CxF>> points;  // (n, zeta_{n,k})
  CxF anchor;                               // zero at the last n
  CxF limit;                                // matched zero of limit_q, when detected
  RateClass rate = RateClass::Undetermined;
  double theta = 0;
  double r2 = 0;
  bool collided = false;
};

template <class R>
struct RowSequenceReport {
  std::vector<int> ns;
  std::vector<Polynomial<R>> denominators;
  std::optional<Polynomial<R>> limit_q;
  std::vector<ZeroTrajectory> trajectories;
  std::optional<double> theta_global;
  double theta_r2 = 0;
};

namespace detail {

inline double poly_distance(const Polynomial<BigFloat>& a, const Polynomial<BigFloat>& b) {
  double mx = 0;
  int deg = std::max(a.degree(), b.degree());
  for (int i = 0; i <= deg; ++i) mx = std::max(mx, to_double(abs_bf(a.coeff(i) - b.coeff(i))));
  return mx;
}

}  // namespace detail

// Denominators q_{n,|m|} over a row of n, the detected limit, the zero
// trajectories with per-zero rates, and the global Gonchar rate theta.
template <class R>
RowSequenceReport<R> row_sequence(const VectorSeries<R>& vs, int n_lo, int n_hi,
                                  const PrecisionContext& ctx) {
  vs.validate();
  if (n_hi - n_lo + 1 < 16) throw ComputeError(Errc::WindowTooShort, "need at least 16 rows");
  int total = vs.total();

  RowSequenceReport<R> rep;
  for (int n = n_lo; n <= n_hi; ++n) {
    rep.ns.push_back(n);
    rep.denominators.push_back(hp_solve(vs, n, ctx).q);
  }

  // limit detection: exact stabilization, or max-norm variation of the last
  // eight denominators below 1e-6
  const int tail = 8;
  bool detected = false;
  {
    const Polynomial<R>& last = rep.denominators.back();
    if (ctx.exact()) {
      detected = true;
      for (int i = 0; i < tail; ++i)
        if (rep.denominators[rep.denominators.size() - 1 - static_cast<std::size_t>(i)] != last) {
          detected = false;
          break;
        }
    } else {
      double dev = 0;
      Polynomial<BigFloat> lastf = to_bigfloat_poly(last);
      for (int i = 1; i < tail; ++i)
        dev = std::max(dev, detail::poly_distance(
                                to_bigfloat_poly(rep.denominators[rep.denominators.size() - 1 -
                                                                  static_cast<std::size_t>(i)]),
                                lastf));
      detected = dev < 1e-6;
    }
    if (detected && (last.degree() != total || last.coeff(0) != Complex<R>(R(1)))) detected = false;
    if (detected) rep.limit_q = last;
  }

  // zero trajectories: anchored at the last row, traced backward by nearest
  // neighbor; a collision poisons the rates involved.  Near-multiple zeros
  // are kept split (eps-level clustering): their square-root-rate approach
  // is the honest trajectory, and merging would kink the regression.
  {
    RootSolveOptions topt;
    topt.clustering_radius_rel = ctx.exact() ? 0.0 : std::pow(10.0, ctx.zero_threshold_log10());
    std::vector<std::vector<CxF>> zero_sets(rep.ns.size());
    for (std::size_t i = 0; i < rep.ns.size(); ++i) {
      if (rep.denominators[i].degree() < 1) continue;
      RootSet rs = poly_roots(rep.denominators[i], ctx, topt);
      for (const auto& root : rs.roots)
        for (int t = 0; t < root.multiplicity; ++t) zero_sets[i].push_back(root.location);
    }
    const std::vector<CxF>& anchors = zero_sets.back();
    rep.trajectories.assign(anchors.size(), ZeroTrajectory{});
    for (std::size_t k = 0; k < anchors.size(); ++k) {
      rep.trajectories[k].anchor = anchors[k];
      rep.trajectories[k].points.emplace_back(rep.ns.back(), anchors[k]);
    }
    // Each multiplicity copy of a zero can be claimed once; a trajectory
    // that finds every copy taken has genuinely collided.
    std::vector<CxF> heads = anchors;
    for (std::size_t i = rep.ns.size() - 1; i-- > 0;) {
      const std::vector<CxF>& zs = zero_sets[i];
      if (zs.empty()) continue;
      std::vector<bool> claimed(zs.size(), false);
      for (std::size_t k = 0; k < heads.size(); ++k) {
        int best = -1;
        BigFloat bd(0);
        for (std::size_t j = 0; j < zs.size(); ++j) {
          if (claimed[j]) continue;
          BigFloat d2 = abs_bf(zs[j] - heads[k]);
          if (best < 0 || d2 < bd) {
            best = static_cast<int>(j);
            bd = d2;
          }
        }
        if (best < 0) {
          rep.trajectories[k].collided = true;
          continue;
        }
        claimed[static_cast<std::size_t>(best)] = true;
        heads[k] = zs[static_cast<std::size_t>(best)];
        rep.trajectories[k].points.emplace_back(rep.ns[i], heads[k]);
      }
    }
    for (auto& tr : rep.trajectories) std::reverse(tr.points.begin(), tr.points.end());
  }

  // per-zero rates against a Richardson-refined limit, fitted over the
  // middle half of the window (the detection tail is biased toward zero)
  if (rep.limit_q) {
    RootSet limit_zeros = poly_roots(*rep.limit_q, ctx);
    for (auto& tr : rep.trajectories) {
      // nearest limit zero
      const RootSet::Root* bestr = nullptr;
      BigFloat bd(0);
      for (const auto& root : limit_zeros.roots) {
        BigFloat d2 = abs_bf(root.location - tr.anchor);
        if (!bestr || d2 < bd) {
          bestr = &root;
          bd = d2;
        }
      }
      if (!bestr) continue;
      tr.limit = bestr->location;
      if (tr.collided) continue;

      std::size_t len = tr.points.size();
      if (len < 8) continue;
      auto fit_against = [&](const CxF& limit) {
        std::vector<double> xs, ys;
        int converged = 0;
        BigFloat floor = ctx.exact() ? BigFloat(0) : ctx.zero_threshold() * (abs_bf(limit) + 1);
        for (std::size_t i = len / 4; i < len - len / 4; ++i) {
          BigFloat dd = abs_bf(tr.points[i].second - limit);
          if (dd <= floor) {
            ++converged;
            continue;
          }
          xs.push_back(static_cast<double>(tr.points[i].first));
          ys.push_back(to_double(log(dd)));
        }
        return detail::classify_rate(xs, ys, converged);
      };
      // The detected limit zero is the reference; when the fit does not come
      // out geometric, retry against a Richardson-refined limit so an O(1/n)
      // detection bias cannot masquerade as a rate.
      RateFit fit = fit_against(tr.limit);
      if (fit.rate != RateClass::Geometric) {
        CxF z_hi = tr.points[len - 1].second;
        CxF z_mid = tr.points[len / 2].second;
        fit = fit_against(z_hi + (z_hi - z_mid));
      }
      tr.rate = fit.rate;
      tr.theta = fit.theta;
      tr.r2 = fit.r2;
    }

    // global rate from ||q_n - q_lim||, detection tail excluded
    Polynomial<BigFloat> qlim = to_bigfloat_poly(*rep.limit_q);
    std::vector<double> xs, ys;
    int converged = 0;
    double floor_log = ctx.exact() ? -std::numeric_limits<double>::infinity()
                                   : ctx.zero_threshold_log10() * 2.302585092994046;
    for (std::size_t i = 0; i + tail < rep.ns.size(); ++i) {
      double d = detail::poly_distance(to_bigfloat_poly(rep.denominators[i]), qlim);
      if (d == 0 || (std::isfinite(floor_log) && std::log(d) < floor_log)) {
        ++converged;
        continue;
      }
      xs.push_back(static_cast<double>(rep.ns[i]));
      ys.push_back(std::log(d));
    }
    if (converged > static_cast<int>(xs.size())) {
      rep.theta_global = 0;  // stabilized to working precision
      rep.theta_r2 = 1;
    } else if (xs.size() >= 6) {
      detail::LinFit fit = detail::linear_fit(xs, ys);
      rep.theta_global = std::exp(fit.slope);
      rep.theta_r2 = fit.r2;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Polynomial independence (Definition 4 as a rank test)

struct IndependenceResult {
  bool independent = false;
  int rank = 0;
  int required = 0;
};

// Columns are the coefficient slices of z^nu f_k over the window; full rank
// |m| means no combination with deg p_k < m_k has a vanishing tail.
template <class R>
IndependenceResult poly_independence_test(const VectorSeries<R>& vs, int n1, int n2,
                                          const PrecisionContext& ctx) {
  vs.validate();
  int total = vs.total();
  if (n2 - n1 < 2 * total) throw ComputeError(Errc::WindowTooShort, "window must span at least 2|m| rows");
  if (vs.min_truncation() < n2)
    throw ComputeError(Errc::TruncationTooShort, "components truncated below the window");

  detail::Mat<R> a(static_cast<std::size_t>(n2 - n1 + 1));
  for (int n = n1; n <= n2; ++n) {
    std::vector<Complex<R>> row;
    for (std::size_t k = 0; k < vs.components.size(); ++k)
      for (int nu = 0; nu < vs.multi_index[k]; ++nu) row.push_back(vs.components[k].coeff(n - nu));
    a[static_cast<std::size_t>(n - n1)] = std::move(row);
  }
  // column equilibration by powers of two keeps the rank decision scale-free
  int cols = total;
  for (int c = 0; c < cols; ++c) {
    BigFloat mx(0);
    for (const auto& row : a) mx = std::max(mx, abs_bf(row[static_cast<std::size_t>(c)]));
    if (mx == 0) continue;
    int ls = static_cast<int>(std::lround(to_double(log(mx)) / 0.69314718055994530942));
    if (ls == 0) continue;
    R p = int_pow(R(2), std::abs(ls));
    for (auto& row : a)
      row[static_cast<std::size_t>(c)] =
          (ls >= 0) ? row[static_cast<std::size_t>(c)] / Complex<R>(p) : row[static_cast<std::size_t>(c)] * Complex<R>(p);
  }
  double rel = ctx.exact() ? 0.0 : std::pow(10.0, ctx.zero_threshold_log10());
  IndependenceResult out;
  out.required = total;
  out.rank = detail::matrix_rank(std::move(a), rel);
  out.independent = out.rank == total;
  return out;
}

// ---------------------------------------------------------------------------
// Induced recurrence (the hat construction)

template <class R>
struct InducedRecurrence {
  Recurrence<R> rec;
  int n0 = 0;
  std::vector<PowerSeries<R>> basis;  // (f_1,...,z^{m_1-1} f_1, ..., z^{m_d-1} f_d), shifted
};

// Turn the denominator row into an order-|m| recurrence: find n0 from which
// deg q_n = |m| and q_n(0) = 1 hold through the end of the data, read the
// coefficient rows from q_{n+n0}, and shift the components accordingly.
// qs[i] must hold q_{q_first+i}.
template <class R>
InducedRecurrence<R> induced_recurrence(const VectorSeries<R>& vs, const std::vector<Polynomial<R>>& qs,
                                        int q_first, const PrecisionContext& ctx) {
  vs.validate();
  int total = vs.total();
  BigFloat scale(0);
  for (const auto& q : qs)
    for (const auto& c : q.coeffs()) scale = std::max(scale, abs_bf(c));

  auto row_ok = [&](const Polynomial<R>& q) {
    if (q.degree() != total) return false;
    if (!ctx.exact() && ctx.treat_as_zero(q.coeff(total), scale)) return false;
    return q.coeff(0) == Complex<R>(R(1));
  };
  int first_ok = -1;
  for (int i = static_cast<int>(qs.size()) - 1; i >= 0; --i) {
    if (!row_ok(qs[static_cast<std::size_t>(i)])) break;
    first_ok = i;
  }
  if (first_ok < 0)
    throw ComputeError(Errc::DegenerateDenominators,
                       "no n_0 with b_{n,|m|} != 0 and q_n(0) = 1 through the available rows");
  // the shifted recurrence reads rows q_{n0+n} for n >= |m| only
  int n0 = std::max(0, q_first + first_ok - total);

  int L = INT_MAX;
  for (const auto& f : vs.components) L = std::min(L, static_cast<int>(f.coeffs.size()) - n0);
  int q_last = q_first + static_cast<int>(qs.size()) - 1;
  L = std::min(L, q_last - n0 + 1);
  if (L < total + 1)
    throw ComputeError(Errc::DegenerateDenominators, "not enough shifted data for the induced recurrence");

  std::vector<std::vector<Complex<R>>> rows;
  for (int n = total; n < L; ++n) {
    const Polynomial<R>& q = qs[static_cast<std::size_t>(n0 + n - q_first)];
    std::vector<Complex<R>> row(static_cast<std::size_t>(total));
    for (int j = 1; j <= total; ++j) row[static_cast<std::size_t>(j - 1)] = q.coeff(j);
    rows.push_back(std::move(row));
  }
  std::optional<std::vector<Complex<R>>> lim;
  {
    const Polynomial<R>& q = qs.back();
    std::vector<Complex<R>> l(static_cast<std::size_t>(total));
    for (int j = 1; j <= total; ++j) l[static_cast<std::size_t>(j - 1)] = q.coeff(j);
    lim = std::move(l);
  }
  std::vector<PowerSeries<R>> basis;
  for (std::size_t k = 0; k < vs.components.size(); ++k) {
    PowerSeries<R> shifted = vs.components[k].shifted(n0);
    shifted.coeffs.resize(static_cast<std::size_t>(L));
    for (int nu = 0; nu < vs.multi_index[k]; ++nu) {
      std::vector<Complex<R>> c(static_cast<std::size_t>(L));
      for (int n = nu; n < L; ++n) c[static_cast<std::size_t>(n)] = shifted.coeffs[static_cast<std::size_t>(n - nu)];
      basis.emplace_back(std::move(c));
    }
  }
  return InducedRecurrence<R>{
      Recurrence<R>::from_table(total, std::move(rows), std::move(lim), "induced"), n0, std::move(basis)};
}

// ---------------------------------------------------------------------------
// Theorem-3 classification

template <class R>
struct SystemSingularityReport {
  enum class Kind { SystemPole, SystemSingularity, Unclassified };
  struct Entry {
    CxF zeta;
    Kind kind = Kind::Unclassified;
    int order = 0;  // pole order (multiplicity in limit_q) for SystemPole
    RateClass rate = RateClass::Undetermined;
    double theta = 0;
    std::vector<Polynomial<R>> witness;  // p_k with deg p_k < m_k
    double witness_radius_before = 0;
    double witness_radius_after = 0;
    double member_radius = 0;
  };
  std::vector<Entry> entries;
  std::vector<ProvenanceRecord> provenance;
  std::optional<Polynomial<R>> limit_q;
  std::optional<double> theta_global;
  int induced_shift = 0;
  bool all_geometric = false;
  bool all_distinct_moduli = false;
};

inline const char* singularity_kind_name(int kind_index) {
  switch (kind_index) {
    case 0: return "SystemPole";
    case 1: return "SystemSingularity";
    default: return "Unclassified";
  }
}

namespace detail {

// Taylor coefficients of sum_s a_{-s} (z - zeta)^{-s} up to length L.
template <class R>
std::vector<Complex<R>> principal_part_series(const Complex<R>& zeta,
                                              const std::vector<Complex<R>>& coeffs, int L) {
  std::vector<Complex<R>> out(static_cast<std::size_t>(L));
  Complex<R> inv = Complex<R>(R(1)) / zeta;
  for (int s = 1; s <= static_cast<int>(coeffs.size()); ++s) {
    const Complex<R>& a = coeffs[static_cast<std::size_t>(s - 1)];
    if (a.is_zero()) continue;
    Complex<R> sign = (s % 2 == 0) ? Complex<R>(R(1)) : Complex<R>(R(-1));
    Complex<R> zpow = sign * int_pow(inv, s);  // (-1)^s zeta^{-s} at n = 0
    for (int n = 0; n < L; ++n) {
      Complex<R> binom(R(1));
      for (int t = 1; t <= s - 1; ++t) binom *= Complex<R>(R(n + t)) / Complex<R>(R(t));
      out[static_cast<std::size_t>(n)] += a * binom * zpow;
      zpow *= inv;
    }
  }
  return out;
}

}  // namespace detail

// Run the whole pipeline: independence, row sequence, induced recurrence,
// fundamental system, then map each zero of limit_q to a classified entry
// with a witness combination.
template <class R>
SystemSingularityReport<R> classify_singularities(const VectorSeries<R>& vs, int n_lo, int n_hi,
                                                  const PrecisionContext& ctx,
                                                  BuilderOptions<R> builder_opt = {}) {
  vs.validate();
  int total = vs.total();

  {
    int w = 2 * total + 8;
    int n2 = n_hi, n1 = std::max(total, n_hi - w);
    if (n2 - n1 < 2 * total) n1 = std::max(0, n2 - 2 * total);
    IndependenceResult ind = poly_independence_test(vs, n1, n2, ctx);
    if (!ind.independent)
      throw ComputeError(Errc::HypothesisViolated,
                         "components are polynomially dependent with respect to the multi-index (rank " +
                             std::to_string(ind.rank) + " of " + std::to_string(ind.required) + ")");
  }

  RowSequenceReport<R> row = row_sequence(vs, n_lo, n_hi, ctx);
  if (!row.limit_q)
    throw ComputeError(Errc::HypothesisViolated,
                       "denominator row did not stabilize; limit polynomial undetected");

  SystemSingularityReport<R> rep;
  rep.limit_q = row.limit_q;
  rep.theta_global = row.theta_global;

  RootSet limit_zeros = poly_roots(*row.limit_q, ctx);

  // per-zero rate info from the trajectories
  RateInfo rate_info;
  auto rate_of = [&](const CxF& z) -> RateClass {
    const ZeroTrajectory* best = nullptr;
    BigFloat bd(0);
    for (const auto& tr : row.trajectories) {
      BigFloat d2 = abs_bf(tr.anchor - z);
      if (!best || d2 < bd) {
        best = &tr;
        bd = d2;
      }
    }
    return best ? best->rate : RateClass::Undetermined;
  };
  for (const auto& root : limit_zeros.roots) {
    RateClass rc = rate_of(root.location);
    rate_info.per_zero.emplace_back(root.location,
                                    rc == RateClass::Geometric ? RateInfo::Class::Geometric
                                                               : RateInfo::Class::NonGeometric);
  }

  std::vector<CircleGroup> circles = group_circles(limit_zeros, rate_info, builder_opt.circle_cluster_tol);
  rep.all_geometric = true;
  rep.all_distinct_moduli = true;
  for (const auto& g : circles) {
    if (!g.geometric) rep.all_geometric = false;
    if (g.total_multiplicity() >= 2) {
      rep.all_distinct_moduli = false;
      if (!g.geometric)
        throw ComputeError(Errc::HypothesisViolated,
                           "shared circle at radius " + std::to_string(g.radius) +
                               " lacks geometric convergence of its zeros");
    }
  }

  // full q table for the induced recurrence
  int N_avail = vs.min_truncation();
  int q_first = total;
  for (int v : vs.multi_index) q_first = std::max(q_first, v);
  std::vector<Polynomial<R>> qs;
  for (int n = q_first; n <= N_avail; ++n) {
    if (n >= n_lo && n <= n_hi)
      qs.push_back(row.denominators[static_cast<std::size_t>(n - n_lo)]);
    else
      qs.push_back(hp_solve(vs, n, ctx).q);
  }
  InducedRecurrence<R> induced = induced_recurrence(vs, qs, q_first, ctx);
  rep.induced_shift = induced.n0;

  builder_opt.rate_info = rate_info;
  builder_opt.initial_basis = induced.basis;
  int N_build = static_cast<int>(induced.basis.front().coeffs.size()) - 1;
  FundamentalSystem<R> sys = [&] {
    try {
      return build_fundamental_system(induced.rec, N_build, ctx, builder_opt);
    } catch (const ComputeError& e) {
      // under the theorem's hypotheses the construction terminates; a stuck
      // builder is evidence against them (poor fits keep their own flag)
      if (e.code() == Errc::PoorFit) throw;
      throw ComputeError(Errc::HypothesisViolated, e.what());
    }
  }();
  rep.provenance = sys.provenance;

  // map each zero of limit_q to its member and classification
  for (const auto& root : limit_zeros.roots) {
    typename SystemSingularityReport<R>::Entry entry;
    entry.zeta = root.location;
    RateClass rc = rate_of(root.location);
    entry.rate = rc;
    for (const auto& tr : row.trajectories)
      if (abs_bf(tr.anchor - root.location) <= abs_bf(root.location) * BigFloat(1e-3) + BigFloat(1e-9))
        entry.theta = tr.theta;

    // member owning this singular point (max pole order wins)
    const SystemMember<R>* owner = nullptr;
    int pole_order = 0;
    for (const auto& mem : sys.members) {
      for (const auto& sp : mem.singular_points) {
        if (to_double(abs_bf(sp - root.location)) <=
            1e-6 * std::max(1.0, abs_double(root.location))) {
          int order = 0;
          for (const auto& po : mem.pole_orders)
            if (to_double(abs_bf(po.first - root.location)) <=
                1e-6 * std::max(1.0, abs_double(root.location)))
              order = std::max(order, po.second);
          if (!owner || order >= pole_order) {
            owner = &mem;
            pole_order = order;
          }
        }
      }
    }
    if (!owner) {
      rep.entries.push_back(std::move(entry));
      continue;
    }
    entry.member_radius = owner->radius.value;

    // witness polynomials from the member's coordinates in the (fs) basis
    std::size_t idx = 0;
    for (std::size_t k = 0; k < vs.components.size(); ++k) {
      std::vector<Complex<R>> pc;
      for (int nu = 0; nu < vs.multi_index[k]; ++nu) pc.push_back(owner->coords[idx++]);
      entry.witness.emplace_back(std::move(pc));
    }

    if (rc == RateClass::Geometric && pole_order > 0) {
      entry.kind = SystemSingularityReport<R>::Kind::SystemPole;
      entry.order = root.multiplicity;

      // witness validity: subtracting the fitted principal part at zeta must
      // push the radius of sum p_k f_k past |zeta|
      PowerSeries<R> witness_series;
      {
        int L = vs.min_truncation() + 1;
        std::vector<Complex<R>> acc(static_cast<std::size_t>(L));
        for (std::size_t k = 0; k < vs.components.size(); ++k) {
          const Polynomial<R>& p = entry.witness[k];
          if (p.is_zero()) continue;
          for (int n = 0; n < L; ++n) {
            Complex<R> s;
            for (int i = 0; i <= p.degree() && i <= n; ++i)
              s += p.coeff(i) * vs.components[k].coeff(n - i);
            acc[static_cast<std::size_t>(n)] += s;
          }
        }
        witness_series = PowerSeries<R>(std::move(acc));
      }
      try {
        entry.witness_radius_before = robust_radius(witness_series, ctx).value;
        CircleGroup solo;
        solo.radius = abs_double(root.location);
        solo.zeros.push_back(root);
        solo.geometric = true;
        double outer = 2 * solo.radius;
        for (const auto& g : circles)
          if (g.radius > solo.radius * (1 + 1e-9)) {
            outer = g.radius;
            break;
          }
        PrincipalPartExtraction<R> px = extract_principal_parts(witness_series, solo, outer, ctx, builder_opt);
        std::vector<Complex<R>> pp = detail::principal_part_series(
            root_in_field<R>(root), px.parts.front().coefficients,
            static_cast<int>(witness_series.coeffs.size()));
        for (std::size_t i = 0; i < pp.size(); ++i) witness_series.coeffs[i] -= pp[i];
        entry.witness_radius_after = robust_radius(witness_series, ctx).value;
      } catch (const ComputeError& e) {
        // a polynomial remainder means the subtraction cleared everything
        entry.witness_radius_after =
            e.code() == Errc::AllZeroTail ? std::numeric_limits<double>::infinity() : 0;
      }
    } else {
      entry.kind = SystemSingularityReport<R>::Kind::SystemSingularity;
    }
    rep.entries.push_back(std::move(entry));
  }
  return rep;
}

}  // namespace recurpade

#endif
