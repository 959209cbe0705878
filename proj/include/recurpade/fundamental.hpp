#ifndef RECURPADE_FUNDAMENTAL_HPP
#define RECURPADE_FUNDAMENTAL_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "recurpade/buslaev.hpp"
#include "recurpade/detail/linalg.hpp"
#include "recurpade/detail/zero_rates.hpp"
#include "recurpade/transforms.hpp"

namespace recurpade {

// ---------------------------------------------------------------------------
// Circle grouping

// How fast the per-n zeros approach each limit zero.  Geometric is the
// condition under which poles (not just singular points) are certified.
struct RateInfo {
  enum class Class { Geometric, NonGeometric, Unknown };
  Class default_class = Class::Unknown;
  std::vector<std::pair<CxF, Class>> per_zero;

  static RateInfo all(Class c) {
    RateInfo r;
    r.default_class = c;
    return r;
  }

  Class classify(const CxF& z) const {
    if (per_zero.empty()) return default_class;
    const std::pair<CxF, Class>* best = nullptr;
    BigFloat best_d(0);
    for (const auto& entry : per_zero) {
      BigFloat d = abs_bf(entry.first - z);
      if (!best || d < best_d) {
        best = &entry;
        best_d = d;
      }
    }
    return best ? best->second : default_class;
  }
};

// Zeros of alpha sharing one modulus.  A shared circle (total multiplicity
// >= 2) is only processable when geometric holds; the builder rejects the
// rest rather than guessing.
struct CircleGroup {
  double radius = 0;
  std::vector<RootSet::Root> zeros;
  bool geometric = false;

  int total_multiplicity() const {
    int s = 0;
    for (const auto& z : zeros) s += z.multiplicity;
    return s;
  }
};

inline std::vector<CircleGroup> group_circles(const RootSet& roots, const RateInfo& rate_info,
                                              double cluster_tol = 1e-6) {
  std::vector<RootSet::Root> sorted = roots.roots;
  std::sort(sorted.begin(), sorted.end(), [](const RootSet::Root& a, const RootSet::Root& b) {
    return abs_bf(a.location) < abs_bf(b.location);
  });
  std::vector<CircleGroup> groups;
  for (const auto& root : sorted) {
    double r = abs_double(root.location);
    if (r == 0) continue;  // zeros of alpha at the origin cannot occur (alpha(0) = 1)
    if (groups.empty() || r > groups.back().radius * (1 + cluster_tol)) {
      CircleGroup g;
      g.radius = r;
      g.zeros.push_back(root);
      groups.push_back(std::move(g));
    } else {
      groups.back().zeros.push_back(root);
    }
  }
  for (std::size_t i = 0; i + 1 < groups.size(); ++i) {
    double lo = groups[i].radius, hi = groups[i + 1].radius;
    if ((hi - lo) / hi < 2 * cluster_tol)
      throw ComputeError(Errc::AmbiguousGrouping,
                         "circle radii too close to separate at the current tolerance");
  }
  for (auto& g : groups) {
    double rsum = 0;
    bool geo = true;
    for (const auto& z : g.zeros) {
      rsum += abs_double(z.location);
      if (rate_info.classify(z.location) != RateInfo::Class::Geometric) geo = false;
    }
    g.radius = rsum / static_cast<double>(g.zeros.size());
    g.geometric = geo;
  }
  return groups;
}

// ---------------------------------------------------------------------------
// Principal-part extraction

template <class R>
struct PrincipalPart {
  Complex<R> pole;
  CxF pole_location;
  int multiplicity = 1;
  std::vector<Complex<R>> coefficients;  // a_{-1}..a_{-tau}
  double fit_residual = 0;
};

template <class R>
struct PrincipalPartExtraction {
  std::vector<PrincipalPart<R>> parts;
  double fit_residual = 0;      // relative to the weighted tail magnitude
  double member_scale_log = 0;  // ln of the weighted tail magnitude
  std::optional<RadiusEstimate> radius;
  bool analytic_past_circle = false;
};

template <class R>
struct BuilderOptions {
  double circle_cluster_tol = 1e-6;
  double circle_match_tol = 1e-3;
  double rank_tol_floor = 1e-8;
  double poor_fit_floor = 1e-6;
  double combo_tol = 1e-10;  // admissible leaked-pole content in nullspace combinations
  std::optional<RateInfo> rate_info;
  std::optional<std::vector<PowerSeries<R>>> initial_basis;
};

template <class R>
R field_from_double(double x) {
  if constexpr (is_exact_field<R>) {
    return Rational(x);
  } else {
    return BigFloat(x);
  }
}

// Fit the polar model  f_n ~ sum_{i,s} a_{-s}^(i) (-1)^s C(n+s-1, s-1)
// zeta_i^{-n-s}  on the last third of the coefficients, rows weighted by
// radius^n so the normal equations stay equilibrated.  Members whose
// radius estimate clears the circle are reported analytic with ~0 parts.
template <class R>
PrincipalPartExtraction<R> extract_principal_parts(const PowerSeries<R>& f, const CircleGroup& group,
                                                   double outer_radius, const PrecisionContext& ctx,
                                                   const BuilderOptions<R>& opt = {}) {
  if (outer_radius <= group.radius)
    throw std::invalid_argument("extract_principal_parts: outer_radius must exceed the circle radius");
  int L = static_cast<int>(f.coeffs.size());
  if (L < 24) throw ComputeError(Errc::InsufficientData, "too few coefficients for a principal-part fit");
  int w0 = L - L / 3;
  int rows = L - w0;

  PrincipalPartExtraction<R> out;
  try {
    out.radius = estimate_radius(f, RadiusMethod::RootTestRegression, ctx);
  } catch (const ComputeError&) {
    out.radius = std::nullopt;  // zero/near-polynomial member: treated as analytic
  }
  double analytic_margin = 10 * opt.circle_match_tol;
  out.analytic_past_circle = !out.radius || out.radius->value > group.radius * (1 + analytic_margin);

  int k = group.total_multiplicity();
  R weight_base = field_from_double<R>(group.radius);
  detail::Mat<R> A(static_cast<std::size_t>(rows), std::vector<Complex<R>>(static_cast<std::size_t>(k)));
  std::vector<Complex<R>> b(static_cast<std::size_t>(rows));

  // column (i, s): (-1)^s C(n+s-1, s-1) zeta^{-s} (radius/zeta)^n
  int col = 0;
  for (const auto& zero : group.zeros) {
    Complex<R> zeta = root_in_field<R>(zero);
    Complex<R> inv_zeta = Complex<R>(R(1)) / zeta;
    Complex<R> step = inv_zeta * Complex<R>(weight_base);  // radius / zeta
    for (int s = 1; s <= zero.multiplicity; ++s, ++col) {
      Complex<R> sign_pow = (s % 2 == 0) ? Complex<R>(R(1)) : Complex<R>(R(-1));
      Complex<R> zs = sign_pow * int_pow(inv_zeta, s);
      Complex<R> geo = int_pow(step, w0);
      for (int n = w0; n < L; ++n) {
        // C(n+s-1, s-1)
        Complex<R> binom(R(1));
        for (int t = 1; t <= s - 1; ++t) binom *= Complex<R>(R(n + t)) / Complex<R>(R(t));
        A[static_cast<std::size_t>(n - w0)][static_cast<std::size_t>(col)] = zs * binom * geo;
        geo *= step;
      }
    }
  }
  {
    Complex<R> w = Complex<R>(int_pow(weight_base, w0));
    for (int n = w0; n < L; ++n) {
      b[static_cast<std::size_t>(n - w0)] = f.coeffs[static_cast<std::size_t>(n)] * w;
      w *= Complex<R>(weight_base);
    }
  }

  BigFloat data_norm2(0);
  for (const auto& v : b) data_norm2 += to_bigfloat(v.norm());
  if (data_norm2 == 0) {
    out.member_scale_log = -std::numeric_limits<double>::infinity();
    out.analytic_past_circle = true;
    for (const auto& zero : group.zeros) {
      PrincipalPart<R> pp;
      pp.pole = root_in_field<R>(zero);
      pp.pole_location = zero.location;
      pp.multiplicity = zero.multiplicity;
      pp.coefficients.assign(static_cast<std::size_t>(zero.multiplicity), Complex<R>());
      out.parts.push_back(std::move(pp));
    }
    return out;
  }
  out.member_scale_log = 0.5 * to_double(log(data_norm2));

  std::vector<Complex<R>> unit_w(static_cast<std::size_t>(rows), Complex<R>(R(1)));
  std::vector<Complex<R>> x = detail::least_squares(A, b, unit_w);

  BigFloat res2(0);
  for (int r = 0; r < rows; ++r) {
    Complex<R> acc = b[static_cast<std::size_t>(r)];
    for (int c = 0; c < k; ++c)
      acc -= A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] * x[static_cast<std::size_t>(c)];
    res2 += to_bigfloat(acc.norm());
  }
  out.fit_residual = to_double(sqrt(res2 / data_norm2));

  if (!out.analytic_past_circle) {
    double expected = std::pow(group.radius / outer_radius, w0);
    double tol = std::max(opt.poor_fit_floor, 100 * expected);
    if (out.fit_residual > tol)
      throw ComputeError(Errc::PoorFit, "principal-part fit residual " + std::to_string(out.fit_residual) +
                                            " exceeds tolerance " + std::to_string(tol) +
                                            "; non-polar singularity on the circle?");
  }

  col = 0;
  for (const auto& zero : group.zeros) {
    PrincipalPart<R> pp;
    pp.pole = root_in_field<R>(zero);
    pp.pole_location = zero.location;
    pp.multiplicity = zero.multiplicity;
    pp.fit_residual = out.fit_residual;
    for (int s = 1; s <= zero.multiplicity; ++s, ++col) pp.coefficients.push_back(x[static_cast<std::size_t>(col)]);
    out.parts.push_back(std::move(pp));
  }
  return out;
}

// ---------------------------------------------------------------------------
// kill_poles / prescribe_poles (the shared-circle branch of the theorem)

template <class R>
struct KillPolesResult {
  int rank = 0;  // N_1
  std::vector<std::vector<Complex<R>>> nullspace;
  detail::Mat<R> functionals;  // N x M, columns scaled by 2^-col_scale_log2
  std::vector<int> col_scale_log2;
  std::vector<PrincipalPartExtraction<R>> extractions;
  double rank_tol = 0;
  // A combination formed from fitted functionals carries a leaked pole of
  // relative size ~ fit residual; past this index it overtakes the cleared
  // series.  INT_MAX when the fits were exact.
  int combo_reliable_len = 0;
};

template <class R>
PowerSeries<R> combine_members(const std::vector<PowerSeries<R>>& members,
                               const std::vector<Complex<R>>& coeffs) {
  std::size_t len = 0;
  for (const auto& f : members) len = len ? std::min(len, f.coeffs.size()) : f.coeffs.size();
  std::vector<Complex<R>> out(len);
  for (std::size_t j = 0; j < members.size(); ++j) {
    if (coeffs[j].is_zero()) continue;
    for (std::size_t n = 0; n < len; ++n) out[n] += coeffs[j] * members[j].coeffs[n];
  }
  return PowerSeries<R>(std::move(out));
}

// Rows are the principal-part functionals (one per (zeta, nu)); the
// nullspace combinations are analytic past the circle.
template <class R>
KillPolesResult<R> kill_poles(const std::vector<PowerSeries<R>>& members, const CircleGroup& group,
                              double outer_radius, const PrecisionContext& ctx,
                              const BuilderOptions<R>& opt = {}) {
  int M = static_cast<int>(members.size());
  int N = group.total_multiplicity();
  KillPolesResult<R> out;
  out.functionals.assign(static_cast<std::size_t>(N), std::vector<Complex<R>>(static_cast<std::size_t>(M)));
  out.col_scale_log2.assign(static_cast<std::size_t>(M), 0);

  double max_residual = 0;
  for (int j = 0; j < M; ++j) {
    PrincipalPartExtraction<R> ex =
        extract_principal_parts(members[static_cast<std::size_t>(j)], group, outer_radius, ctx, opt);
    if (ex.analytic_past_circle) {
      // clears the circle already: contributes no constraint (a column of
      // zeros), rather than amplified fit noise
      out.extractions.push_back(std::move(ex));
      continue;
    }
    max_residual = std::max(max_residual, ex.fit_residual);
    int log2scale = 0;
    if (std::isfinite(ex.member_scale_log))
      log2scale = static_cast<int>(std::lround(ex.member_scale_log / 0.69314718055994530942));
    out.col_scale_log2[static_cast<std::size_t>(j)] = log2scale;
    Complex<R> inv_scale(R(1));
    {
      R two(2);
      R p = int_pow(two, std::abs(log2scale));
      inv_scale = (log2scale >= 0) ? Complex<R>(R(1) / p) : Complex<R>(p);
    }
    int row = 0;
    for (const auto& part : ex.parts)
      for (const auto& a : part.coefficients)
        out.functionals[static_cast<std::size_t>(row++)][static_cast<std::size_t>(j)] = a * inv_scale;
    out.extractions.push_back(std::move(ex));
  }

  BigFloat scale = detail::max_entry_magnitude(out.functionals);
  double rel = std::max(opt.rank_tol_floor, 10 * max_residual);
  BigFloat tol = scale > 0 ? BigFloat(rel) * scale : BigFloat(0);
  out.rank_tol = to_double(tol);

  if (max_residual <= 0) {
    out.combo_reliable_len = INT_MAX;
  } else {
    double growth = std::log(outer_radius / group.radius);
    double len = std::log(opt.combo_tol / max_residual) / growth;
    out.combo_reliable_len = len >= static_cast<double>(INT_MAX) ? INT_MAX
                             : len <= 0                          ? 0
                                                                 : static_cast<int>(len);
  }

  detail::Mat<R> u = out.functionals;
  std::vector<int> pivots;
  out.rank = detail::eliminate(u, tol, pivots);
  std::vector<std::vector<Complex<R>>> basis = detail::nullspace_from_echelon(u, pivots);

  // undo the column scaling and normalize on the first nonzero entry
  for (auto& v : basis) {
    for (int j = 0; j < M; ++j) {
      int ls = out.col_scale_log2[static_cast<std::size_t>(j)];
      if (ls == 0) continue;
      R p = int_pow(R(2), std::abs(ls));
      v[static_cast<std::size_t>(j)] = (ls >= 0) ? v[static_cast<std::size_t>(j)] / Complex<R>(p)
                                                 : v[static_cast<std::size_t>(j)] * Complex<R>(p);
    }
    for (const auto& c : v)
      if (!c.is_zero()) {
        Complex<R> lead = c;
        for (auto& d : v) d /= lead;
        break;
      }
  }
  out.nullspace = std::move(basis);
  return out;
}

template <class R>
struct PrescribedPole {
  PowerSeries<R> series;
  std::vector<Complex<R>> combination;
  Complex<R> zeta;
  CxF zeta_location;
  int order = 1;
  double certificate = 0;  // max deviation of the refit functionals from target
};

// Full-rank branch: for each zero of multiplicity tau and each s = 1..tau,
// deliver the combination whose principal part at the zero is exactly
// (z - zeta)^{-s}, analytic at the other zeros of the circle.
template <class R>
std::vector<PrescribedPole<R>> prescribe_poles(const std::vector<PowerSeries<R>>& members,
                                               const CircleGroup& group, const KillPolesResult<R>& kill,
                                               double outer_radius, const PrecisionContext& ctx,
                                               const BuilderOptions<R>& opt = {}) {
  int M = static_cast<int>(members.size());
  int N = group.total_multiplicity();
  if (kill.rank < N)
    throw ComputeError(Errc::RankDeficient, "prescribe_poles requires full rank N_1 = N on the circle");

  std::vector<PrescribedPole<R>> out;
  BigFloat tol(kill.rank_tol);
  int row0 = 0;
  for (const auto& zero : group.zeros) {
    for (int s = 1; s <= zero.multiplicity; ++s) {
      std::vector<Complex<R>> rhs(static_cast<std::size_t>(N));
      rhs[static_cast<std::size_t>(row0 + s - 1)] = Complex<R>(R(1));
      std::vector<Complex<R>> c = detail::solve_particular(kill.functionals, rhs, tol);
      for (int j = 0; j < M; ++j) {
        int ls = kill.col_scale_log2[static_cast<std::size_t>(j)];
        if (ls == 0) continue;
        R p = int_pow(R(2), std::abs(ls));
        c[static_cast<std::size_t>(j)] = (ls >= 0) ? c[static_cast<std::size_t>(j)] / Complex<R>(p)
                                                   : c[static_cast<std::size_t>(j)] * Complex<R>(p);
      }
      PrescribedPole<R> p;
      p.series = combine_members(members, c);
      p.combination = std::move(c);
      p.zeta = root_in_field<R>(zero);
      p.zeta_location = zero.location;
      p.order = s;

      // exact-order certificate: refit and compare against the unit target
      PrincipalPartExtraction<R> refit = extract_principal_parts(p.series, group, outer_radius, ctx, opt);
      double dev = 0;
      int col = 0, target = row0 + s - 1;
      for (const auto& part : refit.parts)
        for (const auto& a : part.coefficients) {
          CxF diff = to_bigfloat_cx(a);
          if (col == target) diff -= CxF{BigFloat(1)};
          dev = std::max(dev, to_double(abs_bf(diff)));
          ++col;
        }
      p.certificate = dev;
      out.push_back(std::move(p));
    }
    row0 += zero.multiplicity;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evgrafov branch (single simple zero, no geometric-rate assumption)

template <class R>
struct EvgrafovResult {
  int shift_n0 = 0;
  int pilot_index = 0;
  PowerSeries<R> kept;
  std::vector<PowerSeries<R>> lifted;
  std::vector<double> lifted_mu;
};

namespace detail {

// tail variance of the ratio sequence f_{n-1}/f_n; lower is steadier
template <class R>
double ratio_tail_variance(const PowerSeries<R>& f) {
  int L = static_cast<int>(f.coeffs.size());
  int lo = L - L / 4;
  std::vector<CxF> ratios;
  for (int n = lo; n + 1 < L; ++n) {
    const auto& den = f.coeffs[static_cast<std::size_t>(n + 1)];
    const auto& num = f.coeffs[static_cast<std::size_t>(n)];
    if (den.is_zero()) continue;
    ratios.push_back(to_bigfloat_cx(num) / to_bigfloat_cx(den));
  }
  if (ratios.size() < 4) return std::numeric_limits<double>::infinity();
  CxF mean;
  for (const auto& r : ratios) mean += r;
  mean = mean / CxF{BigFloat(static_cast<long>(ratios.size()))};
  BigFloat var(0);
  for (const auto& r : ratios) var += (r - mean).norm();
  BigFloat denom = mean.norm() * BigFloat(static_cast<long>(ratios.size()));
  if (denom == 0) return std::numeric_limits<double>::infinity();
  return to_double(var / denom);
}

// first index after which no (near-)zero coefficient occurs
template <class R>
int pilot_shift(const PowerSeries<R>& f, const PrecisionContext& ctx) {
  std::vector<double> logs = coeff_log_magnitudes(f, ctx);
  int last_blank = -1;
  for (int i = 0; i < static_cast<int>(logs.size()); ++i)
    if (!std::isfinite(logs[static_cast<std::size_t>(i)])) last_blank = i;
  return last_blank + 1;
}

}  // namespace detail

// Scale by gamma_n = pilot_n / lambda^n, deflate by lambda, antidifference-
// lift the companions, and unscale.  The pilot keeps radius |zeta_j|; every
// lifted companion clears it.
template <class R>
EvgrafovResult<R> evgrafov_step(const Recurrence<R>& rec, const std::vector<PowerSeries<R>>& members,
                                const RootSet::Root& zero, const PrecisionContext& ctx,
                                const BuilderOptions<R>& opt = {}) {
  if (members.empty()) throw std::invalid_argument("evgrafov_step: no members");
  Complex<R> zeta = root_in_field<R>(zero);
  Complex<R> lambda = Complex<R>(R(1)) / zeta;

  // pilot: steadiest tail ratio sequence
  int pilot = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < static_cast<int>(members.size()); ++j) {
    double v = detail::ratio_tail_variance(members[static_cast<std::size_t>(j)]);
    if (v < best) {
      best = v;
      pilot = j;
    }
  }
  if (pilot < 0)
    throw ComputeError(Errc::ZeroPilotCoefficient, "no member has a usable ratio tail on this circle");

  EvgrafovResult<R> out;
  out.pilot_index = pilot;
  if (members.size() == 1) {
    out.kept = members[0];
    return out;
  }

  int n0 = detail::pilot_shift(members[static_cast<std::size_t>(pilot)], ctx);
  int L = static_cast<int>(members[0].coeffs.size());
  for (const auto& f : members) L = std::min(L, static_cast<int>(f.coeffs.size()));
  if (L - n0 < 32)
    throw ComputeError(Errc::ZeroPilotCoefficient,
                       "pilot has no run of 32 nonzero coefficients within the available data");
  out.shift_n0 = n0;

  std::vector<PowerSeries<R>> work;
  work.reserve(members.size());
  for (const auto& f : members) {
    PowerSeries<R> g = f.shifted(n0);
    g.coeffs.resize(static_cast<std::size_t>(L - n0));
    work.push_back(std::move(g));
  }
  Recurrence<R> wrec = n0 > 0 ? rec.shifted(n0) : rec;
  int Lw = L - n0;
  if (wrec.max_n() < Lw - 1) Lw = wrec.max_n() + 1;

  // gamma_n = pilot_n / lambda^n; (lambda^n) is then an exact solution of
  // the scaled recurrence and Lemma 3 applies with zero residual.
  const PowerSeries<R>& ps = work[static_cast<std::size_t>(pilot)];
  std::vector<Complex<R>> gamma(static_cast<std::size_t>(Lw));
  {
    Complex<R> lam_pow(R(1));
    for (int n = 0; n < Lw; ++n) {
      gamma[static_cast<std::size_t>(n)] = ps.coeffs[static_cast<std::size_t>(n)] / lam_pow;
      lam_pow *= lambda;
    }
  }
  ScaledRecurrence<R> scaled = scale_recurrence(wrec, std::move(gamma));
  DeflatedRecurrence<R> deflated = deflate_recurrence(scaled.derived, lambda, Lw - 1, ctx);

  for (int j = 0; j < static_cast<int>(work.size()); ++j) {
    if (j == pilot) continue;
    std::vector<Complex<R>> g(work[static_cast<std::size_t>(j)].coeffs.begin(),
                              work[static_cast<std::size_t>(j)].coeffs.begin() + Lw);
    std::vector<Complex<R>> G = scaled.to_scaled(g);
    std::vector<Complex<R>> F = deflated.map_solution(G);
    Antidifference<R> anti = antidifference(F, lambda, std::nullopt, ctx);
    if (anti.branch != Antidifference<R>::Branch::TailSum)
      throw ComputeError(Errc::HypothesisViolated,
                         "companion grew faster than |lambda| under deflation; circle assignment is off");
    std::vector<Complex<R>> lifted(anti.coeffs.begin(),
                                   anti.coeffs.begin() + anti.reliable_count);
    lifted = scaled.from_scaled(lifted);
    out.lifted.emplace_back(std::move(lifted));
    out.lifted_mu.push_back(anti.mu);
  }
  out.kept = ps;
  return out;
}

// ---------------------------------------------------------------------------
// The full Theorem-2 style construction

struct ProvenanceRecord {
  int stage = 0;
  double circle_radius = 0;
  std::string branch;
  int rank = 0;
  int shift_n0 = 0;
  std::vector<double> residuals;
};

template <class R>
struct SystemMember {
  PowerSeries<R> series;
  RadiusEstimate radius;
  std::vector<CxF> singular_points;
  std::vector<std::pair<CxF, int>> pole_orders;  // only on geometric circles
  std::vector<Complex<R>> coords;                // in the (shifted) initial basis
};

template <class R>
struct FundamentalSystem {
  std::vector<SystemMember<R>> members;
  std::vector<ProvenanceRecord> provenance;
  int total_shift = 0;
  int independence_rank = 0;
};

class BuilderError : public ComputeError {
 public:
  BuilderError(Errc code, const std::string& what, std::vector<ProvenanceRecord> prov)
      : ComputeError(code, what), provenance(std::move(prov)) {}
  std::vector<ProvenanceRecord> provenance;
};

// Rate information for a recurrence's alpha_n zeros: by provider class when
// declared, otherwise estimated from sampled zero trajectories.
template <class R>
RateInfo rate_info_for_recurrence(const Recurrence<R>& rec, const RootSet& alpha_zeros, int N_hint,
                                  const PrecisionContext& ctx) {
  auto declared = rec.perturbation_geometric();
  if (declared.has_value())
    return RateInfo::all(*declared ? RateInfo::Class::Geometric : RateInfo::Class::NonGeometric);

  int m = rec.order();
  int hi = std::min(N_hint, rec.max_n());
  if (hi < m + 8) return RateInfo::all(RateInfo::Class::Unknown);
  int samples = std::min(48, hi - m + 1);
  RateInfo info;
  std::vector<int> ns;
  for (int i = 0; i < samples; ++i) ns.push_back(m + (hi - m) * i / std::max(1, samples - 1));

  // eps-level clustering keeps near-multiple zeros split, matching the
  // square-root approach rate of a perturbed multiple zero
  RootSolveOptions topt;
  topt.clustering_radius_rel = ctx.exact() ? 0.0 : std::pow(10.0, ctx.zero_threshold_log10());
  std::vector<std::vector<CxF>> zero_sets;
  for (int n : ns) {
    RootSet rs = poly_roots(alpha_poly_at(rec, n), ctx, topt);
    std::vector<CxF> pts;
    for (const auto& root : rs.roots)
      for (int t = 0; t < root.multiplicity; ++t) pts.push_back(root.location);
    zero_sets.push_back(std::move(pts));
  }

  for (const auto& limit_root : alpha_zeros.roots) {
    std::vector<double> xs, ys;
    int converged = 0;
    BigFloat floor = ctx.exact() ? BigFloat(0) : ctx.zero_threshold() * abs_bf(limit_root.location);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      // distance of the tau-th nearest zero of alpha_n
      std::vector<BigFloat> dists;
      for (const auto& z : zero_sets[i]) dists.push_back(abs_bf(z - limit_root.location));
      if (static_cast<int>(dists.size()) < limit_root.multiplicity) continue;
      std::nth_element(dists.begin(), dists.begin() + (limit_root.multiplicity - 1), dists.end());
      BigFloat d = dists[static_cast<std::size_t>(limit_root.multiplicity - 1)];
      if (d <= floor) {
        ++converged;
        continue;
      }
      xs.push_back(static_cast<double>(ns[i]));
      ys.push_back(to_double(log(d)));
    }
    RateFit fit = detail::classify_rate(xs, ys, converged);
    RateInfo::Class cls = fit.rate == RateClass::Geometric ? RateInfo::Class::Geometric
                                                           : RateInfo::Class::NonGeometric;
    if (fit.rate == RateClass::Undetermined && fit.points == 0 && converged == 0)
      cls = RateInfo::Class::Unknown;
    info.per_zero.emplace_back(limit_root.location, cls);
  }
  return info;
}

template <class R>
RadiusEstimate robust_radius(const PowerSeries<R>& f, const PrecisionContext& ctx) {
  try {
    return estimate_radius(f, RadiusMethod::RatioTest, ctx);
  } catch (const ComputeError&) {
    return estimate_radius(f, RadiusMethod::RootTestRegression, ctx);
  }
}

// Build a fundamental system isolating each circle of zeros of alpha:
// geometric circles via kill_poles/prescribe_poles, single-zero
// non-geometric circles via the Evgrafov step.  Circles are processed in
// increasing radius; each stage's leftovers (nullspace combinations or
// lifted companions) feed the next.
template <class R>
FundamentalSystem<R> build_fundamental_system(const Recurrence<R>& rec, int N,
                                              const PrecisionContext& ctx,
                                              BuilderOptions<R> opt = {}) {
  int m = rec.order();
  rec.limit();  // LimitUnknown when absent

  std::vector<PowerSeries<R>> basis;
  if (opt.initial_basis) {
    basis = *opt.initial_basis;
    if (static_cast<int>(basis.size()) != m)
      throw std::invalid_argument("initial basis must have exactly m members");
  } else {
    for (int k = 0; k < m; ++k) {
      std::vector<Complex<R>> e(static_cast<std::size_t>(m));
      e[static_cast<std::size_t>(k)] = Complex<R>(R(1));
      basis.push_back(forward_solve(rec, std::move(e), N).series);
    }
  }

  RootSet alpha_zeros = poly_roots(alpha_limit_poly(rec), ctx);
  RateInfo rate = opt.rate_info ? *opt.rate_info : rate_info_for_recurrence(rec, alpha_zeros, N, ctx);
  std::vector<CircleGroup> circles = group_circles(alpha_zeros, rate, opt.circle_cluster_tol);

  FundamentalSystem<R> sys;
  std::vector<PowerSeries<R>> current = basis;
  Recurrence<R> work = rec;

  for (std::size_t ci = 0; ci < circles.size() && !current.empty(); ++ci) {
    const CircleGroup& grp = circles[ci];
    double outer = (ci + 1 < circles.size()) ? circles[ci + 1].radius : 2 * grp.radius;
    int Ncirc = grp.total_multiplicity();
    ProvenanceRecord prov;
    prov.stage = static_cast<int>(ci);
    prov.circle_radius = grp.radius;

    if (Ncirc >= 2 && !grp.geometric)
      throw BuilderError(Errc::CircleHypothesisViolated,
                         "shared circle at radius " + std::to_string(grp.radius) +
                             " lacks the geometric convergence hypothesis",
                         sys.provenance);

    if (grp.geometric) {
      KillPolesResult<R> kill = kill_poles(current, grp, outer, ctx, opt);
      prov.branch = "kill_poles";
      prov.rank = kill.rank;
      for (const auto& ex : kill.extractions) prov.residuals.push_back(ex.fit_residual);
      sys.provenance.push_back(prov);

      if (kill.rank == Ncirc) {
        std::vector<PrescribedPole<R>> poles = prescribe_poles(current, grp, kill, outer, ctx, opt);
        ProvenanceRecord pv;
        pv.stage = static_cast<int>(ci);
        pv.circle_radius = grp.radius;
        pv.branch = "prescribe";
        pv.rank = kill.rank;
        for (const auto& p : poles) pv.residuals.push_back(p.certificate);
        sys.provenance.push_back(pv);
        for (auto& p : poles) {
          SystemMember<R> mem;
          mem.radius = robust_radius(p.series, ctx);
          mem.singular_points.push_back(p.zeta_location);
          mem.pole_orders.emplace_back(p.zeta_location, p.order);
          mem.series = std::move(p.series);
          sys.members.push_back(std::move(mem));
        }
      }
      std::vector<PowerSeries<R>> next;
      for (const auto& c : kill.nullspace) {
        PowerSeries<R> combo = combine_members(current, c);
        if (kill.combo_reliable_len < static_cast<int>(combo.coeffs.size()))
          combo.coeffs.resize(static_cast<std::size_t>(std::max(0, kill.combo_reliable_len)));
        next.push_back(std::move(combo));
      }
      current = std::move(next);
    } else {
      // single simple zero without the geometric rate: Evgrafov
      std::vector<PowerSeries<R>> on_circle, off_circle;
      double upper = (ci + 1 < circles.size())
                         ? std::sqrt(grp.radius * circles[ci + 1].radius)
                         : std::numeric_limits<double>::infinity();
      for (auto& f : current) {
        RadiusEstimate est = robust_radius(f, ctx);
        (est.value < upper ? on_circle : off_circle).push_back(std::move(f));
      }
      prov.branch = "evgrafov";
      if (on_circle.empty()) {
        prov.rank = 0;
        sys.provenance.push_back(prov);
        current = std::move(off_circle);
        continue;
      }
      EvgrafovResult<R> ev = evgrafov_step(work, on_circle, grp.zeros[0], ctx, opt);
      prov.rank = 1;
      prov.shift_n0 = ev.shift_n0;
      for (double mu : ev.lifted_mu) prov.residuals.push_back(mu);
      sys.provenance.push_back(prov);

      if (ev.shift_n0 > 0) {
        sys.total_shift += ev.shift_n0;
        work = work.shifted(ev.shift_n0);
        for (auto& f : off_circle) f = f.shifted(ev.shift_n0);
        for (auto& mem : sys.members) mem.series = mem.series.shifted(ev.shift_n0);
      }

      SystemMember<R> mem;
      mem.series = std::move(ev.kept);
      mem.radius = robust_radius(mem.series, ctx);
      mem.singular_points.push_back(grp.zeros[0].location);
      sys.members.push_back(std::move(mem));

      current = std::move(ev.lifted);
      for (auto& f : off_circle) current.push_back(std::move(f));
    }
  }

  if (static_cast<int>(sys.members.size()) != m)
    throw BuilderError(Errc::NonTermination,
                       "only " + std::to_string(sys.members.size()) + " of " + std::to_string(m) +
                           " members produced; residual subspace dimension " +
                           std::to_string(current.size()),
                       sys.provenance);

  // coordinates in the (shifted) initial basis, and the independence rank
  detail::Mat<R> bmat(static_cast<std::size_t>(m), std::vector<Complex<R>>(static_cast<std::size_t>(m)));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      bmat[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
          basis[static_cast<std::size_t>(i)].coeff(sys.total_shift + k);
  BigFloat coord_tol = ctx.exact() ? BigFloat(0)
                                   : ctx.zero_threshold() * detail::max_entry_magnitude(bmat);
  for (auto& mem : sys.members) {
    std::vector<Complex<R>> rhs(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) rhs[static_cast<std::size_t>(k)] = mem.series.coeff(k);
    mem.coords = detail::solve_particular(bmat, std::move(rhs), coord_tol);
  }

  detail::Mat<R> mmat(static_cast<std::size_t>(m), std::vector<Complex<R>>(static_cast<std::size_t>(m)));
  for (int r = 0; r < m; ++r)
    for (int k = 0; k < m; ++k)
      mmat[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] =
          sys.members[static_cast<std::size_t>(r)].series.coeff(k);
  sys.independence_rank = detail::matrix_rank(mmat, 1e-8);
  return sys;
}

}  // namespace recurpade

#endif
