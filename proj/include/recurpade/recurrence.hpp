#ifndef RECURPADE_RECURRENCE_HPP
#define RECURPADE_RECURRENCE_HPP

#include <climits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "recurpade/power_series.hpp"
#include "recurpade/roots.hpp"

namespace recurpade {

// Order-m relation f_n + alpha_{n,1} f_{n-1} + ... + alpha_{n,m} f_{n-m} = 0,
// n >= m, with alpha_{n,m} != 0 throughout.  Coefficients come from one of
// three providers: an explicit table, plain constants, or a
// constant-plus-perturbation rule alpha_{n,j} = alpha_j + c_j * r_j(n).
template <class R>
class Recurrence {
 public:
  enum class ProviderKind { Constant, Table, Perturbed };

  struct Perturbation {
    enum class Kind { None, OneOverN, Geometric, Table };
    Kind kind = Kind::None;
    Complex<R> amplitude{};           // c_j
    R rho{};                          // Geometric: c_j * rho^n
    std::vector<Complex<R>> values;   // Table: r_j(n) = values[n - order]
  };

  static Recurrence constant(std::vector<Complex<R>> limit, std::string id = "constant") {
    if (limit.empty()) throw std::invalid_argument("Recurrence: order must be >= 1");
    if (limit.back().is_zero()) throw std::invalid_argument("Recurrence: alpha_m must be nonzero");
    Recurrence r;
    r.kind_ = ProviderKind::Constant;
    r.m_ = static_cast<int>(limit.size());
    r.limit_ = std::move(limit);
    r.id_ = std::move(id);
    return r;
  }

  // rows[i] holds (alpha_{n,1},...,alpha_{n,m}) for n = order + i.
  static Recurrence from_table(int order, std::vector<std::vector<Complex<R>>> rows,
                               std::optional<std::vector<Complex<R>>> limit = std::nullopt,
                               std::string id = "table") {
    if (order < 1) throw std::invalid_argument("Recurrence: order must be >= 1");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(rows[i].size()) != order)
        throw std::invalid_argument("Recurrence: table row " + std::to_string(i) + " has wrong width");
      if (rows[i].back().is_zero())
        throw std::invalid_argument("Recurrence: alpha_{n,m} = 0 at n = " + std::to_string(order + static_cast<int>(i)));
    }
    if (limit && (static_cast<int>(limit->size()) != order || limit->back().is_zero()))
      throw std::invalid_argument("Recurrence: bad limit coefficients");
    Recurrence r;
    r.kind_ = ProviderKind::Table;
    r.m_ = order;
    r.rows_ = std::move(rows);
    r.limit_ = std::move(limit);
    r.id_ = std::move(id);
    return r;
  }

  static Recurrence perturbed(std::vector<Complex<R>> limit, std::vector<Perturbation> perturbations,
                              std::string id = "perturbed") {
    if (limit.empty()) throw std::invalid_argument("Recurrence: order must be >= 1");
    if (limit.back().is_zero()) throw std::invalid_argument("Recurrence: alpha_m must be nonzero");
    if (perturbations.size() != limit.size())
      throw std::invalid_argument("Recurrence: one perturbation rule per coefficient");
    Recurrence r;
    r.kind_ = ProviderKind::Perturbed;
    r.m_ = static_cast<int>(limit.size());
    r.limit_ = std::move(limit);
    r.perturbations_ = std::move(perturbations);
    r.id_ = std::move(id);
    return r;
  }

  int order() const { return m_; }
  const std::string& id() const { return id_; }
  ProviderKind provider_kind() const { return kind_; }

  bool has_limit() const { return limit_.has_value(); }
  const std::vector<Complex<R>>& limit() const {
    if (!limit_) throw ComputeError(Errc::LimitUnknown, "recurrence has no limit coefficients");
    return *limit_;
  }

  // Largest n for which coefficients are available (INT_MAX for rules).
  int max_n() const {
    if (kind_ != ProviderKind::Table) return INT_MAX;
    return m_ + static_cast<int>(rows_.size()) - 1 - shift_;
  }

  std::vector<Complex<R>> coeffs_at(int n) const {
    if (n < m_) throw std::invalid_argument("coeffs_at: n must be >= order");
    int nn = n + shift_;
    switch (kind_) {
      case ProviderKind::Constant:
        return *limit_;
      case ProviderKind::Table: {
        int idx = nn - m_;
        if (idx < 0 || idx >= static_cast<int>(rows_.size()))
          throw std::out_of_range("coeffs_at: n = " + std::to_string(n) + " outside table");
        return rows_[static_cast<std::size_t>(idx)];
      }
      case ProviderKind::Perturbed: {
        std::vector<Complex<R>> row(*limit_);
        for (int j = 0; j < m_; ++j) {
          const Perturbation& pt = perturbations_[static_cast<std::size_t>(j)];
          switch (pt.kind) {
            case Perturbation::Kind::None:
              break;
            case Perturbation::Kind::OneOverN:
              row[static_cast<std::size_t>(j)] += pt.amplitude / Complex<R>(R(nn));
              break;
            case Perturbation::Kind::Geometric:
              row[static_cast<std::size_t>(j)] += pt.amplitude * Complex<R>(int_pow(pt.rho, nn));
              break;
            case Perturbation::Kind::Table: {
              int idx = nn - m_;
              if (idx < 0 || idx >= static_cast<int>(pt.values.size()))
                throw std::out_of_range("perturbation table exhausted at n = " + std::to_string(n));
              row[static_cast<std::size_t>(j)] += pt.amplitude * pt.values[static_cast<std::size_t>(idx)];
              break;
            }
          }
        }
        if (row.back().is_zero())
          throw std::invalid_argument("Recurrence: alpha_{n,m} = 0 at n = " + std::to_string(n));
        return row;
      }
    }
    throw std::logic_error("unreachable");
  }

  // View with indices shifted by n0: coeffs_at(n) reads the base at n + n0.
  Recurrence shifted(int n0) const {
    Recurrence r = *this;
    r.shift_ += n0;
    r.id_ = id_ + "+shift" + std::to_string(r.shift_);
    return r;
  }

  int shift_origin() const { return shift_; }

  // True when the coefficient perturbation is known to vanish geometrically
  // (constant coefficients count; 1/n rules do not).  Table providers are
  // unknown: callers estimate from the zero trajectories instead.
  std::optional<bool> perturbation_geometric() const {
    switch (kind_) {
      case ProviderKind::Constant:
        return true;
      case ProviderKind::Table:
        return std::nullopt;
      case ProviderKind::Perturbed:
        for (const auto& pt : perturbations_) {
          if (pt.kind == Perturbation::Kind::OneOverN) return false;
          if (pt.kind == Perturbation::Kind::Table) return std::nullopt;
        }
        return true;
    }
    return std::nullopt;
  }

 private:
  Recurrence() = default;

  ProviderKind kind_ = ProviderKind::Constant;
  int m_ = 0;
  int shift_ = 0;
  std::optional<std::vector<Complex<R>>> limit_;
  std::vector<std::vector<Complex<R>>> rows_;
  std::vector<Perturbation> perturbations_;
  std::string id_;
};

template <class R>
struct Solution {
  PowerSeries<R> series;
  std::string recurrence_id;
  std::vector<Complex<R>> initial_conditions;
};

template <class R>
Solution<R> forward_solve(const Recurrence<R>& rec, std::vector<Complex<R>> init, int N) {
  int m = rec.order();
  if (static_cast<int>(init.size()) != m) throw std::invalid_argument("forward_solve: need m initial values");
  if (N < m - 1) throw std::invalid_argument("forward_solve: N must be >= m-1");
  std::vector<Complex<R>> f(static_cast<std::size_t>(N) + 1);
  for (int i = 0; i < m; ++i) f[static_cast<std::size_t>(i)] = init[static_cast<std::size_t>(i)];
  for (int n = m; n <= N; ++n) {
    std::vector<Complex<R>> a = rec.coeffs_at(n);
    Complex<R> acc;
    for (int j = 1; j <= m; ++j) acc += a[static_cast<std::size_t>(j - 1)] * f[static_cast<std::size_t>(n - j)];
    f[static_cast<std::size_t>(n)] = -acc;
  }
  PowerSeries<R> series(std::move(f), typename PowerSeries<R>::RecurrenceGenerated{rec.id(), init});
  return Solution<R>{std::move(series), rec.id(), std::move(init)};
}

// Reconstruct f_0..f_{n0-1} from the m values f_{n0}..f_{n0+m-1}, running
// the relation downward (alpha_{n,m} != 0 makes this well defined).
template <class R>
std::vector<Complex<R>> backward_solve(const Recurrence<R>& rec, const std::vector<Complex<R>>& tail, int n0) {
  int m = rec.order();
  if (static_cast<int>(tail.size()) != m) throw std::invalid_argument("backward_solve: need m tail values");
  if (n0 < 0) throw std::invalid_argument("backward_solve: n0 must be >= 0");
  std::vector<Complex<R>> f(static_cast<std::size_t>(n0 + m));
  for (int i = 0; i < m; ++i) f[static_cast<std::size_t>(n0 + i)] = tail[static_cast<std::size_t>(i)];
  for (int n = n0 + m - 1; n >= m; --n) {
    std::vector<Complex<R>> a = rec.coeffs_at(n);
    Complex<R> acc = f[static_cast<std::size_t>(n)];
    for (int j = 1; j < m; ++j) acc += a[static_cast<std::size_t>(j - 1)] * f[static_cast<std::size_t>(n - j)];
    f[static_cast<std::size_t>(n - m)] = -acc / a[static_cast<std::size_t>(m - 1)];
  }
  f.resize(static_cast<std::size_t>(n0));
  return f;
}

// alpha_n(z) = 1 + alpha_{n,1} z + ... + alpha_{n,m} z^m
template <class R>
Polynomial<R> alpha_poly_at(const Recurrence<R>& rec, int n) {
  std::vector<Complex<R>> c;
  c.reserve(static_cast<std::size_t>(rec.order()) + 1);
  c.emplace_back(R(1));
  for (const auto& a : rec.coeffs_at(n)) c.push_back(a);
  return Polynomial<R>(std::move(c));
}

// p(z) = z^m + alpha_1 z^{m-1} + ... + alpha_m
template <class R>
Polynomial<R> char_poly(const Recurrence<R>& rec) {
  const auto& lim = rec.limit();
  int m = rec.order();
  std::vector<Complex<R>> c(static_cast<std::size_t>(m) + 1);
  c[static_cast<std::size_t>(m)] = Complex<R>(R(1));
  for (int j = 1; j <= m; ++j) c[static_cast<std::size_t>(m - j)] = lim[static_cast<std::size_t>(j - 1)];
  return Polynomial<R>(std::move(c));
}

// alpha(z) = z^m p(1/z): the reversed characteristic polynomial, whose zeros
// are the reciprocals of the characteristic roots.
template <class R>
Polynomial<R> alpha_limit_poly(const Recurrence<R>& rec) {
  return char_poly(rec).reversed(rec.order());
}

struct SGBound {
  double S = 0;
  double G = 0;
  int window_lo = 0;
  int window_hi = 0;
  bool g_growing = false;  // G still trending up at the window edge
};

// Empirical S/G over the tail half of [m, N_max]: min/max modulus of the
// zeros of alpha_n, scanned over finitely many n.
template <class R>
SGBound sg_bounds(const Recurrence<R>& rec, int N_max, const PrecisionContext& ctx) {
  int m = rec.order();
  if (N_max < m) throw std::invalid_argument("sg_bounds: N_max must be >= order");
  int lo = std::max(m, N_max / 2);
  SGBound out;
  out.window_lo = lo;
  out.window_hi = N_max;
  double S = std::numeric_limits<double>::infinity();
  double G = 0;
  double g_mid = 0;
  int mid = lo + (N_max - lo) / 2;
  for (int n = lo; n <= N_max; ++n) {
    RootSet roots = poly_roots(alpha_poly_at(rec, n), ctx);
    double mn = std::numeric_limits<double>::infinity(), mx = 0;
    for (const auto& root : roots.roots) {
      double a = abs_double(root.location);
      mn = std::min(mn, a);
      mx = std::max(mx, a);
    }
    S = std::min(S, mn);
    G = std::max(G, mx);
    if (n == mid) g_mid = G;
  }
  out.S = S;
  out.G = G;
  out.g_growing = g_mid > 0 && G > 1.1 * g_mid;
  return out;
}

}  // namespace recurpade

#endif
