#ifndef RECURPADE_TRANSFORMS_HPP
#define RECURPADE_TRANSFORMS_HPP

#include <optional>
#include <vector>

#include "recurpade/radius.hpp"
#include "recurpade/recurrence.hpp"

namespace recurpade {

// ---------------------------------------------------------------------------
// Solution scaling: F_n = f_n / gamma_n solves the derived recurrence with
// alpha'_{n,j} = alpha_{n,j} gamma_{n-j} / gamma_n.

template <class R>
struct ScaledRecurrence {
  Recurrence<R> base;
  std::vector<Complex<R>> gamma;  // gamma_0..gamma_N, all nonzero
  Recurrence<R> derived;

  std::vector<Complex<R>> to_scaled(const std::vector<Complex<R>>& f) const {
    std::size_t n = std::min(f.size(), gamma.size());
    std::vector<Complex<R>> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = f[i] / gamma[i];
    return out;
  }

  std::vector<Complex<R>> from_scaled(const std::vector<Complex<R>>& F) const {
    std::size_t n = std::min(F.size(), gamma.size());
    std::vector<Complex<R>> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = F[i] * gamma[i];
    return out;
  }
};

template <class R>
ScaledRecurrence<R> scale_recurrence(const Recurrence<R>& rec, std::vector<Complex<R>> gamma,
                                     double gamma_ratio_tol = 0.05) {
  int m = rec.order();
  int N = static_cast<int>(gamma.size()) - 1;
  if (N < m) throw std::invalid_argument("scale_recurrence: need gamma_0..gamma_N with N >= order");
  for (int n = 0; n <= N; ++n)
    if (gamma[static_cast<std::size_t>(n)].is_zero())
      throw ComputeError(Errc::ZeroGamma, "gamma_n = 0 at n = " + std::to_string(n));

  std::vector<std::vector<Complex<R>>> rows;
  rows.reserve(static_cast<std::size_t>(N - m + 1));
  for (int n = m; n <= N; ++n) {
    std::vector<Complex<R>> a = rec.coeffs_at(n);
    std::vector<Complex<R>> row(static_cast<std::size_t>(m));
    for (int j = 1; j <= m; ++j)
      row[static_cast<std::size_t>(j - 1)] =
          a[static_cast<std::size_t>(j - 1)] * gamma[static_cast<std::size_t>(n - j)] / gamma[static_cast<std::size_t>(n)];
    rows.push_back(std::move(row));
  }

  // gamma_{n+1}/gamma_n -> 1 makes the characteristic polynomial carry over.
  bool ratio_to_one = false;
  if (rec.has_limit()) {
    ratio_to_one = true;
    int lo = N - std::max(1, N / 4);
    for (int n = std::max(0, lo); n < N; ++n) {
      CxF ratio = to_bigfloat_cx(gamma[static_cast<std::size_t>(n + 1)]) /
                  to_bigfloat_cx(gamma[static_cast<std::size_t>(n)]);
      if (to_double(abs_bf(ratio - CxF{BigFloat(1)})) > gamma_ratio_tol) {
        ratio_to_one = false;
        break;
      }
    }
  }
  std::optional<std::vector<Complex<R>>> lim;
  if (ratio_to_one) lim = rec.limit();
  ScaledRecurrence<R> out{rec, std::move(gamma),
                          Recurrence<R>::from_table(m, std::move(rows), std::move(lim), rec.id() + "/scaled")};
  return out;
}

// ---------------------------------------------------------------------------
// Order deflation by a geometric solution (lambda^n): the relation factors
// through F_n = f_{n+1} - lambda f_n, with beta_{n,j} - lambda beta_{n,j-1}
// = alpha_{n,j}.

template <class R>
struct DeflatedRecurrence {
  Recurrence<R> base;
  Complex<R> lambda;
  std::vector<std::vector<Complex<R>>> betas;  // per n = m..N: beta_{n,1}..beta_{n,m-1}
  int first_n = 0;                             // base index of betas[0]
  std::optional<Recurrence<R>> derived;        // order m-1; nullopt when m = 1

  std::vector<Complex<R>> map_solution(const std::vector<Complex<R>>& f) const {
    if (f.size() < 2) return {};
    std::vector<Complex<R>> F(f.size() - 1);
    for (std::size_t n = 0; n + 1 < f.size(); ++n) F[n] = f[n + 1] - lambda * f[n];
    return F;
  }
};

// residual_tol is relative to the term-magnitude scale of p_n(lambda);
// <= 0 selects the mode default (0 exact, 10 * zero_threshold bigfloat).
template <class R>
DeflatedRecurrence<R> deflate_recurrence(const Recurrence<R>& rec, const Complex<R>& lambda, int N,
                                         const PrecisionContext& ctx, double residual_tol = -1) {
  if (lambda.is_zero()) throw ComputeError(Errc::ZeroLambda, "deflation root must be nonzero");
  int m = rec.order();
  if (N < m) throw std::invalid_argument("deflate_recurrence: N must be >= order");

  BigFloat tol;
  if (residual_tol >= 0)
    tol = BigFloat(residual_tol);
  else
    tol = ctx.exact() ? BigFloat(0) : BigFloat(10) * ctx.zero_threshold();

  CxF lam_f = to_bigfloat_cx(lambda);
  std::vector<std::vector<Complex<R>>> betas;
  betas.reserve(static_cast<std::size_t>(N - m + 1));

  for (int n = m; n <= N; ++n) {
    std::vector<Complex<R>> a = rec.coeffs_at(n);
    // p_n(lambda) and its magnitude scale
    Complex<R> p = Complex<R>(R(1));
    BigFloat scale = abs_bf(CxF{BigFloat(1)});
    for (int j = 1; j <= m; ++j) {
      p = p * lambda + a[static_cast<std::size_t>(j - 1)];
      scale = scale * abs_bf(lam_f) + abs_bf(to_bigfloat_cx(a[static_cast<std::size_t>(j - 1)]));
    }
    if (abs_bf(to_bigfloat_cx(p)) > tol * scale)
      throw ComputeError(Errc::NotASolution,
                         "(lambda^n) does not solve the recurrence; worst residual at n = " + std::to_string(n));
    std::vector<Complex<R>> beta(static_cast<std::size_t>(std::max(0, m - 1)));
    Complex<R> prev = Complex<R>(R(1));  // beta_{n,0}
    for (int j = 1; j <= m - 1; ++j) {
      prev = a[static_cast<std::size_t>(j - 1)] + lambda * prev;
      beta[static_cast<std::size_t>(j - 1)] = prev;
    }
    if (m >= 2 && beta.back().is_zero())
      throw ComputeError(Errc::NotASolution, "beta_{n,m-1} = 0 at n = " + std::to_string(n));
    betas.push_back(std::move(beta));
  }

  std::optional<Recurrence<R>> derived;
  if (m >= 2) {
    // F_k + beta_{k+1,1} F_{k-1} + ... + beta_{k+1,m-1} F_{k-m+1} = 0 for
    // k >= m-1, so derived row k reads betas at base index k+1: rows[i] =
    // betas[i] with i = k - (m-1).
    std::vector<std::vector<Complex<R>>> rows = betas;
    std::optional<std::vector<Complex<R>>> lim;
    if (rec.has_limit()) {
      std::vector<Complex<R>> bl(static_cast<std::size_t>(m - 1));
      Complex<R> prev = Complex<R>(R(1));
      const auto& al = rec.limit();
      for (int j = 1; j <= m - 1; ++j) {
        prev = al[static_cast<std::size_t>(j - 1)] + lambda * prev;
        bl[static_cast<std::size_t>(j - 1)] = prev;
      }
      lim = std::move(bl);
    }
    derived = Recurrence<R>::from_table(m - 1, std::move(rows), std::move(lim), rec.id() + "/deflated");
  }
  return DeflatedRecurrence<R>{rec, lambda, std::move(betas), m, std::move(derived)};
}

// Max coefficient deviation between (z - lambda) * (z^{m-1} + beta_1 z^{m-2}
// + ... + beta_{m-1}) and the base characteristic polynomial, with the beta
// limits read from the tail of the computed rows.
template <class R>
double conexion_check(const DeflatedRecurrence<R>& def) {
  const Recurrence<R>& base = def.base;
  if (!base.has_limit()) throw ComputeError(Errc::LimitUnknown, "conexion check needs limit coefficients");
  int m = base.order();
  std::vector<Complex<R>> beta_hat =
      def.betas.empty() ? std::vector<Complex<R>>{} : def.betas.back();

  // q_hat(z) = z^{m-1} + beta_1 z^{m-2} + ... + beta_{m-1}
  std::vector<Complex<R>> qc(static_cast<std::size_t>(m));
  qc[static_cast<std::size_t>(m - 1)] = Complex<R>(R(1));
  for (int j = 1; j <= m - 1; ++j) qc[static_cast<std::size_t>(m - 1 - j)] = beta_hat[static_cast<std::size_t>(j - 1)];
  Polynomial<R> q_hat(std::move(qc));
  Polynomial<R> factor(std::vector<Complex<R>>{-def.lambda, Complex<R>(R(1))});
  Polynomial<R> lhs = factor * q_hat;
  Polynomial<R> rhs = char_poly(base);
  Polynomial<R> diff = lhs - rhs;
  double resid = 0;
  for (int i = 0; i <= diff.degree(); ++i) resid = std::max(resid, abs_double(diff.coeff(i)));
  return resid;
}

// ---------------------------------------------------------------------------
// Antidifference: recover f with f_{n+1} - lambda f_n = F_n, preserving the
// growth rate mu = limsup |F_n|^{1/n} (mu != |lambda|).

template <class R>
struct Antidifference {
  enum class Branch { TailSum, PrefixSum };
  std::vector<Complex<R>> coeffs;
  int reliable_count = 0;  // leading indices that carry full accuracy
  Branch branch = Branch::TailSum;
  double mu = 0;
};

template <class R>
Antidifference<R> antidifference(const std::vector<Complex<R>>& F, const Complex<R>& lambda,
                                 std::optional<double> mu_hint, const PrecisionContext& ctx,
                                 double margin = 1e-2) {
  if (lambda.is_zero()) throw ComputeError(Errc::ZeroLambda, "lambda must be nonzero");
  if (F.empty()) throw ComputeError(Errc::InsufficientData, "empty F");

  bool all_zero = true;
  for (const auto& v : F)
    if (!v.is_zero()) {
      all_zero = false;
      break;
    }
  if (all_zero) {
    Antidifference<R> out;
    out.coeffs.assign(F.size(), Complex<R>());
    out.reliable_count = static_cast<int>(F.size());
    out.branch = Antidifference<R>::Branch::TailSum;
    return out;
  }

  double mu;
  if (mu_hint) {
    mu = *mu_hint;
  } else {
    PowerSeries<R> fs(F);
    mu = 1.0 / estimate_radius(fs, RadiusMethod::RootTestRegression, ctx).value;
  }
  double lam_abs = abs_double(Complex<R>(lambda));
  if (std::abs(mu - lam_abs) < margin * lam_abs)
    throw ComputeError(Errc::ModulusCollision, "growth of F collides with |lambda|");

  Antidifference<R> out;
  out.mu = mu;
  int M = static_cast<int>(F.size()) - 1;
  if (mu < lam_abs) {
    // f_n = -sum_{k>=0} F_{n+k} / lambda^{k+1}, summed over the whole
    // available tail via S_n = (F_n + S_{n+1}) / lambda.  Truncating at the
    // data edge perturbs f by a multiple of lambda^n, so only indices with
    // (mu/|lambda|)^{M+1-n} below tolerance are trustworthy.
    out.branch = Antidifference<R>::Branch::TailSum;
    out.coeffs.assign(F.size(), Complex<R>());
    Complex<R> S;
    for (int n = M; n >= 0; --n) {
      S = (F[static_cast<std::size_t>(n)] + S) / lambda;
      out.coeffs[static_cast<std::size_t>(n)] = -S;
    }
    double tol_log = -(static_cast<double>(ctx.float_precision_bits()) / 4.0) * 2.302585092994046;
    int drop = 0;
    if (mu > 0) {
      double ratio_log = std::log(mu / lam_abs);
      drop = static_cast<int>(std::ceil(tol_log / ratio_log));
    }
    out.reliable_count = static_cast<int>(F.size()) - drop;
    if (out.reliable_count <= 0)
      throw ComputeError(Errc::InsufficientTail, "tail too short to reach truncation tolerance");
  } else {
    // f_n = F_{n-1} + lambda F_{n-2} + ... + lambda^{n-1} F_0, exactly.
    out.branch = Antidifference<R>::Branch::PrefixSum;
    out.coeffs.assign(F.size() + 1, Complex<R>());
    for (int n = 1; n <= M + 1; ++n)
      out.coeffs[static_cast<std::size_t>(n)] =
          F[static_cast<std::size_t>(n - 1)] + lambda * out.coeffs[static_cast<std::size_t>(n - 1)];
    out.reliable_count = static_cast<int>(out.coeffs.size());
  }
  return out;
}

}  // namespace recurpade

#endif
