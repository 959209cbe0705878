#ifndef RECURPADE_DETAIL_LINALG_HPP
#define RECURPADE_DETAIL_LINALG_HPP

#include <vector>

#include "recurpade/errors.hpp"
#include "recurpade/scalar.hpp"

namespace recurpade::detail {

template <class R>
using Mat = std::vector<std::vector<Complex<R>>>;

template <class R>
BigFloat max_entry_magnitude(const Mat<R>& a) {
  BigFloat mx(0);
  for (const auto& row : a)
    for (const auto& v : row) mx = std::max(mx, abs_bf(v));
  return mx;
}

// Entry treated as zero: exactly (zero_tol == 0) or below the absolute
// threshold.  Callers pre-scale the tolerance.
template <class R>
bool entry_is_zero(const Complex<R>& v, const BigFloat& zero_tol) {
  if (zero_tol == 0) return v.is_zero();
  return abs_bf(v) <= zero_tol;
}

// In-place forward elimination, columns visited in ascending order, pivot
// row chosen by largest magnitude (ties -> lowest index), so the result is
// deterministic in both fields.  Returns the rank; pivot_row_of_col[j] = -1
// marks a free column.
template <class R>
int eliminate(Mat<R>& a, const BigFloat& zero_tol, std::vector<int>& pivot_row_of_col) {
  int rows = static_cast<int>(a.size());
  int cols = rows ? static_cast<int>(a[0].size()) : 0;
  pivot_row_of_col.assign(static_cast<std::size_t>(cols), -1);
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int best = -1;
    BigFloat best_mag(0);
    for (int r = rank; r < rows; ++r) {
      const Complex<R>& v = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      if (entry_is_zero(v, zero_tol)) continue;
      BigFloat mag = abs_bf(v);
      if (best < 0 || mag > best_mag) {
        best = r;
        best_mag = mag;
      }
    }
    if (best < 0) continue;
    std::swap(a[static_cast<std::size_t>(rank)], a[static_cast<std::size_t>(best)]);
    const Complex<R> pivot = a[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)];
    for (int r = rank + 1; r < rows; ++r) {
      Complex<R>& lead = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      if (lead.is_zero()) continue;
      Complex<R> factor = lead / pivot;
      for (int c = col; c < cols; ++c)
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            factor * a[static_cast<std::size_t>(rank)][static_cast<std::size_t>(c)];
      lead = Complex<R>();  // clear exactly
    }
    pivot_row_of_col[static_cast<std::size_t>(col)] = rank;
    ++rank;
  }
  return rank;
}

// Nullspace basis of the echelon form: one vector per free column, the free
// variable set to 1 and pivots back-substituted.
template <class R>
std::vector<std::vector<Complex<R>>> nullspace_from_echelon(const Mat<R>& u,
                                                            const std::vector<int>& pivot_row_of_col) {
  int cols = static_cast<int>(pivot_row_of_col.size());
  std::vector<std::vector<Complex<R>>> basis;
  for (int fc = 0; fc < cols; ++fc) {
    if (pivot_row_of_col[static_cast<std::size_t>(fc)] >= 0) continue;
    std::vector<Complex<R>> x(static_cast<std::size_t>(cols));
    x[static_cast<std::size_t>(fc)] = Complex<R>(R(1));
    for (int col = fc - 1; col >= 0; --col) {
      int pr = pivot_row_of_col[static_cast<std::size_t>(col)];
      if (pr < 0) continue;
      Complex<R> acc;
      for (int k = col + 1; k < cols; ++k)
        acc += u[static_cast<std::size_t>(pr)][static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
      x[static_cast<std::size_t>(col)] = -acc / u[static_cast<std::size_t>(pr)][static_cast<std::size_t>(col)];
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

// Particular solution of A x = b with free variables pinned to 0.
// Throws RankDeficient when the system is inconsistent.
template <class R>
std::vector<Complex<R>> solve_particular(Mat<R> a, std::vector<Complex<R>> b, const BigFloat& zero_tol) {
  int rows = static_cast<int>(a.size());
  int cols = rows ? static_cast<int>(a[0].size()) : 0;
  for (int r = 0; r < rows; ++r) a[static_cast<std::size_t>(r)].push_back(b[static_cast<std::size_t>(r)]);
  std::vector<int> pivots;
  int rank = eliminate(a, zero_tol, pivots);
  pivots.resize(static_cast<std::size_t>(cols));  // drop the augmented column's pivot slot
  // inconsistency: a pivot landed in the augmented column
  for (int r = 0; r < rows; ++r) {
    bool lhs_zero = true;
    for (int c = 0; c < cols; ++c)
      if (!entry_is_zero(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], zero_tol)) {
        lhs_zero = false;
        break;
      }
    if (lhs_zero && !entry_is_zero(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(cols)], zero_tol))
      throw ComputeError(Errc::RankDeficient, "inconsistent linear system");
  }
  (void)rank;
  std::vector<Complex<R>> x(static_cast<std::size_t>(cols));
  for (int col = cols - 1; col >= 0; --col) {
    int pr = pivots[static_cast<std::size_t>(col)];
    if (pr < 0) continue;
    Complex<R> acc = a[static_cast<std::size_t>(pr)][static_cast<std::size_t>(cols)];
    for (int k = col + 1; k < cols; ++k)
      acc -= a[static_cast<std::size_t>(pr)][static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
    x[static_cast<std::size_t>(col)] = acc / a[static_cast<std::size_t>(pr)][static_cast<std::size_t>(col)];
  }
  return x;
}

// Weighted least squares via the normal equations: minimize ||W(Ax - f)||_2.
// Column count is small everywhere this is used.
template <class R>
std::vector<Complex<R>> least_squares(const Mat<R>& a, const std::vector<Complex<R>>& f,
                                      const std::vector<Complex<R>>& w) {
  int rows = static_cast<int>(a.size());
  int cols = rows ? static_cast<int>(a[0].size()) : 0;
  Mat<R> g(static_cast<std::size_t>(cols), std::vector<Complex<R>>(static_cast<std::size_t>(cols)));
  std::vector<Complex<R>> rhs(static_cast<std::size_t>(cols));
  for (int r = 0; r < rows; ++r) {
    Complex<R> w2 = w[static_cast<std::size_t>(r)] * w[static_cast<std::size_t>(r)].conj();
    for (int i = 0; i < cols; ++i) {
      Complex<R> ai = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)].conj() * w2;
      rhs[static_cast<std::size_t>(i)] += ai * f[static_cast<std::size_t>(r)];
      for (int j = 0; j < cols; ++j)
        g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
            ai * a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
    }
  }
  return solve_particular(std::move(g), std::move(rhs), BigFloat(0));
}

// Numerical rank with the tolerance scaled to the largest entry.
template <class R>
int matrix_rank(Mat<R> a, double rel_tol) {
  BigFloat scale = max_entry_magnitude(a);
  BigFloat tol = (rel_tol > 0 && scale > 0) ? BigFloat(rel_tol) * scale : BigFloat(0);
  std::vector<int> pivots;
  return eliminate(a, tol, pivots);
}

}  // namespace recurpade::detail

#endif
