#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace packlab {

enum class LpStatus { optimal, unbounded, iteration_limit };

namespace detail {
template <class T>
struct ScalarTraits {
  static constexpr bool exact = true;
  static T eps() { return T(0); }
};
template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double eps() { return 1e-9; }
};
}  // namespace detail

// Dense revised simplex for min c'x s.t. Ax = b, x >= 0, driven from an
// explicit feasible starting basis. Columns are sparse; the basis inverse is
// kept densely and updated per pivot. Entering rule is Dantzig with a
// permanent switch to Bland after a long degenerate run (always Bland for
// exact scalars), which keeps the method finite.
template <class T>
class DenseSimplex {
 public:
  explicit DenseSimplex(int rows) : m_(rows) {}

  int add_column(std::vector<std::pair<int, T>> col, T cost) {
    cols_.push_back(std::move(col));
    costs_.push_back(std::move(cost));
    return static_cast<int>(cols_.size()) - 1;
  }

  void set_rhs(std::vector<T> b) {
    if (static_cast<int>(b.size()) != m_) throw std::invalid_argument("rhs size mismatch");
    b_ = std::move(b);
  }

  // Basis columns must form a nonsingular matrix with Binv*b >= 0.
  void set_basis(std::vector<int> basis) {
    if (static_cast<int>(basis.size()) != m_) throw std::invalid_argument("basis size mismatch");
    basis_ = std::move(basis);
    refactorize();
  }

  LpStatus optimize(long long max_pivots = 200000) {
    const T eps = detail::ScalarTraits<T>::eps();
    bool bland = detail::ScalarTraits<T>::exact;
    int degenerate_run = 0;
    for (long long pivot_count = 0; pivot_count < max_pivots; ++pivot_count) {
      std::vector<T> y = duals();
      int enter = -1;
      T best_rc(0);
      for (int j = 0; j < num_cols(); ++j) {
        if (in_basis_[j]) continue;
        T rc = costs_[j];
        for (const auto& [i, v] : cols_[j]) rc -= y[i] * v;
        if (rc < -eps) {
          if (bland) {
            enter = j;
            break;
          }
          if (enter < 0 || rc < best_rc) {
            enter = j;
            best_rc = rc;
          }
        }
      }
      if (enter < 0) return LpStatus::optimal;

      std::vector<T> d(m_, T(0));
      for (const auto& [i, v] : cols_[enter])
        for (int r = 0; r < m_; ++r) d[r] += binv_[r][i] * v;

      int leave = -1;
      T best_ratio(0);
      for (int r = 0; r < m_; ++r) {
        if (!(d[r] > eps)) continue;
        T ratio = xb_[r] / d[r];
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return LpStatus::unbounded;

      if (xb_[leave] / d[leave] == T(0)) {
        if (++degenerate_run > 64) bland = true;
      } else {
        degenerate_run = 0;
      }
      pivot(leave, enter, d);
      if (!detail::ScalarTraits<T>::exact && (pivot_count & 255) == 255) refactorize();
    }
    return LpStatus::iteration_limit;
  }

  int num_cols() const { return static_cast<int>(cols_.size()); }

  T objective() const {
    T obj(0);
    for (int r = 0; r < m_; ++r) obj += costs_[basis_[r]] * xb_[r];
    return obj;
  }

  std::vector<T> primal() const {
    std::vector<T> x(num_cols(), T(0));
    for (int r = 0; r < m_; ++r) x[basis_[r]] = xb_[r];
    return x;
  }

  std::vector<T> duals() const {
    std::vector<T> y(m_, T(0));
    for (int r = 0; r < m_; ++r)
      for (int i = 0; i < m_; ++i) y[i] += costs_[basis_[r]] * binv_[r][i];
    return y;
  }

  const std::vector<int>& basis() const { return basis_; }

  // Rebuilds the inverse from the basis columns (Gauss-Jordan with partial
  // pivoting) and recomputes the basic solution; also clamps float drift.
  void refactorize() {
    std::vector<std::vector<T>> mat(m_, std::vector<T>(2 * m_, T(0)));
    for (int r = 0; r < m_; ++r) mat[r][m_ + r] = T(1);
    for (int c = 0; c < m_; ++c)
      for (const auto& [i, v] : cols_[basis_[c]]) mat[i][c] = v;
    for (int c = 0; c < m_; ++c) {
      int piv = -1;
      for (int r = c; r < m_; ++r)
        if (mat[r][c] != T(0) && (piv < 0 || abs_greater(mat[r][c], mat[piv][c]))) piv = r;
      if (piv < 0) throw std::runtime_error("singular basis");
      std::swap(mat[c], mat[piv]);
      T inv = T(1) / mat[c][c];
      for (int k = 0; k < 2 * m_; ++k) mat[c][k] *= inv;
      for (int r = 0; r < m_; ++r) {
        if (r == c || mat[r][c] == T(0)) continue;
        T f = mat[r][c];
        for (int k = 0; k < 2 * m_; ++k) mat[r][k] -= f * mat[c][k];
      }
    }
    binv_.assign(m_, std::vector<T>(m_, T(0)));
    for (int r = 0; r < m_; ++r)
      for (int i = 0; i < m_; ++i) binv_[r][i] = mat[r][m_ + i];
    xb_.assign(m_, T(0));
    for (int r = 0; r < m_; ++r)
      for (int i = 0; i < m_; ++i) xb_[r] += binv_[r][i] * b_[i];
    if (!detail::ScalarTraits<T>::exact)
      for (int r = 0; r < m_; ++r)
        if (xb_[r] < T(0)) xb_[r] = T(0);
    in_basis_.assign(num_cols(), false);
    for (int idx : basis_) in_basis_[idx] = true;
  }

 private:
  static bool abs_greater(const T& a, const T& b) {
    T aa = a < T(0) ? -a : a, bb = b < T(0) ? -b : b;
    return aa > bb;
  }

  void pivot(int leave, int enter, const std::vector<T>& d) {
    T inv = T(1) / d[leave];
    for (int i = 0; i < m_; ++i) binv_[leave][i] *= inv;
    xb_[leave] *= inv;
    for (int r = 0; r < m_; ++r) {
      if (r == leave || d[r] == T(0)) continue;
      T f = d[r];
      for (int i = 0; i < m_; ++i) binv_[r][i] -= f * binv_[leave][i];
      xb_[r] -= f * xb_[leave];
      if (!detail::ScalarTraits<T>::exact && xb_[r] < T(0)) xb_[r] = T(0);
    }
    in_basis_[basis_[leave]] = false;
    in_basis_[enter] = true;
    basis_[leave] = enter;
  }

  int m_;
  std::vector<std::vector<std::pair<int, T>>> cols_;
  std::vector<T> costs_;
  std::vector<T> b_;
  std::vector<int> basis_;
  std::vector<bool> in_basis_;
  std::vector<std::vector<T>> binv_;
  std::vector<T> xb_;
};

}  // namespace packlab
