#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hcm {

enum class LpStatus { optimal, infeasible, unbounded };

template <class Number>
struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Number objective{};
  std::vector<Number> x;     ///< primal values, one per column of A
  std::vector<Number> dual;  ///< y = c_B B^{-1}, one per row of A
  std::size_t pivots = 0;
};

/// Dense two-phase primal simplex for
///   minimise c^T x  subject to  A x = b, x >= 0,
/// in exact arithmetic (Number is a field type such as mpq_rational). Bland's
/// rule picks the entering column (lowest index with negative reduced cost)
/// and breaks ratio-test ties by lowest basic variable index, so it cannot
/// cycle. Phase one starts from an all-artificial basis.
template <class Number>
class DenseSimplex {
 public:
  DenseSimplex(std::vector<std::vector<Number>> A, std::vector<Number> b, std::vector<Number> c)
      : rows_(A.size()), cols_(c.size()), cost_(std::move(c)) {
    if (b.size() != rows_) throw std::invalid_argument("simplex: b has wrong length");
    width_ = cols_ + rows_ + 1;
    tableau_.assign(rows_ + 1, std::vector<Number>(width_, Number(0)));
    row_sign_.assign(rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (A[i].size() != cols_) throw std::invalid_argument("simplex: ragged constraint matrix");
      const bool flip = b[i] < 0;
      row_sign_[i] = flip ? -1 : 1;
      for (std::size_t j = 0; j < cols_; ++j) tableau_[i][j] = flip ? Number(-A[i][j]) : A[i][j];
      tableau_[i][cols_ + i] = 1;
      tableau_[i][width_ - 1] = flip ? Number(-b[i]) : b[i];
    }
    basis_.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) basis_[i] = cols_ + i;
    active_.assign(rows_, true);
  }

  LpSolution<Number> solve() {
    LpSolution<Number> out;
    // Phase one: minimise the sum of artificials.
    auto& obj = tableau_[rows_];
    for (std::size_t j = 0; j < width_; ++j) obj[j] = 0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) obj[j] -= tableau_[i][j];
    for (std::size_t i = 0; i < rows_; ++i) obj[width_ - 1] -= tableau_[i][width_ - 1];
    if (!iterate(cols_ + rows_)) throw std::logic_error("simplex: phase one cannot be unbounded");
    if (obj[width_ - 1] != 0) {
      out.status = LpStatus::infeasible;
      out.pivots = pivots_;
      return out;
    }
    expel_artificials();

    // Phase two: original costs, artificial columns barred from entering.
    for (std::size_t j = 0; j < width_; ++j) obj[j] = j < cols_ ? cost_[j] : Number(0);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!active_[i] || basis_[i] >= cols_) continue;
      const Number cb = cost_[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < width_; ++j)
        if (tableau_[i][j] != 0) obj[j] -= cb * tableau_[i][j];
    }
    if (!iterate(cols_)) {
      out.status = LpStatus::unbounded;
      out.pivots = pivots_;
      return out;
    }

    out.status = LpStatus::optimal;
    out.objective = -obj[width_ - 1];
    out.x.assign(cols_, Number(0));
    for (std::size_t i = 0; i < rows_; ++i)
      if (active_[i] && basis_[i] < cols_) out.x[basis_[i]] = tableau_[i][width_ - 1];
    // Reduced cost of artificial column i is 0 - y_i (up to the row's sign flip).
    out.dual.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      out.dual[i] = -obj[cols_ + i];
      if (row_sign_[i] < 0) out.dual[i] = -out.dual[i];
    }
    out.pivots = pivots_;
    return out;
  }

 private:
  // Runs Bland pivots with entering columns restricted to [0, limit). Returns
  // false on an unbounded direction.
  bool iterate(std::size_t limit) {
    auto& obj = tableau_[rows_];
    for (;;) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j)
        if (obj[j] < 0) {
          enter = j;
          break;
        }
      if (enter == limit) return true;
      std::size_t leave = rows_;
      Number best_ratio;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (!active_[i] || !(tableau_[i][enter] > 0)) continue;
        Number ratio = tableau_[i][width_ - 1] / tableau_[i][enter];
        if (leave == rows_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = std::move(ratio);
        }
      }
      if (leave == rows_) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t s) {
    ++pivots_;
    auto& prow = tableau_[r];
    const Number inv = 1 / prow[s];
    std::vector<std::size_t> nonzero;
    for (std::size_t j = 0; j < width_; ++j)
      if (prow[j] != 0) {
        prow[j] *= inv;
        nonzero.push_back(j);
      }
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r || (i < rows_ && !active_[i])) continue;
      auto& row = tableau_[i];
      if (row[s] == 0) continue;
      const Number factor = row[s];
      for (std::size_t j : nonzero) row[j] -= factor * prow[j];
    }
    basis_[r] = s;
  }

  // After a feasible phase one, pivot remaining zero-level artificials out of
  // the basis; a row with no usable original column is redundant.
  void expel_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < cols_) continue;
      std::size_t j = 0;
      while (j < cols_ && tableau_[i][j] == 0) ++j;
      if (j == cols_) active_[i] = false;
      else pivot(i, j);
    }
  }

  std::size_t rows_, cols_, width_ = 0;
  std::vector<Number> cost_;
  std::vector<std::vector<Number>> tableau_;  ///< rows_ constraint rows + objective row
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
  std::vector<int> row_sign_;
  std::size_t pivots_ = 0;
};

template <class Number>
LpSolution<Number> solve_lp(std::vector<std::vector<Number>> A, std::vector<Number> b, std::vector<Number> c) {
  return DenseSimplex<Number>(std::move(A), std::move(b), std::move(c)).solve();
}

}  // namespace hcm
