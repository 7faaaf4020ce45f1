#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "stagegames/errors.hpp"
#include "stagegames/game.hpp"
#include "stagegames/numeric.hpp"

namespace stagegames {

/// Value and optimal mixed strategies of a finite zero-sum one-shot game.
/// x_opt guarantees at least `value` against any column, y_opt concedes at
/// most `value` against any row (both within the solver tolerance).
struct MatrixGameSolution {
  double value = 0.0;
  MixedAction x_opt;
  MixedAction y_opt;
};

namespace detail {

// Primal simplex with Bland's rule on max 1'y s.t. A y <= 1, y >= 0 for an
// entrywise-positive A. Returns the objective, the basic solution y, and the
// dual vector u read off the slack columns. Bland (smallest eligible index in,
// smallest basic variable out) cannot cycle, so the pivot cap only guards
// against numerically stuck tableaus.
struct SimplexOutcome {
  double objective = 0.0;
  std::vector<double> y;
  std::vector<double> dual;
};

inline SimplexOutcome simplex_bland(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  const std::size_t cols = n + m + 1;  // structural, slack, rhs
  constexpr double kEnterTol = 1e-10;
  constexpr double kPivotTol = 1e-11;

  std::vector<double> t((m + 1) * cols, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return t[r * cols + c]; };

  for (std::size_t j = 0; j < n; ++j) at(0, j) = -1.0;  // objective row: z_j - c_j
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) at(r + 1, j) = a(r, j);
    at(r + 1, n + r) = 1.0;
    at(r + 1, cols - 1) = 1.0;
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) basis[r] = n + r;

  const std::size_t max_pivots = 1000 + 200 * (m + n);
  for (std::size_t pivot = 0;; ++pivot) {
    if (pivot >= max_pivots)
      throw NumericalFailure("matrix game LP: pivot budget exhausted");

    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (at(0, j) < -kEnterTol) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;  // optimal

    std::size_t leave = m;
    double best_ratio = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double coef = at(r + 1, enter);
      if (coef <= kPivotTol) continue;
      const double ratio = at(r + 1, cols - 1) / coef;
      if (leave == m || ratio < best_ratio - 1e-14 ||
          (std::abs(ratio - best_ratio) <= 1e-14 && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == m)
      throw NumericalFailure("matrix game LP: unbounded direction");  // impossible for A > 0

    const double pivot_val = at(leave + 1, enter);
    for (std::size_t c = 0; c < cols; ++c) at(leave + 1, c) /= pivot_val;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave + 1) continue;
      const double factor = at(r, enter);
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c < cols; ++c) at(r, c) -= factor * at(leave + 1, c);
    }
    basis[leave] = enter;
  }

  SimplexOutcome out;
  out.objective = at(0, cols - 1);
  out.y.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < n) out.y[basis[r]] = at(r + 1, cols - 1);
  out.dual.assign(m, 0.0);
  for (std::size_t r = 0; r < m; ++r) out.dual[r] = at(0, n + r);
  return out;
}

inline std::vector<double> normalized_strategy(std::vector<double> w) {
  double total = 0.0;
  for (auto& x : w) {
    if (x < 0.0) x = 0.0;  // clip dual noise
    total += x;
  }
  if (!(total > 0.0)) throw NumericalFailure("matrix game LP: degenerate strategy mass");
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace detail

/// Minimax value of the matrix game A (row player maximizes) together with
/// optimal mixed strategies. Entries are shifted to make A positive, the
/// classical bounded LP pair is solved by the in-repo simplex, and the shift
/// is removed again. The fixed pivot rule makes the output deterministic.
inline MatrixGameSolution val(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m < 1 || n < 1) throw DimensionMismatch("val: empty payoff matrix");
  double lo = a(0, 0);
  for (double v : a.data()) {
    if (!std::isfinite(v)) throw ValidationError("val: non-finite payoff entry");
    lo = std::min(lo, v);
  }
  const double shift = 1.0 - lo;
  Matrix shifted = a;
  for (double& v : shifted.data()) v += shift;

  const auto lp = detail::simplex_bland(shifted);
  if (!(lp.objective > 0.0))
    throw NumericalFailure("matrix game LP: nonpositive objective");
  const double shifted_value = 1.0 / lp.objective;

  auto x = detail::normalized_strategy(lp.dual);
  auto y = detail::normalized_strategy(lp.y);

  // Guard against a silently bad basis; the solver tolerance is far tighter.
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < m; ++i) col += x[i] * shifted(i, j);
    if (col < shifted_value - 1e-6)
      throw NumericalFailure("matrix game LP: row strategy fails its guarantee");
  }
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += shifted(i, j) * y[j];
    if (row > shifted_value + 1e-6)
      throw NumericalFailure("matrix game LP: column strategy fails its guarantee");
  }

  return MatrixGameSolution{shifted_value - shift, MixedAction(std::move(x)),
                            MixedAction(std::move(y))};
}

inline MatrixGameSolution val(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw DimensionMismatch("val: empty payoff matrix");
  Matrix a(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != a.cols()) throw DimensionMismatch("val: ragged payoff matrix");
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = rows[i][j];
  }
  return val(a);
}

/// Closed-form value of a 2x2 game: the pure saddle when one exists, otherwise
/// (a11 a22 - a12 a21) / (a11 + a22 - a12 - a21). Kept as an independent test
/// oracle for the LP path.
inline double val_oracle_2x2(const Matrix& a) {
  if (a.rows() != 2 || a.cols() != 2) throw DimensionMismatch("val_oracle_2x2: matrix is not 2x2");
  const double maximin = std::max(std::min(a(0, 0), a(0, 1)), std::min(a(1, 0), a(1, 1)));
  const double minimax = std::min(std::max(a(0, 0), a(1, 0)), std::max(a(0, 1), a(1, 1)));
  if (maximin == minimax) return maximin;
  return (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) /
         (a(0, 0) + a(1, 1) - a(0, 1) - a(1, 0));
}

}  // namespace stagegames
