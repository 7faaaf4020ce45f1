#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "stagegames/errors.hpp"
#include "stagegames/game.hpp"
#include "stagegames/numeric.hpp"

namespace stagegames {

/// exp(B) by scaling-and-squaring over a degree-12 Taylor polynomial. The
/// argument is halved until its row L1 norm is at most 1/2, where the degree-12
/// remainder is below 1e-13, then squared back up.
inline Matrix expm(const Matrix& b) {
  if (b.rows() != b.cols()) throw DimensionMismatch("expm: matrix must be square");
  const std::size_t n = b.rows();

  int squarings = 0;
  double norm = max_abs_row_sum(b);
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
  }
  Matrix scaled = b;
  const double scale = std::ldexp(1.0, -squarings);
  for (double& v : scaled.data()) v *= scale;

  Matrix acc = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 12; ++k) {
    term = multiply(term, scaled);
    for (double& v : term.data()) v /= static_cast<double>(k);
    for (std::size_t i = 0; i < acc.data().size(); ++i) acc.data()[i] += term.data()[i];
  }
  for (int s = 0; s < squarings; ++s) acc = multiply(acc, acc);
  return acc;
}

/// One stage of transition matrices, one per action pair (i,j), each
/// row-stochastic. `linear` holds Id + h q, `exponential` holds exp(h q).
struct StageTransition {
  enum class Scheme { linear, exponential };

  Scheme scheme = Scheme::linear;
  double h = 0.0;
  std::vector<Matrix> matrices;  // index i * num_actions2 + j

  const Matrix& matrix(std::size_t i, std::size_t j, std::size_t num_actions2) const {
    return matrices[i * num_actions2 + j];
  }
};

namespace detail {

inline void check_stochastic_rows(Matrix& p) {
  for (std::size_t r = 0; r < p.rows(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < p.cols(); ++c) {
      double& v = p(r, c);
      if (v < 0.0) {
        if (v < -1e-10) throw NumericalFailure("stage transition: negative probability");
        v = 0.0;
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-10)
      throw NumericalFailure("stage transition: row mass drifted from 1");
  }
}

}  // namespace detail

/// Id + h q per action pair. Requires h q_max <= 1 so every row stays a
/// probability vector; violations throw StepTooLarge.
inline StageTransition linear_transition(const Game& game, double h) {
  if (!(h > 0.0)) throw NonPositiveStep("linear_transition: step must be positive");
  if (h * game.max_rate() > 1.0 + kStructuralTol)
    throw StepTooLarge("linear_transition: h * q_max exceeds 1");
  const std::size_t S = game.num_states();
  StageTransition tr;
  tr.scheme = StageTransition::Scheme::linear;
  tr.h = h;
  tr.matrices.reserve(game.num_actions1() * game.num_actions2());
  for (std::size_t i = 0; i < game.num_actions1(); ++i) {
    for (std::size_t j = 0; j < game.num_actions2(); ++j) {
      Matrix p(S, S);
      for (std::size_t w = 0; w < S; ++w) {
        const double* qrow = game.kernel_row(i, j, w);
        for (std::size_t w2 = 0; w2 < S; ++w2)
          p(w, w2) = (w == w2 ? 1.0 : 0.0) + h * qrow[w2];
      }
      detail::check_stochastic_rows(p);
      tr.matrices.push_back(std::move(p));
    }
  }
  return tr;
}

/// exp(h q) per action pair; row-stochastic for every h > 0.
inline StageTransition exp_transition(const Game& game, double h) {
  if (!(h > 0.0)) throw NonPositiveStep("exp_transition: step must be positive");
  const std::size_t S = game.num_states();
  StageTransition tr;
  tr.scheme = StageTransition::Scheme::exponential;
  tr.h = h;
  tr.matrices.reserve(game.num_actions1() * game.num_actions2());
  for (std::size_t i = 0; i < game.num_actions1(); ++i) {
    for (std::size_t j = 0; j < game.num_actions2(); ++j) {
      Matrix hq(S, S);
      for (std::size_t w = 0; w < S; ++w) {
        const double* qrow = game.kernel_row(i, j, w);
        for (std::size_t w2 = 0; w2 < S; ++w2) hq(w, w2) = h * qrow[w2];
      }
      Matrix p = expm(hq);
      detail::check_stochastic_rows(p);
      tr.matrices.push_back(std::move(p));
    }
  }
  return tr;
}

/// Row-L1 distance between the two stage discretizations at step h:
/// max over (i,j,w) of sum_w' |(Id + h q - exp(h q))(w,w')|. Decays like h^2.
inline double scheme_gap(const Game& game, double h) {
  const StageTransition lin = linear_transition(game, h);
  const StageTransition exp = exp_transition(game, h);
  double gap = 0.0;
  for (std::size_t idx = 0; idx < lin.matrices.size(); ++idx) {
    const Matrix& a = lin.matrices[idx];
    const Matrix& b = exp.matrices[idx];
    for (std::size_t w = 0; w < a.rows(); ++w) {
      double row = 0.0;
      for (std::size_t w2 = 0; w2 < a.cols(); ++w2) row += std::abs(a(w, w2) - b(w, w2));
      gap = std::max(gap, row);
    }
  }
  return gap;
}

}  // namespace stagegames
