#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stagegames/errors.hpp"
#include "stagegames/numeric.hpp"

namespace stagegames {

namespace detail {

// Shared check for MixedAction / Belief: entries >= 0 (tiny negatives from
// arithmetic are clamped), total mass 1 within the structural tolerance.
inline std::vector<double> checked_probability_vector(std::vector<double> w,
                                                      const char* what) {
  if (w.empty()) throw ValidationError(std::string(what) + ": empty vector");
  double sum = 0.0;
  for (auto& x : w) {
    if (!std::isfinite(x)) throw ValidationError(std::string(what) + ": non-finite entry");
    if (x < 0.0) {
      if (x < -kStructuralTol) throw ValidationError(std::string(what) + ": negative entry");
      x = 0.0;
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kStructuralTol)
    throw ValidationError(std::string(what) + ": mass != 1");
  return w;
}

}  // namespace detail

// Probability vector over one player's action set.
class MixedAction {
 public:
  explicit MixedAction(std::vector<double> weights)
      : w_(detail::checked_probability_vector(std::move(weights), "MixedAction")) {}

  static MixedAction pure(std::size_t index, std::size_t size) {
    std::vector<double> w(size, 0.0);
    w.at(index) = 1.0;
    return MixedAction(std::move(w));
  }

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& weights() const { return w_; }

 private:
  std::vector<double> w_;
};

// Probability vector over states.
class Belief {
 public:
  explicit Belief(std::vector<double> p)
      : p_(detail::checked_probability_vector(std::move(p), "Belief")) {}

  static Belief dirac(std::size_t state, std::size_t num_states) {
    std::vector<double> p(num_states, 0.0);
    p.at(state) = 1.0;
    return Belief(std::move(p));
  }

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& probabilities() const { return p_; }

 private:
  std::vector<double> p_;
};

/// A finite zero-sum stochastic game in kernel form.
///
/// Payoffs g(i,j,w) are rates (per unit time); the kernel q(i,j) is a
/// generator-like matrix: rows sum to zero, off-diagonal entries are
/// nonnegative, diagonal entries lie in [-max_rate(), 0]. Immutable after
/// construction, so instances can be shared freely across threads.
class Game {
 public:
  Game(std::vector<std::string> states, std::vector<std::string> actions1,
       std::vector<std::string> actions2, std::vector<double> payoff_flat,
       std::vector<double> kernel_flat)
      : states_(std::move(states)),
        actions1_(std::move(actions1)),
        actions2_(std::move(actions2)),
        payoff_(std::move(payoff_flat)),
        kernel_(std::move(kernel_flat)) {
    const std::size_t S = states_.size(), m = actions1_.size(), n = actions2_.size();
    if (S < 1 || m < 1 || n < 1)
      throw DimensionMismatch("Game: state and action sets must be non-empty");
    if (payoff_.size() != m * n * S)
      throw DimensionMismatch("Game: payoff tensor size mismatch");
    if (kernel_.size() != m * n * S * S)
      throw DimensionMismatch("Game: kernel tensor size mismatch");

    payoff_sup_ = 0.0;
    for (double g : payoff_) {
      if (!std::isfinite(g)) throw ValidationError("Game: non-finite payoff");
      payoff_sup_ = std::max(payoff_sup_, std::abs(g));
    }

    max_rate_ = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t w = 0; w < S; ++w) {
          const double* row = kernel_row(i, j, w);
          double sum = 0.0;
          for (std::size_t w2 = 0; w2 < S; ++w2) {
            const double v = row[w2];
            if (!std::isfinite(v)) throw ValidationError("Game: non-finite kernel entry");
            sum += v;
            if (w2 != w && v < -kStructuralTol)
              throw NegativeOffDiagonal("Game: kernel off-diagonal below zero");
          }
          if (std::abs(sum) > kStructuralTol)
            throw KernelRowSum("Game: kernel row sum exceeds tolerance");
          const double diag = row[w];
          if (diag > kStructuralTol)
            throw PositiveDiagonal("Game: kernel diagonal above zero");
          max_rate_ = std::max(max_rate_, -diag);
        }
      }
    }
    max_rate_ = std::max(max_rate_, 0.0);
  }

  std::size_t num_states() const { return states_.size(); }
  std::size_t num_actions1() const { return actions1_.size(); }
  std::size_t num_actions2() const { return actions2_.size(); }

  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& actions1() const { return actions1_; }
  const std::vector<std::string>& actions2() const { return actions2_; }

  double payoff(std::size_t i, std::size_t j, std::size_t w) const {
    return payoff_[(i * num_actions2() + j) * num_states() + w];
  }
  double kernel(std::size_t i, std::size_t j, std::size_t w, std::size_t w2) const {
    return kernel_row(i, j, w)[w2];
  }
  const double* kernel_row(std::size_t i, std::size_t j, std::size_t w) const {
    const std::size_t S = num_states();
    return kernel_.data() + ((i * num_actions2() + j) * S + w) * S;
  }
  Matrix kernel_matrix(std::size_t i, std::size_t j) const {
    const std::size_t S = num_states();
    Matrix q(S, S);
    for (std::size_t w = 0; w < S; ++w)
      for (std::size_t w2 = 0; w2 < S; ++w2) q(w, w2) = kernel(i, j, w, w2);
    return q;
  }

  const std::vector<double>& payoff_tensor() const { return payoff_; }
  const std::vector<double>& kernel_tensor() const { return kernel_; }

  /// Cached sup-norm of the payoff tensor.
  double payoff_sup() const { return payoff_sup_; }
  /// Cached q_max = max over (i,j,w) of -q(i,j)(w,w). Zero for motionless games.
  double max_rate() const { return max_rate_; }

 private:
  std::vector<std::string> states_, actions1_, actions2_;
  std::vector<double> payoff_;  // [(i*n + j)*S + w]
  std::vector<double> kernel_;  // [((i*n + j)*S + w)*S + w2]
  double payoff_sup_ = 0.0;
  double max_rate_ = 0.0;
};

// Nested-array mirror of the on-disk game description.
struct GameDef {
  std::vector<std::string> states;
  std::vector<std::string> actions1;
  std::vector<std::string> actions2;
  std::vector<std::vector<std::vector<double>>> payoff;             // [i][j][w]
  std::vector<std::vector<std::vector<std::vector<double>>>> kernel;  // [i][j][w][w2]
};

/// Converts a row-stochastic transition tensor P into the kernel q = P - Id,
/// one matrix per action pair. Throws NotRowStochastic when a row has negative
/// entries or does not sum to one within the structural tolerance.
inline std::vector<std::vector<std::vector<std::vector<double>>>> kernel_from_matrix(
    const std::vector<std::vector<std::vector<std::vector<double>>>>& transition) {
  auto kernel = transition;
  for (auto& per_i : kernel) {
    for (auto& matrix : per_i) {
      const std::size_t S = matrix.size();
      for (std::size_t w = 0; w < S; ++w) {
        auto& row = matrix[w];
        if (row.size() != S) throw DimensionMismatch("transition matrix is not square");
        double sum = 0.0;
        for (double v : row) {
          if (!std::isfinite(v) || v < -kStructuralTol)
            throw NotRowStochastic("transition entry negative or non-finite");
          sum += v;
        }
        if (std::abs(sum - 1.0) > kStructuralTol)
          throw NotRowStochastic("transition row does not sum to 1");
        row[w] -= 1.0;
      }
    }
  }
  return kernel;
}

/// Checks a raw description for dimensional consistency and the kernel
/// invariants, and builds the immutable Game (caching the payoff sup-norm and
/// q_max along the way).
inline Game validate_game(const GameDef& def) {
  const std::size_t S = def.states.size(), m = def.actions1.size(), n = def.actions2.size();
  if (S < 1 || m < 1 || n < 1)
    throw DimensionMismatch("game description: empty state or action set");
  if (def.payoff.size() != m || def.kernel.size() != m)
    throw DimensionMismatch("game description: tensor extent does not match actions1");

  std::vector<double> payoff_flat;
  payoff_flat.reserve(m * n * S);
  std::vector<double> kernel_flat;
  kernel_flat.reserve(m * n * S * S);
  for (std::size_t i = 0; i < m; ++i) {
    if (def.payoff[i].size() != n || def.kernel[i].size() != n)
      throw DimensionMismatch("game description: tensor extent does not match actions2");
    for (std::size_t j = 0; j < n; ++j) {
      if (def.payoff[i][j].size() != S)
        throw DimensionMismatch("game description: payoff extent does not match states");
      if (def.kernel[i][j].size() != S)
        throw DimensionMismatch("game description: kernel extent does not match states");
      for (double g : def.payoff[i][j]) payoff_flat.push_back(g);
      for (const auto& row : def.kernel[i][j]) {
        if (row.size() != S)
          throw DimensionMismatch("game description: kernel row extent does not match states");
        for (double v : row) kernel_flat.push_back(v);
      }
    }
  }
  return Game(def.states, def.actions1, def.actions2, std::move(payoff_flat),
              std::move(kernel_flat));
}

}  // namespace stagegames
