#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "stagegames/errors.hpp"
#include "stagegames/game.hpp"
#include "stagegames/kernels.hpp"
#include "stagegames/matrix_game.hpp"
#include "stagegames/numeric.hpp"
#include "stagegames/partition.hpp"
#include "stagegames/weight.hpp"

namespace stagegames {

/// Value table over (partition time, state), linear in t between nodes.
/// values[n][w] is the value at times[n] in state w; the final node carries the
/// truncation seed.
struct ValueField {
  std::vector<double> times;
  std::vector<std::vector<double>> values;

  std::size_t num_times() const { return times.size(); }

  /// Linear interpolation between the bracketing nodes; exact at nodes.
  double value(double t, std::size_t state) const {
    const std::size_t n = bracket(t);
    if (n + 1 == times.size()) return values[n][state];
    const double h = times[n + 1] - times[n];
    const double alpha = (times[n + 1] - t) / h;
    return alpha * values[n][state] + (1.0 - alpha) * values[n + 1][state];
  }

  std::vector<double> value(double t) const {
    const std::size_t S = values.empty() ? 0 : values.front().size();
    std::vector<double> out(S);
    for (std::size_t w = 0; w < S; ++w) out[w] = value(t, w);
    return out;
  }

  /// Index n with times[n] <= t <= times[n+1]; throws OutOfRange beyond the
  /// computed span.
  std::size_t bracket(double t) const {
    if (times.empty()) throw OutOfRange("value field is empty");
    if (t < times.front() - kStructuralTol || t > times.back() + kStructuralTol)
      throw OutOfRange("time outside the computed value field");
    if (t >= times.back()) return times.size() - 1;
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t n = static_cast<std::size_t>(it - times.begin());
    return n == 0 ? 0 : n - 1;
  }
};

/// Optimal mixed actions of one stage, per state.
struct StagePolicy {
  std::vector<MixedAction> x;
  std::vector<MixedAction> y;
};

struct DurationSolution {
  ValueField field;
  std::vector<StagePolicy> policies;  // one per stage, aligned with field.times[0..N-1]
};

struct ShapleyResult {
  std::vector<double> values;
  std::vector<MixedAction> x;
  std::vector<MixedAction> y;
};

/// One application of the dynamic-programming operator:
/// value(w) = Val_{I x J}[ stage_payoff(i,j,w) + <P(i,j)(w,.), f(.)> ],
/// with the optimal mixed actions per state. stage_payoff is flat (i,j,w).
inline ShapleyResult shapley_apply_full(const Game& game,
                                        const std::vector<double>& stage_payoff,
                                        const StageTransition& transition,
                                        const std::vector<double>& f) {
  const std::size_t S = game.num_states();
  const std::size_t m = game.num_actions1();
  const std::size_t n = game.num_actions2();
  if (stage_payoff.size() != m * n * S)
    throw DimensionMismatch("shapley_apply: stage payoff tensor size mismatch");
  if (f.size() != S) throw DimensionMismatch("shapley_apply: continuation vector size mismatch");
  if (transition.matrices.size() != m * n)
    throw DimensionMismatch("shapley_apply: transition count mismatch");

  ShapleyResult out;
  out.values.resize(S);
  out.x.reserve(S);
  out.y.reserve(S);
  Matrix a(m, n);
  for (std::size_t w = 0; w < S; ++w) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const Matrix& p = transition.matrices[i * n + j];
        if (p.rows() != S || p.cols() != S)
          throw DimensionMismatch("shapley_apply: transition matrix shape mismatch");
        a(i, j) = stage_payoff[(i * n + j) * S + w] + dot(p.row(w), f);
      }
    }
    MatrixGameSolution sol = val(a);
    out.values[w] = sol.value;
    out.x.push_back(std::move(sol.x_opt));
    out.y.push_back(std::move(sol.y_opt));
  }
  return out;
}

inline std::vector<double> shapley_apply(const Game& game,
                                         const std::vector<double>& stage_payoff,
                                         const StageTransition& transition,
                                         const std::vector<double>& f) {
  return shapley_apply_full(game, stage_payoff, transition, f).values;
}

namespace detail {

// Smallest stage index whose tail weight is at most eps_trunc, capped at the
// stage count for finite partitions. The budget guards lazy tails that creep
// toward the target too slowly.
inline std::size_t truncation_index(const Partition& partition, const WeightFunction& k,
                                    double eps_trunc, std::size_t budget = 5'000'000) {
  if (!(eps_trunc > 0.0)) throw ValidationError("truncation: eps_trunc must be positive");
  const std::optional<std::size_t> count = partition.count();
  const std::size_t limit = count ? *count : budget;
  for (std::size_t n = 0; n <= limit; ++n) {
    if (count && n == *count) return n;
    if (k.integral_tail(partition.time(n)) <= eps_trunc) return n;
  }
  throw TruncationUnreachable(
      "truncation: tail weight does not reach eps_trunc within the iteration budget");
}

// Stage payoff tensor: weight * g(i,j,w), flattened like Game::payoff_tensor.
inline std::vector<double> scaled_stage_payoff(const Game& game, double weight) {
  std::vector<double> payoff = game.payoff_tensor();
  for (double& v : payoff) v *= weight;
  return payoff;
}

}  // namespace detail

/// Value of the stage-duration game by backward induction over the partition.
///
/// scheme = linear:      stage payoff h_n k(t_n) g, transition Id + h_n q;
/// scheme = exponential: stage payoff (int_{t_n}^{t_{n+1}} k) g, transition exp(h_n q).
///
/// Induction starts at the smallest N with integral_tail(t_N) <= eps_trunc
/// (or at the end of a finite partition) seeded with v_N = 0, which bounds the
/// truncation error by ||g||_inf * eps_trunc. Also records the optimal mixed
/// actions of every stage.
inline DurationSolution solve_duration_value(const Game& game, const Partition& partition,
                                             const WeightFunction& k,
                                             StageTransition::Scheme scheme,
                                             double eps_trunc = 1e-6) {
  if (scheme == StageTransition::Scheme::linear &&
      partition.sup_step() * game.max_rate() > 1.0 + kStructuralTol)
    throw StepTooLarge("solve_duration_value: sup_h * q_max exceeds 1 for the linear scheme");

  const std::size_t N = detail::truncation_index(partition, k, eps_trunc);
  const std::size_t S = game.num_states();

  DurationSolution sol;
  sol.field.times.resize(N + 1);
  for (std::size_t n = 0; n <= N; ++n) sol.field.times[n] = partition.time(n);
  sol.field.values.assign(N + 1, std::vector<double>(S, 0.0));
  sol.policies.resize(N);

  std::map<double, StageTransition> transition_cache;
  auto transition_for = [&](double h) -> const StageTransition& {
    auto it = transition_cache.find(h);
    if (it == transition_cache.end()) {
      StageTransition tr = scheme == StageTransition::Scheme::linear
                               ? linear_transition(game, h)
                               : exp_transition(game, h);
      it = transition_cache.emplace(h, std::move(tr)).first;
    }
    return it->second;
  };

  for (std::size_t n = N; n-- > 0;) {
    const double t = sol.field.times[n];
    const double h = partition.step(n);
    const double weight = scheme == StageTransition::Scheme::linear
                              ? h * k(t)
                              : k.integral_tail(t) - k.integral_tail(partition.time(n + 1));
    const std::vector<double> stage_payoff = detail::scaled_stage_payoff(game, weight);
    ShapleyResult step =
        shapley_apply_full(game, stage_payoff, transition_for(h), sol.field.values[n + 1]);
    sol.field.values[n] = std::move(step.values);
    sol.policies[n] = StagePolicy{std::move(step.x), std::move(step.y)};
  }
  return sol;
}

/// Stationary value v* of the discounted limit equation
///   lambda v(w) = Val[ lambda g(i,j,w) + <q(i,j)(w,.), v(.)> ].
///
/// Rearranged through a uniformization constant c >= max(1, q_max) into the
/// contraction v <- Val[ lambda g + (q + c Id) v ] / (c + lambda) with modulus
/// c / (c + lambda); iteration stops once the sup-norm update drops below
/// tol * lambda / (c + lambda), which pins the equation residual under tol.
inline std::vector<double> solve_discounted_fixed_point(const Game& game, double lambda,
                                                        double tol = 1e-9) {
  if (!(lambda > 0.0)) throw ValidationError("fixed point: lambda must be positive");
  if (!(tol > 0.0)) throw ValidationError("fixed point: tol must be positive");
  const std::size_t S = game.num_states();
  const std::size_t m = game.num_actions1();
  const std::size_t n = game.num_actions2();
  const double c = std::max(1.0, game.max_rate());

  // Stage payoff lambda * g and transition (q + c Id) / c reuse the Shapley
  // machinery: Val[lambda g + (q + c Id) v] = Val[lambda g + c <P, v>].
  std::vector<double> stage_payoff = detail::scaled_stage_payoff(game, lambda);
  StageTransition uniformized = linear_transition(game, 1.0 / c);

  std::vector<double> v(S, 0.0);
  const double stop = tol * lambda / (c + lambda);
  for (std::size_t iter = 0; iter < 10'000'000; ++iter) {
    std::vector<double> cv(S);
    for (std::size_t w = 0; w < S; ++w) cv[w] = c * v[w];
    Matrix a(m, n);
    std::vector<double> next(S);
    for (std::size_t w = 0; w < S; ++w) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
          a(i, j) = stage_payoff[(i * n + j) * S + w] +
                    dot(uniformized.matrices[i * n + j].row(w), cv);
      next[w] = val(a).value / (c + lambda);
    }
    const double update = sup_diff(next, v);
    v = std::move(next);
    if (update < stop) return v;
  }
  throw NumericalFailure("fixed point: contraction failed to converge");
}

/// Discrete residual of the limit equation at time t:
///   residual(w) = (v(t + d, w) - v(t, w)) / d
///               + Val[ k(t) g(i,j,w) + <q(i,j)(w,.), v(t,.)> ],
/// with d the local partition step (forward difference, matching the field's
/// interpolation convention). Small residuals are evidence of convergence, not
/// a proof.
inline std::vector<double> limit_equation_residual(const Game& game, const WeightFunction& k,
                                                   const ValueField& field, double t) {
  if (field.times.size() < 2) throw OutOfRange("residual: value field has no step");
  const std::size_t n = field.bracket(t);
  const std::size_t step_index = n + 1 == field.times.size() ? n - 1 : n;
  const double d = field.times[step_index + 1] - field.times[step_index];
  const std::vector<double> now = field.value(t);
  const std::vector<double> ahead = field.value(t + d);  // OutOfRange if beyond the field

  const std::size_t S = game.num_states();
  const std::size_t m = game.num_actions1();
  const std::size_t nn = game.num_actions2();
  std::vector<double> residual(S);
  Matrix a(m, nn);
  for (std::size_t w = 0; w < S; ++w) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < nn; ++j)
        a(i, j) = k(t) * game.payoff(i, j, w) + dot({game.kernel_row(i, j, w), S}, now);
    residual[w] = (ahead[w] - now[w]) / d + val(a).value;
  }
  return residual;
}

}  // namespace stagegames
