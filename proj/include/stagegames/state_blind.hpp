#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "stagegames/belief_grid.hpp"
#include "stagegames/duration_solver.hpp"
#include "stagegames/errors.hpp"
#include "stagegames/game.hpp"
#include "stagegames/kernels.hpp"
#include "stagegames/matrix_game.hpp"
#include "stagegames/numeric.hpp"
#include "stagegames/parallel.hpp"
#include "stagegames/partition.hpp"
#include "stagegames/weight.hpp"

namespace stagegames {

/// Posterior after one stage of duration h under mixed actions (x, y):
/// p * (Id + h q(x,y)) with q(x,y) = sum_{i,j} x(i) y(j) q(i,j).
/// Nonexpansive in L1; requires h q_max <= 1.
inline Belief belief_step(const Belief& p, const MixedAction& x, const MixedAction& y,
                          const Game& game, double h) {
  const std::size_t S = game.num_states();
  if (p.size() != S || x.size() != game.num_actions1() || y.size() != game.num_actions2())
    throw DimensionMismatch("belief_step: dimension mismatch");
  if (!(h > 0.0)) throw NonPositiveStep("belief_step: step must be positive");
  if (h * game.max_rate() > 1.0 + kStructuralTol)
    throw StepTooLarge("belief_step: h * q_max exceeds 1");

  std::vector<double> out(p.probabilities());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double xy = x[i] * y[j];
      if (xy == 0.0) continue;
      for (std::size_t w = 0; w < S; ++w) {
        const double pw = p[w];
        if (pw == 0.0) continue;
        const double* qrow = game.kernel_row(i, j, w);
        const double scale = h * xy * pw;
        for (std::size_t w2 = 0; w2 < S; ++w2) out[w2] += scale * qrow[w2];
      }
    }
  }
  return Belief(std::move(out));
}

/// Value table over (partition time, belief-grid node); barycentric in p and
/// linear in t.
struct BlindValueField {
  BeliefGrid grid;
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // [time][node]

  std::size_t num_times() const { return times.size(); }

  double value(double t, const Belief& p) const {
    const std::size_t n = bracket(t);
    const BeliefGrid::Stencil st = grid.locate(p);
    if (n + 1 == times.size()) return grid.interpolate(values[n], st);
    const double alpha = (times[n + 1] - t) / (times[n + 1] - times[n]);
    return alpha * grid.interpolate(values[n], st) +
           (1.0 - alpha) * grid.interpolate(values[n + 1], st);
  }

  std::size_t bracket(double t) const {
    if (times.empty()) throw OutOfRange("blind value field is empty");
    if (t < times.front() - kStructuralTol || t > times.back() + kStructuralTol)
      throw OutOfRange("time outside the computed blind value field");
    if (t >= times.back()) return times.size() - 1;
    auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t n = static_cast<std::size_t>(it - times.begin());
    return n == 0 ? 0 : n - 1;
  }
};

namespace detail {

// Per-step geometry shared by every stage with the same duration: the belief
// successor stencil and the mixed payoff <p, g(i,j,.)> per (node, action pair).
struct BlindStageGeometry {
  std::vector<std::vector<BeliefGrid::Stencil>> successor;  // [node][i*n + j]
};

inline BlindStageGeometry blind_stage_geometry(const Game& game, const BeliefGrid& grid,
                                               double h, bool exponential_update) {
  const std::size_t S = game.num_states();
  const std::size_t m = game.num_actions1();
  const std::size_t n = game.num_actions2();
  const StageTransition tr =
      exponential_update ? exp_transition(game, h) : linear_transition(game, h);

  BlindStageGeometry geo;
  geo.successor.assign(grid.size(), {});
  parallel_for(grid.size(), [&](std::size_t node) {
    const Belief p = grid.node(node);
    auto& per_action = geo.successor[node];
    per_action.reserve(m * n);
    std::vector<double> succ(S);
    for (std::size_t ij = 0; ij < m * n; ++ij) {
      const Matrix& pmat = tr.matrices[ij];
      std::fill(succ.begin(), succ.end(), 0.0);
      for (std::size_t w = 0; w < S; ++w) {
        const double pw = p[w];
        if (pw == 0.0) continue;
        for (std::size_t w2 = 0; w2 < S; ++w2) succ[w2] += pw * pmat(w, w2);
      }
      per_action.push_back(grid.locate(Belief(succ)));
    }
  });
  return geo;
}

}  // namespace detail

/// Value of the state-blind stage-duration game by backward induction on the
/// belief grid. At node p,
///   v_n(p) = Val_{I x J}[ h_n k(t_n) <p, g(i,j,.)> + interp(v_{n+1}, p (Id + h_n q(i,j))) ],
/// i.e. the Val runs over pure action pairs with the payoff already
/// mixed-bilinear and the belief successor driven by the pure-action kernel.
/// Truncation matches solve_duration_value. The experimental
/// exponential_belief_update flag replaces Id + h q by exp(h q) in the belief
/// dynamics; it exists for gap measurements only.
inline BlindValueField solve_blind_value(const Game& game, const Partition& partition,
                                         const WeightFunction& k, const BeliefGrid& grid,
                                         double eps_trunc = 1e-6,
                                         bool exponential_belief_update = false) {
  if (grid.num_states() != game.num_states())
    throw DimensionMismatch("solve_blind_value: grid dimension mismatch");
  if (!exponential_belief_update &&
      partition.sup_step() * game.max_rate() > 1.0 + kStructuralTol)
    throw StepTooLarge("solve_blind_value: sup_h * q_max exceeds 1");

  const std::size_t N = detail::truncation_index(partition, k, eps_trunc);
  const std::size_t K = grid.size();
  const std::size_t m = game.num_actions1();
  const std::size_t n = game.num_actions2();

  BlindValueField field{grid, {}, {}};
  field.times.resize(N + 1);
  for (std::size_t i = 0; i <= N; ++i) field.times[i] = partition.time(i);
  field.values.assign(N + 1, std::vector<double>(K, 0.0));

  // Mixed payoff per node and action pair; independent of the stage.
  std::vector<std::vector<double>> node_payoff(K, std::vector<double>(m * n, 0.0));
  for (std::size_t node = 0; node < K; ++node) {
    const Belief p = grid.node(node);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t w = 0; w < game.num_states(); ++w)
          acc += p[w] * game.payoff(i, j, w);
        node_payoff[node][i * n + j] = acc;
      }
  }

  std::map<double, detail::BlindStageGeometry> geometry_cache;
  auto geometry_for = [&](double h) -> const detail::BlindStageGeometry& {
    auto it = geometry_cache.find(h);
    if (it == geometry_cache.end())
      it = geometry_cache
               .emplace(h, detail::blind_stage_geometry(game, grid, h, exponential_belief_update))
               .first;
    return it->second;
  };

  for (std::size_t stage = N; stage-- > 0;) {
    const double t = field.times[stage];
    const double h = partition.step(stage);
    const double weight = h * k(t);
    const detail::BlindStageGeometry& geo = geometry_for(h);
    const std::vector<double>& next = field.values[stage + 1];
    std::vector<double>& cur = field.values[stage];
    parallel_for(K, [&](std::size_t node) {
      Matrix a(m, n);
      for (std::size_t ij = 0; ij < m * n; ++ij)
        a(ij / n, ij % n) = weight * node_payoff[node][ij] +
                            grid.interpolate(next, geo.successor[node][ij]);
      cur[node] = val(a).value;
    });
  }
  return field;
}

/// Empirical Lipschitz constants of a computed field: space from all node
/// pairs at each time level (L1 metric on beliefs), time from adjacent level
/// differences per node (which attain the all-pairs supremum by telescoping).
struct LipschitzEstimate {
  double space = 0.0;  // L_p
  double time = 0.0;   // L_t
};

inline LipschitzEstimate measure_lipschitz(const BlindValueField& field) {
  LipschitzEstimate est;
  const std::size_t K = field.grid.size();
  for (std::size_t n = 0; n < field.values.size(); ++n) {
    const auto& level = field.values[n];
    for (std::size_t a = 0; a < K; ++a)
      for (std::size_t b = a + 1; b < K; ++b) {
        const double d = field.grid.node_distance(a, b);
        est.space = std::max(est.space, std::abs(level[a] - level[b]) / d);
      }
  }
  for (std::size_t n = 0; n + 1 < field.values.size(); ++n) {
    const double dt = field.times[n + 1] - field.times[n];
    for (std::size_t node = 0; node < K; ++node)
      est.time = std::max(
          est.time, std::abs(field.values[n + 1][node] - field.values[n][node]) / dt);
  }
  return est;
}

/// Discrete residual of the stationary state-blind equation at every node:
///   residual(p) = lambda v(p) - Val[ lambda <p, g(i,j,.)> + <p q(i,j), grad v(p)> ],
/// with the gradient estimated by finite differences along the simplex
/// directions e_a - e_last at spacing 1/M (central inside, one-sided at the
/// boundary). Needs M >= 2.
inline std::vector<double> blind_pde_residual(const Game& game, double lambda,
                                              const BeliefGrid& grid,
                                              const std::vector<double>& node_values) {
  if (grid.resolution() < 2) throw GridTooCoarse("blind_pde_residual: resolution must be >= 2");
  if (grid.num_states() != game.num_states())
    throw DimensionMismatch("blind_pde_residual: grid dimension mismatch");
  if (node_values.size() != grid.size())
    throw DimensionMismatch("blind_pde_residual: node values size mismatch");
  if (!(lambda > 0.0)) throw ValidationError("blind_pde_residual: lambda must be positive");

  const std::size_t S = game.num_states();
  const std::size_t m = game.num_actions1();
  const std::size_t n = game.num_actions2();
  const double M = static_cast<double>(grid.resolution());
  const std::size_t last = S - 1;

  auto shifted_value = [&](const std::vector<int>& coords, std::size_t up, std::size_t down,
                           double& out) -> bool {
    if (coords[down] < 1) return false;
    std::vector<int> c = coords;
    c[up] += 1;
    c[down] -= 1;
    const auto idx = grid.index_of(c);
    if (!idx) return false;
    out = node_values[*idx];
    return true;
  };

  std::vector<double> residual(grid.size());
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const std::vector<int>& coords = grid.node_coords(node);
    const Belief p = grid.node(node);
    const double here = node_values[node];

    // Directional derivatives D_a ~ dv/d(e_a - e_last); the representative
    // gradient (D_0, ..., D_{S-2}, 0) is enough because p q(i,j) sums to zero.
    std::vector<double> grad(S, 0.0);
    for (std::size_t a = 0; a + 1 < S; ++a) {
      double fwd = 0.0, bwd = 0.0;
      const bool has_fwd = shifted_value(coords, a, last, fwd);
      const bool has_bwd = shifted_value(coords, last, a, bwd);
      if (has_fwd && has_bwd) {
        grad[a] = (fwd - bwd) * M / 2.0;
      } else if (has_fwd) {
        grad[a] = (fwd - here) * M;
      } else if (has_bwd) {
        grad[a] = (here - bwd) * M;
      } else {
        // Corner with p_a = p_last = 0: route the difference through the
        // largest coordinate b, using D_a = D_{a over b} + D_{b over last}.
        const std::size_t b = static_cast<std::size_t>(
            std::max_element(coords.begin(), coords.end()) - coords.begin());
        double via = 0.0, down = 0.0;
        if (shifted_value(coords, a, b, via) && shifted_value(coords, last, b, down))
          grad[a] = (via - here) * M + (here - down) * M;
      }
    }

    Matrix a(m, n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double payoff = 0.0;
        std::vector<double> pq(S, 0.0);
        for (std::size_t w = 0; w < S; ++w) {
          payoff += p[w] * game.payoff(i, j, w);
          if (p[w] == 0.0) continue;
          const double* qrow = game.kernel_row(i, j, w);
          for (std::size_t w2 = 0; w2 < S; ++w2) pq[w2] += p[w] * qrow[w2];
        }
        a(i, j) = lambda * payoff + dot(pq, grad);
      }
    }
    residual[node] = lambda * here - val(a).value;
  }
  return residual;
}

}  // namespace stagegames
