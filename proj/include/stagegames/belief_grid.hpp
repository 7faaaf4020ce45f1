#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "stagegames/errors.hpp"
#include "stagegames/game.hpp"

namespace stagegames {

/// Regular barycentric grid on the probability simplex: the nodes are the
/// beliefs p with M * p integer, triangulated by the Kuhn subdivision.
/// locate() returns the vertices of the containing cell with barycentric
/// weights, which makes interpolation exact on linear functions and keeps the
/// interpolation operator nonexpansive (weights are nonnegative, sum to one).
class BeliefGrid {
 public:
  struct Stencil {
    std::vector<std::size_t> nodes;
    std::vector<double> weights;
  };

  static unsigned default_resolution(std::size_t num_states) {
    return num_states <= 2 ? 64u : 24u;
  }

  /// Grids need S <= 3 by default (node count grows like M^(S-1)); pass
  /// allow_large to override.
  BeliefGrid(std::size_t num_states, unsigned resolution, bool allow_large = false)
      : S_(num_states), M_(resolution) {
    if (S_ < 1) throw DimensionMismatch("belief grid: needs at least one state");
    if (M_ < 1) throw ValidationError("belief grid: resolution must be >= 1");
    if (S_ >= 4 && !allow_large)
      throw ValidationError(
          "belief grid: S >= 4 grids are rejected by default; pass allow_large to override");
    std::vector<int> coords(S_, 0);
    enumerate(coords, 0, static_cast<int>(M_));
  }

  std::size_t num_states() const { return S_; }
  unsigned resolution() const { return M_; }
  std::size_t size() const { return nodes_.size(); }

  const std::vector<int>& node_coords(std::size_t idx) const { return nodes_[idx]; }

  Belief node(std::size_t idx) const {
    std::vector<double> p(S_);
    for (std::size_t a = 0; a < S_; ++a)
      p[a] = static_cast<double>(nodes_[idx][a]) / static_cast<double>(M_);
    return Belief(std::move(p));
  }

  std::optional<std::size_t> index_of(std::span<const int> coords) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), coords,
                                     [](const std::vector<int>& a, std::span<const int> b) {
                                       return std::lexicographical_compare(a.begin(), a.end(),
                                                                           b.begin(), b.end());
                                     });
    if (it == nodes_.end() || !std::equal(it->begin(), it->end(), coords.begin(), coords.end()))
      return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
  }

  /// L1 distance between two grid nodes.
  double node_distance(std::size_t a, std::size_t b) const {
    double d = 0;
    for (std::size_t c = 0; c < S_; ++c)
      d += std::abs(nodes_[a][c] - nodes_[b][c]);
    return d / static_cast<double>(M_);
  }

  /// Containing Kuhn cell and barycentric weights for an arbitrary belief.
  ///
  /// Works in the cumulative coordinates v_a = sum_{b>=a} M p_b (a staircase
  /// with v_0 = M): the cell base is floor(v), and the vertices add unit steps
  /// in decreasing order of the fractional parts. Zero-weight vertices are
  /// dropped, so every returned node is a valid lattice point.
  Stencil locate(const Belief& p) const {
    if (p.size() != S_) throw DimensionMismatch("belief grid: belief dimension mismatch");
    const double M = static_cast<double>(M_);

    std::vector<double> v(S_);
    double suffix = 0.0;
    for (std::size_t a = S_; a-- > 0;) {
      suffix += M * p[a];
      v[a] = suffix;
    }
    v[0] = M;  // exact by construction
    for (std::size_t a = 1; a < S_; ++a) v[a] = std::clamp(v[a], 0.0, v[a - 1]);

    std::vector<int> base(S_);
    std::vector<double> frac(S_);
    base[0] = static_cast<int>(M_);
    frac[0] = 0.0;
    for (std::size_t a = 1; a < S_; ++a) {
      base[a] = static_cast<int>(std::floor(v[a]));
      if (base[a] > base[a - 1]) base[a] = base[a - 1];  // keep the staircase monotone
      frac[a] = v[a] - static_cast<double>(base[a]);
    }

    std::vector<std::size_t> order(S_ > 1 ? S_ - 1 : 0);
    std::iota(order.begin(), order.end(), std::size_t{1});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (frac[a] != frac[b]) return frac[a] > frac[b];
      return a < b;
    });

    Stencil st;
    auto push_vertex = [&](const std::vector<int>& staircase, double weight) {
      if (weight <= 1e-15) return;
      std::vector<int> coords(S_);
      for (std::size_t a = 0; a < S_; ++a) {
        const int next = a + 1 < S_ ? staircase[a + 1] : 0;
        coords[a] = staircase[a] - next;
        if (coords[a] < 0) throw NumericalFailure("belief grid: locate produced invalid cell");
      }
      const auto idx = index_of(coords);
      if (!idx) throw NumericalFailure("belief grid: locate produced unknown node");
      st.nodes.push_back(*idx);
      st.weights.push_back(weight);
    };

    std::vector<int> staircase = base;
    double prev = 1.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      push_vertex(staircase, prev - frac[order[k]]);
      prev = frac[order[k]];
      staircase[order[k]] += 1;
    }
    push_vertex(staircase, prev);

    double total = 0.0;
    for (double w : st.weights) total += w;
    for (double& w : st.weights) w /= total;
    return st;
  }

  double interpolate(std::span<const double> node_values, const Belief& p) const {
    const Stencil st = locate(p);
    double out = 0.0;
    for (std::size_t k = 0; k < st.nodes.size(); ++k)
      out += st.weights[k] * node_values[st.nodes[k]];
    return out;
  }

  double interpolate(std::span<const double> node_values, const Stencil& st) const {
    double out = 0.0;
    for (std::size_t k = 0; k < st.nodes.size(); ++k)
      out += st.weights[k] * node_values[st.nodes[k]];
    return out;
  }

 private:
  void enumerate(std::vector<int>& coords, std::size_t pos, int remaining) {
    if (pos + 1 == S_) {
      coords[pos] = remaining;
      nodes_.push_back(coords);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      coords[pos] = c;
      enumerate(coords, pos + 1, remaining - c);
    }
  }

  std::size_t S_;
  unsigned M_;
  std::vector<std::vector<int>> nodes_;  // lexicographically sorted by construction
};

}  // namespace stagegames
