#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "stagegames/errors.hpp"

namespace stagegames {

/// Action times 0 = t_0 < t_1 < ... covering [0, T). Stored as an explicit
/// prefix plus an optional tail rule, so unbounded partitions stay lazy and
/// solvers can pull steps until their truncation criterion fires.
///
/// Stage n runs over [time(n), time(n+1)) with duration step(n). For a finite
/// partition without tail, the last stage closes the horizon:
/// step(count-1) = horizon - time(count-1).
class Partition {
 public:
  enum class TailKind { none, constant, geometric };

  struct TailRule {
    TailKind kind = TailKind::none;
    double first = 0.0;  // first step after the prefix
    double ratio = 1.0;  // geometric only
  };

  static Partition uniform(double h, double horizon) {
    if (!(h > 0.0)) throw NonPositiveStep("uniform partition: step must be positive");
    if (!(horizon > 0.0)) throw ValidationError("uniform partition: horizon must be positive");
    if (h > horizon) throw ValidationError("uniform partition: step exceeds horizon");
    std::vector<double> times;
    // Times fill [0, horizon); a shorter remainder stage absorbs any leftover.
    const double n_exact = horizon / h;
    const std::size_t full = static_cast<std::size_t>(std::floor(n_exact - 1e-9)) + 1;
    times.reserve(full);
    for (std::size_t i = 0; i < full; ++i) times.push_back(static_cast<double>(i) * h);
    return Partition(std::move(times), TailRule{}, horizon);
  }

  static Partition uniform_unbounded(double h) {
    if (!(h > 0.0)) throw NonPositiveStep("uniform partition: step must be positive");
    return Partition({0.0}, TailRule{TailKind::constant, h, 1.0},
                     std::numeric_limits<double>::infinity());
  }

  static Partition from_times(std::vector<double> times, double horizon) {
    return Partition(std::move(times), TailRule{}, horizon);
  }

  static Partition from_times_with_tail(std::vector<double> times, TailRule tail,
                                        double horizon) {
    return Partition(std::move(times), tail, horizon);
  }

  bool unbounded() const { return std::isinf(horizon_); }
  double horizon() const { return horizon_; }

  /// Number of stages when the partition is finite; nullopt when a tail rule
  /// generates steps forever.
  std::optional<std::size_t> count() const {
    if (tail_.kind == TailKind::none) return prefix_.size();
    return std::nullopt;
  }

  double time(std::size_t n) const {
    if (n < prefix_.size()) return prefix_[n];
    switch (tail_.kind) {
      case TailKind::none:
        if (n == prefix_.size()) return horizon_;
        throw OutOfRange("partition time index beyond finite partition");
      case TailKind::constant:
        return prefix_.back() + tail_.first * static_cast<double>(n + 1 - prefix_.size());
      case TailKind::geometric: {
        const double k = static_cast<double>(n + 1 - prefix_.size());
        if (tail_.ratio == 1.0) return prefix_.back() + tail_.first * k;
        return prefix_.back() +
               tail_.first * (1.0 - std::pow(tail_.ratio, k)) / (1.0 - tail_.ratio);
      }
    }
    throw OutOfRange("partition time: bad tail kind");
  }

  double step(std::size_t n) const {
    if (n + 1 < prefix_.size()) return prefix_[n + 1] - prefix_[n];
    if (tail_.kind == TailKind::none) {
      if (n + 1 == prefix_.size()) return horizon_ - prefix_[n];
      throw OutOfRange("partition step index beyond finite partition");
    }
    if (n + 1 == prefix_.size()) return time(n + 1) - prefix_[n];
    return time(n + 1) - time(n);
  }

  /// Cached supremum of step sizes (max over the first 10^4 generated steps
  /// for lazy tails).
  double sup_step() const { return sup_step_; }

 private:
  Partition(std::vector<double> prefix, TailRule tail, double horizon)
      : prefix_(std::move(prefix)), tail_(tail), horizon_(horizon) {
    if (prefix_.empty()) throw ValidationError("partition: needs at least one time");
    if (prefix_.front() != 0.0) throw ValidationError("partition: first time must be 0");
    for (std::size_t i = 0; i + 1 < prefix_.size(); ++i)
      if (!(prefix_[i + 1] > prefix_[i]))
        throw NonPositiveStep("partition: times must strictly increase");

    const bool infinite_horizon = std::isinf(horizon_);
    if (!infinite_horizon && !(horizon_ > prefix_.back()))
      throw ValidationError("partition: horizon must exceed the last explicit time");

    switch (tail_.kind) {
      case TailKind::none:
        if (infinite_horizon)
          throw NonDivergentTail("partition: unbounded horizon requires a tail rule");
        break;
      case TailKind::constant:
        if (!(tail_.first > 0.0)) throw NonPositiveStep("partition tail: step must be positive");
        if (!infinite_horizon)
          throw ValidationError("partition: constant tail overruns a finite horizon");
        break;
      case TailKind::geometric:
        if (!(tail_.first > 0.0) || !(tail_.ratio > 0.0))
          throw NonPositiveStep("partition tail: step and ratio must be positive");
        if (infinite_horizon) {
          if (tail_.ratio < 1.0)
            throw NonDivergentTail("partition: geometric tail with ratio < 1 has summable steps");
        } else {
          if (tail_.ratio >= 1.0)
            throw ValidationError("partition: diverging tail overruns a finite horizon");
          const double limit = prefix_.back() + tail_.first / (1.0 - tail_.ratio);
          if (limit > horizon_ * (1.0 + 1e-12))
            throw ValidationError("partition: geometric tail overruns the horizon");
        }
        break;
    }

    sup_step_ = 0.0;
    const std::size_t probe = count() ? *count() : std::size_t{10000};
    for (std::size_t n = 0; n < probe; ++n) sup_step_ = std::max(sup_step_, step(n));
  }

  std::vector<double> prefix_;
  TailRule tail_;
  double horizon_ = 0.0;
  double sup_step_ = 0.0;
};

struct PartitionSpec {
  std::optional<double> uniform_h;
  std::optional<double> horizon;
  std::vector<double> explicit_times;
  Partition::TailRule tail;
};

/// Builds a Partition from either a {uniform h, horizon} pair or explicit
/// times plus a tail rule.
inline Partition make_partition(const PartitionSpec& spec) {
  if (spec.uniform_h) {
    if (spec.horizon) return Partition::uniform(*spec.uniform_h, *spec.horizon);
    return Partition::uniform_unbounded(*spec.uniform_h);
  }
  const double horizon =
      spec.horizon ? *spec.horizon : std::numeric_limits<double>::infinity();
  if (spec.tail.kind == Partition::TailKind::none)
    return Partition::from_times(spec.explicit_times, horizon);
  return Partition::from_times_with_tail(spec.explicit_times, spec.tail, horizon);
}

}  // namespace stagegames
