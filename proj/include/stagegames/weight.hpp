#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "stagegames/errors.hpp"
#include "stagegames/numeric.hpp"

namespace stagegames {

/// Nonincreasing weight k : [0,T] -> R+ with unit integral. Exponential and
/// uniform kinds use closed forms for both evaluation and the tail integral;
/// custom kinds are sampled tables with linear interpolation and exact
/// trapezoid integrals of the interpolant.
class WeightFunction {
 public:
  enum class Kind { exponential, uniform, custom };

  /// k(t) = lambda * exp(-lambda t) on [0, inf).
  static WeightFunction exponential(double lambda) {
    if (!(lambda > 0.0)) throw ValidationError("exponential weight: lambda must be positive");
    WeightFunction k;
    k.kind_ = Kind::exponential;
    k.lambda_ = lambda;
    k.horizon_ = std::numeric_limits<double>::infinity();
    return k;
  }

  /// k(t) = 1/T on [0, T].
  static WeightFunction uniform(double horizon) {
    if (!(horizon > 0.0)) throw ValidationError("uniform weight: horizon must be positive");
    WeightFunction k;
    k.kind_ = Kind::uniform;
    k.horizon_ = horizon;
    return k;
  }

  /// Sampled table on [0, T]; linearly interpolated between samples.
  /// Validates nonnegativity, monotonicity on a 1024-point grid, and unit
  /// integral within 1e-9.
  static WeightFunction custom(std::vector<double> ts, std::vector<double> ks) {
    if (ts.size() != ks.size() || ts.size() < 2)
      throw ValidationError("custom weight: need matching tables with >= 2 samples");
    if (ts.front() != 0.0) throw ValidationError("custom weight: table must start at t = 0");
    for (std::size_t i = 0; i + 1 < ts.size(); ++i)
      if (!(ts[i + 1] > ts[i]))
        throw ValidationError("custom weight: sample times must strictly increase");
    for (double v : ks)
      if (!(v >= 0.0)) throw ValidationError("custom weight: negative sample");

    WeightFunction k;
    k.kind_ = Kind::custom;
    k.horizon_ = ts.back();
    k.ts_ = std::move(ts);
    k.ks_ = std::move(ks);

    // Cumulative tail integral at the sample times, assembled from the back.
    k.tail_.assign(k.ts_.size(), 0.0);
    for (std::size_t i = k.ts_.size() - 1; i-- > 0;) {
      const double seg = 0.5 * (k.ks_[i] + k.ks_[i + 1]) * (k.ts_[i + 1] - k.ts_[i]);
      k.tail_[i] = k.tail_[i + 1] + seg;
    }
    if (std::abs(k.tail_.front() - 1.0) > kIntegralTol)
      throw ValidationError("custom weight: integral over [0, T] is not 1");

    const std::size_t grid = 1024;
    double prev = k(0.0);
    for (std::size_t i = 1; i < grid; ++i) {
      const double cur = k(k.horizon_ * static_cast<double>(i) / (grid - 1));
      if (cur > prev + kStructuralTol)
        throw ValidationError("custom weight: not nonincreasing");
      prev = cur;
    }
    return k;
  }

  Kind kind() const { return kind_; }
  double horizon() const { return horizon_; }
  double lambda() const { return lambda_; }
  /// sup-norm, which a nonincreasing k attains at 0.
  double sup() const { return (*this)(0.0); }

  double operator()(double t) const {
    switch (kind_) {
      case Kind::exponential:
        return t < 0.0 ? lambda_ : lambda_ * std::exp(-lambda_ * t);
      case Kind::uniform:
        return (t >= 0.0 && t <= horizon_) ? 1.0 / horizon_ : (t < 0.0 ? 1.0 / horizon_ : 0.0);
      case Kind::custom: {
        if (t <= 0.0) return ks_.front();
        if (t >= horizon_) return ks_.back();
        const auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
        const std::size_t hi = static_cast<std::size_t>(it - ts_.begin());
        const std::size_t lo = hi - 1;
        const double a = (ts_[hi] - t) / (ts_[hi] - ts_[lo]);
        return a * ks_[lo] + (1.0 - a) * ks_[hi];
      }
    }
    return 0.0;
  }

  /// integral_tail(t) = int_t^T k(s) ds. Exponential: exp(-lambda t);
  /// uniform: (T - t)/T; custom: trapezoid of the interpolant.
  double integral_tail(double t) const {
    switch (kind_) {
      case Kind::exponential:
        return t <= 0.0 ? 1.0 : std::exp(-lambda_ * t);
      case Kind::uniform:
        return std::clamp((horizon_ - t) / horizon_, 0.0, 1.0);
      case Kind::custom: {
        if (t <= 0.0) return tail_.front();
        if (t >= horizon_) return 0.0;
        const auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
        const std::size_t hi = static_cast<std::size_t>(it - ts_.begin());
        const std::size_t lo = hi - 1;
        const double kt = (*this)(t);
        return tail_[hi] + 0.5 * (kt + ks_[hi]) * (ts_[hi] - t);
      }
    }
    return 0.0;
  }

  /// Parses "exp:LAMBDA" or "unif:T".
  static WeightFunction parse(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
      throw ValidationError("weight spec must look like exp:LAMBDA or unif:T");
    const std::string head = spec.substr(0, colon);
    const std::string num = spec.substr(colon + 1);
    double value = 0.0;
    try {
      value = std::stod(num);
    } catch (const std::exception&) {
      throw ValidationError("weight spec has a malformed number: " + spec);
    }
    if (head == "exp") return exponential(value);
    if (head == "unif") return uniform(value);
    throw ValidationError("unknown weight kind: " + head);
  }

 private:
  WeightFunction() = default;

  Kind kind_ = Kind::uniform;
  double lambda_ = 0.0;
  double horizon_ = 0.0;
  std::vector<double> ts_, ks_, tail_;
};

}  // namespace stagegames
