#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "stagegames/errors.hpp"
#include "stagegames/partition.hpp"

namespace stagegames {

/// h-indexed discount factors alpha_h with asymptotic rate
/// lambda = lim_{h->0} alpha_h / h. Three admissible families:
///   exponential: alpha_h = 1 - exp(-lambda h)
///   linear:      alpha_h = lambda h
///   capped:      alpha_h = lambda h for h <= 1/lambda, 0 beyond
class DiscountFamily {
 public:
  enum class Kind { exponential, linear, capped };

  static DiscountFamily exponential(double lambda) { return {Kind::exponential, lambda}; }
  static DiscountFamily linear(double lambda) { return {Kind::linear, lambda}; }
  static DiscountFamily capped(double lambda) { return {Kind::capped, lambda}; }

  static DiscountFamily make(const std::string& kind, double lambda) {
    if (kind == "exp" || kind == "exponential") return exponential(lambda);
    if (kind == "linear") return linear(lambda);
    if (kind == "capped") return capped(lambda);
    throw ValidationError("unknown discount family: " + kind);
  }

  Kind kind() const { return kind_; }
  double lambda() const { return lambda_; }

  double alpha(double h) const {
    switch (kind_) {
      case Kind::exponential:
        return 1.0 - std::exp(-lambda_ * h);
      case Kind::linear:
        return lambda_ * h;
      case Kind::capped:
        return h > 1.0 / lambda_ ? 0.0 : lambda_ * h;
    }
    return 0.0;
  }

 private:
  DiscountFamily(Kind kind, double lambda) : kind_(kind), lambda_(lambda) {
    if (!(lambda > 0.0)) throw ValidationError("discount family: lambda must be positive");
  }

  Kind kind_ = Kind::linear;
  double lambda_ = 0.0;
};

/// First N stage weights w_i = prod_{j<i} (1 - alpha_{h_j}) * h_i, computed in
/// one pass with a running survival product. Throws DegenerateDiscount when
/// some alpha reaches 1.
inline std::vector<double> stage_weights(const DiscountFamily& family,
                                         const Partition& partition, std::size_t n_stages) {
  if (partition.count() && *partition.count() < n_stages)
    throw ValidationError("stage_weights: partition has fewer stages than requested");
  std::vector<double> weights;
  weights.reserve(n_stages);
  double survival = 1.0;
  for (std::size_t i = 0; i < n_stages; ++i) {
    const double h = partition.step(i);
    weights.push_back(survival * h);
    const double a = family.alpha(h);
    if (a >= 1.0) throw DegenerateDiscount("stage_weights: discount factor reached 1");
    survival *= 1.0 - a;
  }
  return weights;
}

/// Deviation |sum_i w_i - 1/lambda| for the linear family, summed until the
/// survival product drops below eps. The telescoping identity makes the
/// deviation at most eps / lambda on any divergent partition.
inline double weight_sum_identity_check(const DiscountFamily& family,
                                        const Partition& partition, double eps) {
  if (family.kind() != DiscountFamily::Kind::linear)
    throw ValidationError("weight_sum_identity_check: needs the linear family");
  if (!(eps > 0.0)) throw ValidationError("weight_sum_identity_check: eps must be positive");
  if (!partition.unbounded())
    throw NonDivergentTail("weight_sum_identity_check: needs a divergent partition");

  const double lambda = family.lambda();
  double survival = 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < 10'000'000; ++i) {
    const double h = partition.step(i);
    const double a = family.alpha(h);
    if (a >= 1.0) throw DegenerateDiscount("weight_sum_identity_check: discount factor reached 1");
    sum += survival * h;
    survival *= 1.0 - a;
    if (survival < eps) return std::abs(sum - 1.0 / lambda);
  }
  throw TruncationUnreachable("weight_sum_identity_check: survival never dropped below eps");
}

/// Worst-case total-payoff difference between two discount families with the
/// same asymptotic rate over payoff streams |g_i| <= C h_i:
/// C * sum_i |w_i^A - w_i^B|, truncated once both survival products are below
/// 1e-12. Decays as sup h -> 0.
inline double family_equivalence_gap(const DiscountFamily& fam_a, const DiscountFamily& fam_b,
                                     const Partition& partition, double stream_bound) {
  if (fam_a.lambda() != fam_b.lambda())
    throw RateMismatch("family_equivalence_gap: families declare different rates");
  if (!(stream_bound >= 0.0))
    throw ValidationError("family_equivalence_gap: stream bound must be nonnegative");

  constexpr double kSharedTol = 1e-12;
  double surv_a = 1.0, surv_b = 1.0;
  double gap = 0.0;
  const std::size_t limit = partition.count().value_or(10'000'000);
  for (std::size_t i = 0; i < limit; ++i) {
    const double h = partition.step(i);
    gap += stream_bound * std::abs(surv_a * h - surv_b * h);
    const double aa = fam_a.alpha(h);
    const double ab = fam_b.alpha(h);
    if (aa >= 1.0 || ab >= 1.0)
      throw DegenerateDiscount("family_equivalence_gap: discount factor reached 1");
    surv_a *= 1.0 - aa;
    surv_b *= 1.0 - ab;
    if (surv_a < kSharedTol && surv_b < kSharedTol) return gap;
  }
  if (partition.count()) return gap;
  throw TruncationUnreachable("family_equivalence_gap: survival never dropped below tolerance");
}

}  // namespace stagegames
