#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace stagegames {

// Uniform draws built directly on the mt19937_64 word stream. The standard
// pins the engine output exactly, while std::uniform_real_distribution is
// implementation-defined; hand-rolling keeps seeded runs reproducible
// everywhere.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform_unit(rng) * static_cast<double>(n)) % n;
}

// Strictly positive probability vector with a uniform-ish spread.
inline std::vector<double> random_probability_vector(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  double total = 0.0;
  for (auto& x : v) {
    x = 1.0 - uniform_unit(rng);  // (0, 1]
    total += x;
  }
  for (auto& x : v) x /= total;
  return v;
}

}  // namespace stagegames
