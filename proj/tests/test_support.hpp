#pragma once

#include <random>
#include <vector>

#include "exptest/simplex.hpp"

namespace exptest::testing {

inline std::vector<double> random_probs(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> v(n);
  double total = 0.0;
  for (double& x : v) total += (x = expo(rng));
  for (double& x : v) x /= total;
  return v;
}

inline Belief random_belief(std::mt19937_64& rng, std::size_t n) { return Belief(random_probs(rng, n)); }

inline std::vector<std::vector<double>> random_stochastic(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::vector<std::vector<double>> m;
  for (std::size_t r = 0; r < rows; ++r) m.push_back(random_probs(rng, cols));
  return m;
}

}  // namespace exptest::testing
