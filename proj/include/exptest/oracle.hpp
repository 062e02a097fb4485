#pragma once

#include <functional>
#include <vector>

#include "exptest/cost.hpp"

// Brute-force baselines. Deliberately naive and independent of the fast
// paths they check; meant for tests and the acceptance suite.
namespace exptest::oracle {

/// max over grid pairs a <= prior <= b of the chord value at prior, grid
/// x_k = k / resolution. O(resolution^2).
double brute_force_two_point_search(const std::function<double(double)>& f, double prior, int resolution);

struct MaximinSolution {
  double value;
  std::vector<double> strategy;
};

/// Row player's maximin over mixed strategies for payoff[row][column], by a
/// dense tableau simplex with Bland's rule.
MaximinSolution lp_maximin(const std::vector<std::vector<double>>& payoff);

struct ConvexityVerdict {
  bool convex;
  bool strictly_convex;
};

/// Midpoint convexity on every lattice-adjacent triple of the two-state grid
/// of the given resolution (1e-9 slack); strictness with margin 1e-12.
ConvexityVerdict convexity_probe(const Potential& c, int resolution);

}  // namespace exptest::oracle
