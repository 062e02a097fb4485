#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "exptest/oracle.hpp"

using namespace exptest;
using namespace exptest::oracle;

TEST_CASE("brute_force_two_point_search") {
  auto concave = [](double x) { return -(x - 0.3) * (x - 0.3); };
  CHECK(brute_force_two_point_search(concave, 0.3, 100) == doctest::Approx(0.0));
  CHECK(brute_force_two_point_search(concave, 0.5, 100) == doctest::Approx(concave(0.5)));

  auto kink = [](double x) { return -std::min(x, 1.0 - x); };
  CHECK(brute_force_two_point_search(kink, 0.5, 50) == doctest::Approx(0.0));
}

TEST_CASE("lp_maximin") {
  // equal fines: u - d/n
  for (std::size_t n : {2u, 3u, 5u}) {
    const double u = 4.0;
    const double d = 9.0;
    std::vector<std::vector<double>> payoff(n, std::vector<double>(n, u));
    for (std::size_t i = 0; i < n; ++i) payoff[i][i] = u - d;
    const auto sol = lp_maximin(payoff);
    CHECK(sol.value == doctest::Approx(u - d / static_cast<double>(n)).epsilon(1e-12));
    for (double s : sol.strategy) CHECK(s == doctest::Approx(1.0 / static_cast<double>(n)));
  }

  const auto single = lp_maximin({{3.0, -1.0, 2.0}});
  CHECK(single.value == doctest::Approx(-1.0));

  // d = (3, 1), u = 1: 1 - 1/(1/3 + 1) = 1/4
  const auto skew = lp_maximin({{1.0 - 3.0, 1.0}, {1.0, 1.0 - 1.0}});
  CHECK(skew.value == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(skew.strategy[0] == doctest::Approx(0.25));
  CHECK(skew.strategy[1] == doctest::Approx(0.75));

  // matching pennies
  CHECK(lp_maximin({{1.0, -1.0}, {-1.0, 1.0}}).value == doctest::Approx(0.0));
}

TEST_CASE("convexity_probe") {
  const auto entropy = convexity_probe(neg_entropy(), 200);
  CHECK(entropy.convex);
  CHECK(entropy.strictly_convex);

  const auto quad = convexity_probe(quadratic(), 200);
  CHECK(quad.convex);
  CHECK(quad.strictly_convex);

  const Potential abs_kink{"abs", [](const Belief& x) { return std::abs(x[0] - 0.5); }};
  const auto kinked = convexity_probe(abs_kink, 200);
  CHECK(kinked.convex);
  CHECK_FALSE(kinked.strictly_convex);

  const Potential concave{"concave", [](const Belief& x) { return -x[0] * x[0]; }};
  CHECK_FALSE(convexity_probe(concave, 50).convex);
}
