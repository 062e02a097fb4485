#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "exptest/errors.hpp"
#include "exptest/simplex.hpp"
#include "test_support.hpp"

using namespace exptest;
using exptest::testing::random_belief;

TEST_CASE("min_prob picks the smallest coordinate") {
  CHECK(min_prob(Belief({0.5, 0.5})) == 0.5);
  CHECK(min_prob(Belief::uniform(3)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(min_prob(Belief({0.2, 0.5, 0.3})) == 0.2);
}

TEST_CASE("belief validation") {
  CHECK_THROWS_AS(Belief({0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(Belief({1.1, -0.1}), InvalidArgument);
  CHECK_THROWS_AS(Belief({1.0}), InvalidArgument);
  // tiny negative rounding is clamped
  Belief b({1.0 + 1e-13, -1e-13});
  CHECK(b[1] == 0.0);

  const double head[] = {0.2, 0.3};
  const auto full = Belief::from_free(head);
  CHECK(full.size() == 3);
  CHECK(full[2] == doctest::Approx(0.5));
}

TEST_CASE("contracts reject non-positive terms") {
  CHECK_THROWS_AS(Contract(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Contract(1.0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(GeneralizedContract(1.0, {1.0, 0.0}), InvalidArgument);
  CHECK(GeneralizedContract(Contract(1.0, 2.0), 3).equal_fines());
  CHECK_FALSE(GeneralizedContract(1.0, {1.0, 2.0}).equal_fines());
}

TEST_CASE("barycenter") {
  const auto one = PosteriorDistribution({Belief({0.4, 0.6})}, {1.0}, Belief({0.4, 0.6}));
  CHECK(barycenter(one) == Belief({0.4, 0.6}));

  const auto split = PosteriorDistribution({Belief({0.0, 1.0}), Belief({1.0, 0.0})}, {0.5, 0.5}, Belief({0.5, 0.5}));
  CHECK(barycenter(split)[0] == doctest::Approx(0.5).epsilon(1e-15));

  // 2/3 * 1/4 + 1/3 * 1 = 1/2
  const auto skew =
      PosteriorDistribution({Belief({0.25, 0.75}), Belief({1.0, 0.0})}, {2.0 / 3.0, 1.0 / 3.0}, Belief({0.5, 0.5}));
  CHECK(std::abs(barycenter(skew)[0] - 0.5) < 1e-15);

  CHECK_THROWS_AS(barycenter(std::span<const Belief>{}, std::span<const double>{}), EmptySupport);
  CHECK_THROWS_AS(PosteriorDistribution({Belief({0.25, 0.75})}, {1.0}, Belief({0.5, 0.5})), InvalidArgument);
}

TEST_CASE("simplex_grid enumerates the lattice") {
  const auto coarse = simplex_grid(2, 2);
  REQUIRE(coarse.size() == 3);
  CHECK(coarse[0] == Belief({0.0, 1.0}));
  CHECK(coarse[1] == Belief({0.5, 0.5}));
  CHECK(coarse[2] == Belief({1.0, 0.0}));
  CHECK(simplex_grid(2, 4).size() == 5);
  CHECK(simplex_grid(3, 2).size() == 6);

  SUBCASE("size is C(r + n - 1, n - 1) and every vertex is present") {
    for (std::size_t n = 2; n <= 5; ++n) {
      for (int r : {1, 2, 3, 7, 10}) {
        // independent count: Pascal's rule
        std::vector<std::vector<double>> c(40, std::vector<double>(40, 0.0));
        for (int a = 0; a < 40; ++a) {
          c[a][0] = 1.0;
          for (int b = 1; b <= a; ++b) c[a][b] = c[a - 1][b - 1] + c[a - 1][b];
        }
        const auto grid = simplex_grid(n, r);
        CHECK(grid.size() == static_cast<std::size_t>(c[r + n - 1][n - 1]));
        CHECK(simplex_grid_size(n, r) == grid.size());
        for (std::size_t i = 0; i < n; ++i) {
          CHECK(std::find(grid.begin(), grid.end(), Belief::vertex(n, i)) != grid.end());
        }
        for (const auto& b : grid) {
          double total = 0.0;
          for (double p : b.probs()) {
            CHECK(p >= -1e-12);
            total += p;
          }
          CHECK(std::abs(total - 1.0) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("ball_grid") {
  const auto line = ball_grid(Belief({0.5, 0.5}), 0.05, 100);
  for (const auto& b : line) CHECK(std::abs(b[0] - 0.5) * std::sqrt(2.0) <= 0.05 + 1e-12);
  // |k/100 - 1/2| <= 0.05/sqrt(2) = 0.0354 -> k in 47..53
  CHECK(line.size() == 7);

  CHECK(ball_grid(Belief({0.3, 0.7}), 5.0, 10).size() == 11);

  const auto center = ball_grid(Belief::uniform(3), 0.01, 3);
  REQUIRE(center.size() == 1);
  CHECK(std::abs(center[0][0] - 1.0 / 3.0) < 1e-15);

  SUBCASE("never empty") {
    const auto nearest = ball_grid(Belief({0.33, 0.67}), 1e-6, 4);
    REQUIRE(nearest.size() == 1);
    CHECK(nearest[0] == Belief({0.25, 0.75}));
  }
  SUBCASE("sup norm") {
    const auto sup = ball_grid(Belief({0.5, 0.5}), 0.05, 100, BallNorm::Sup);
    CHECK(sup.size() == 11);
  }
}

TEST_CASE("distance norms") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_belief(rng, 4);
    const auto b = random_belief(rng, 4);
    const double eu = distance(a, b);
    const double sup = distance(a, b, BallNorm::Sup);
    CHECK(sup <= eu + 1e-15);
    CHECK(eu <= 2.0 * sup + 1e-15);
  }
}
