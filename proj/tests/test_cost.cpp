#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "exptest/cost.hpp"
#include "exptest/errors.hpp"
#include "test_support.hpp"

using namespace exptest;
using exptest::testing::random_belief;
using exptest::testing::random_stochastic;

TEST_CASE("experiment_cost") {
  const Belief half({0.5, 0.5});
  const CostModel menu = FixedMenu{{{Experiment::symmetric_binary(0.75), 50.0}}};
  const CostModel entropy = PosteriorSeparable{1.0, neg_entropy()};

  CHECK(experiment_cost(menu, Experiment::null(2), half) == 0.0);
  CHECK(experiment_cost(entropy, Experiment::null(2), half) == 0.0);
  CHECK(experiment_cost(menu, Experiment::symmetric_binary(0.75), half) == 50.0);
  CHECK(experiment_cost(menu, Experiment::fully_informative(2), half) == std::numeric_limits<double>::infinity());
  CHECK(experiment_cost(entropy, Experiment::fully_informative(2), half) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("distribution_cost") {
  const PosteriorSeparable entropy{1.0, neg_entropy()};
  const PosteriorSeparable quad{1.0, quadratic()};
  const Belief half({0.5, 0.5});
  const auto reveal = PosteriorDistribution({Belief::vertex(2, 0), Belief::vertex(2, 1)}, {0.5, 0.5}, half);

  CHECK(distribution_cost(entropy, PosteriorDistribution::degenerate(half)) == 0.0);
  CHECK(distribution_cost(entropy, reveal) == doctest::Approx(0.6931471805599453).epsilon(1e-14));
  CHECK(distribution_cost(quad, reveal) == doctest::Approx(0.5).epsilon(1e-14));

  const PosteriorSeparable diverging{1.0, {"inv", [](const Belief& x) {
                                              return x[0] > 0.0 ? 1.0 / x[0] : std::numeric_limits<double>::infinity();
                                            }}};
  CHECK_THROWS_AS(distribution_cost(diverging, reveal), InfinitePotential);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(validate(CostModel(PosteriorSeparable{0.0, neg_entropy()})), InvalidArgument);
  CHECK_THROWS_AS(validate(CostModel(FixedMenu{{{Experiment::null(2), -1.0}}})), InvalidArgument);
}

TEST_CASE("posterior-separable cost properties") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(2, 5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& potential : {neg_entropy(), quadratic()}) {
    const PosteriorSeparable model{0.7, potential};
    const PosteriorSeparable moved{0.7, shifted(potential, 7.0)};
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = dim(rng);
      const std::size_t m = dim(rng);
      const Experiment e(random_stochastic(rng, n, m));
      const auto mu = random_belief(rng, n);
      const auto f = induced_posterior_distribution(e, mu);
      const double cost = distribution_cost(model, f);

      CHECK(cost >= -1e-9);
      CHECK(std::abs(distribution_cost(moved, f) - cost) <= 1e-9);

      const Experiment g = garble(e, random_stochastic(rng, m, dim(rng)));
      CHECK(distribution_cost(model, induced_posterior_distribution(g, mu)) <= cost + 1e-9);

      // convexity of the potential itself
      const auto x = random_belief(rng, n);
      const auto y = random_belief(rng, n);
      const double lambda = unit(rng);
      std::vector<double> mix(n);
      for (std::size_t i = 0; i < n; ++i) mix[i] = lambda * x[i] + (1.0 - lambda) * y[i];
      CHECK(potential(Belief(mix)) <= lambda * potential(x) + (1.0 - lambda) * potential(y) + 1e-9);
    }
  }
}
