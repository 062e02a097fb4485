#include <cmath>
#include <random>

#include "doctest.h"
#include "exptest/errors.hpp"
#include "exptest/experiment.hpp"
#include "test_support.hpp"

using namespace exptest;
using exptest::testing::random_belief;
using exptest::testing::random_stochastic;

namespace {

const Experiment kExampleOne = Experiment::symmetric_binary(0.75);

Experiment uninformative() { return Experiment({{0.3, 0.7}, {0.3, 0.7}}); }

}  // namespace

TEST_CASE("signal_marginal") {
  const Belief mu({0.2, 0.8});
  const auto q = signal_marginal(uninformative(), mu);
  CHECK(q[0] == doctest::Approx(0.3));
  CHECK(q[1] == doctest::Approx(0.7));

  const auto half = signal_marginal(kExampleOne, Belief({0.5, 0.5}));
  CHECK(half[0] == 0.5);
  CHECK(half[1] == 0.5);

  const auto reveal = signal_marginal(Experiment::fully_informative(3), Belief({0.2, 0.5, 0.3}));
  CHECK(reveal[0] == 0.2);
  CHECK(reveal[1] == 0.5);
  CHECK(reveal[2] == 0.3);

  CHECK_THROWS_AS(signal_marginal(Experiment::fully_informative(3), mu), DimensionMismatch);
}

TEST_CASE("posterior") {
  const Belief mu({0.2, 0.8});
  CHECK(posterior(uninformative(), mu, 0)[0] == doctest::Approx(0.2));
  CHECK(posterior(uninformative(), mu, 1)[0] == doctest::Approx(0.2));

  // (1/2 * 3/4) / (1/2)
  const auto h = posterior(kExampleOne, Belief({0.5, 0.5}), 0);
  CHECK(h[0] == 0.75);
  CHECK(h[1] == 0.25);

  const Belief interior({0.2, 0.5, 0.3});
  for (std::size_t s = 0; s < 3; ++s) CHECK(posterior(Experiment::fully_informative(3), interior, s) == Belief::vertex(3, s));

  CHECK_THROWS_AS(posterior(Experiment::fully_informative(2), Belief({1.0, 0.0}), 1), ZeroProbabilitySignal);
}

TEST_CASE("induced_posterior_distribution") {
  const Belief mu({0.3, 0.7});
  const auto none = induced_posterior_distribution(uninformative(), mu);
  CHECK(none.is_degenerate());

  const auto ex1 = induced_posterior_distribution(kExampleOne, Belief({0.5, 0.5}));
  REQUIRE(ex1.size() == 2);
  CHECK(ex1.support()[0] == Belief({0.75, 0.25}));
  CHECK(ex1.support()[1] == Belief({0.25, 0.75}));
  CHECK(ex1.weights()[0] == 0.5);

  const auto full = induced_posterior_distribution(Experiment::fully_informative(2), mu);
  REQUIRE(full.size() == 2);
  CHECK(full.support()[0] == Belief::vertex(2, 0));
  CHECK(full.weights()[0] == doctest::Approx(0.3));
  CHECK(full.weights()[1] == doctest::Approx(0.7));

  // zero-marginal signals are skipped
  const auto edge = induced_posterior_distribution(Experiment::fully_informative(2), Belief({1.0, 0.0}));
  CHECK(edge.size() == 1);
}

TEST_CASE("upsilon") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 10; ++k) CHECK(std::abs(upsilon(uninformative(), random_belief(rng, 2))) <= 1e-15);
  CHECK(upsilon(Experiment::fully_informative(2), Belief({0.5, 0.5})) == 0.5);
  // 1/2 - (min{3/8, 1/8} + min{1/8, 3/8})
  CHECK(upsilon(kExampleOne, Belief({0.5, 0.5})) == 0.25);
  // d * upsilon is the payoff gap between learning (50 + 50 cost) and not (-50)
  CHECK(600.0 * upsilon(kExampleOne, Belief({0.5, 0.5})) == 150.0);
}

TEST_CASE("is_delta_valuable") {
  CHECK_FALSE(is_delta_valuable(uninformative(), Belief({0.5, 0.5}), 0.0));
  CHECK(is_delta_valuable(kExampleOne, Belief({0.5, 0.5}), 0.2));
  CHECK_FALSE(is_delta_valuable(kExampleOne, Belief({0.5, 0.5}), 0.25));
  CHECK_THROWS_AS(is_delta_valuable(kExampleOne, Belief({0.5, 0.5}), -0.1), InvalidArgument);
}

TEST_CASE("upsilon properties on random experiments") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(2, 5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = dim(rng);
    const std::size_t m = dim(rng);
    const Experiment e(random_stochastic(rng, n, m));
    const auto mu = random_belief(rng, n);

    const double direct = upsilon(e, mu);
    CHECK(direct >= -1e-15);
    CHECK(direct <= min_prob(mu) + 1e-15);

    // equals the posterior-distribution form
    const auto f = induced_posterior_distribution(e, mu);
    CHECK(std::abs(direct - upsilon(f)) <= 1e-12);

    // expected posterior equals the prior
    const auto mean = barycenter(f);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(mean[i] - mu[i]) <= 1e-9);

    // garbling never helps
    const Experiment g = garble(e, random_stochastic(rng, m, dim(rng)));
    CHECK(upsilon(g, mu) <= direct + 1e-12);
  }
}
