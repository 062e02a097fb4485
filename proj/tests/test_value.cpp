#include <cmath>
#include <random>

#include "doctest.h"
#include "exptest/errors.hpp"
#include "exptest/value.hpp"
#include "test_support.hpp"

using namespace exptest;

namespace {

const CostModel kExampleOneMenu = FixedMenu{{{Experiment::symmetric_binary(0.75), 50.0}}};

}  // namespace

TEST_CASE("gross_value") {
  const ValueFunction vf(Contract(250.0, 600.0), 2);
  CHECK(vf(Belief({0.5, 0.5})) == -50.0);
  CHECK(vf(Belief({1.0 / 3.0, 2.0 / 3.0})) == doctest::Approx(50.0).epsilon(1e-14));

  const auto urn = ValueFunction::urn(Contract(5.0, 4.0));
  CHECK(urn(Belief({0.2, 0.6, 0.2})) == 3.0);
  CHECK(urn(Belief({0.0, 1.0, 0.0})) == 3.0);
  CHECK(urn(Belief({0.5, 0.0, 0.5})) == 3.0);
  // off the kink: announce the less likely colour
  CHECK(urn(Belief({0.6, 0.4, 0.0})) == doctest::Approx(5.0 - 2.0 * 0.4));

  CHECK_THROWS_AS(vf(Belief::uniform(3)), DimensionMismatch);
  CHECK_THROWS_AS(ValueFunction(GeneralizedContract(1.0, {1.0, 2.0, 3.0}), Variant::UrnDraw), InvalidArgument);
}

TEST_CASE("urn fines match the closed form") {
  const auto urn = ValueFunction::urn(Contract(5.0, 4.0));
  std::mt19937_64 rng(1);
  for (int k = 0; k < 50; ++k) {
    const auto b = exptest::testing::random_belief(rng, 3);
    for (std::size_t a = 0; a < 2; ++a) {
      double via_matrix = 0.0;
      for (std::size_t s = 0; s < 3; ++s) via_matrix += urn.fine(a, s) * b[s];
      CHECK(urn.expected_fine(a, b) == doctest::Approx(via_matrix).epsilon(1e-12));
    }
  }
}

TEST_CASE("announce") {
  const ValueFunction equal(Contract(1.0, 1.0), 3);
  CHECK(announce(equal, Belief({0.2, 0.5, 0.3})) == 0);
  CHECK(announce(ValueFunction(GeneralizedContract(1.0, {3.0, 1.0})), Belief({0.3, 0.7})) == 1);
  CHECK(announce(ValueFunction(Contract(1.0, 1.0), 2), Belief({0.5, 0.5})) == 0);
  const auto urn = ValueFunction::urn(Contract(1.0, 1.0));
  CHECK(announce(urn, Belief({0.1, 0.3, 0.6})) == 0);
  CHECK(announce(urn, Belief({0.6, 0.3, 0.1})) == 1);
}

TEST_CASE("informed_value with the two-state single-experiment menu") {
  const ValueFunction vf(Contract(250.0, 600.0), 2);

  const auto half = informed_value(vf, kExampleOneMenu, Belief({0.5, 0.5}));
  CHECK(half.net_value == 50.0);
  REQUIRE(half.menu_choice.has_value());
  CHECK(*half.menu_choice == 0);
  CHECK(half.plan.size() == 2);

  // 250 - 600/4 = 100 beats 250 - 150 - 50 = 50
  const auto quarter = informed_value(vf, kExampleOneMenu, Belief({0.25, 0.75}));
  CHECK(quarter.net_value == 100.0);
  CHECK_FALSE(quarter.menu_choice.has_value());
  CHECK(quarter.plan.is_degenerate());
}

TEST_CASE("informed_value at a vertex is the payment") {
  for (std::size_t n : {2u, 3u}) {
    const ValueFunction vf(Contract(7.0, 30.0), n);
    const CostModel model = PosteriorSeparable{0.2, neg_entropy()};
    for (std::size_t i = 0; i < n; ++i) {
      const auto out = informed_value(vf, model, Belief::vertex(n, i));
      CHECK(out.net_value == doctest::Approx(7.0).epsilon(1e-12));
      CHECK(out.plan.is_degenerate());
    }
  }
}

TEST_CASE("posterior-separable informed values: dominance, plausibility, achievement, concavity") {
  const ValueFunction vf(Contract(0.2, 1.0), 2);
  const PosteriorSeparable ps{0.05, neg_entropy()};
  InformedSolver solver(vf, ps, {1000});
  const auto grid = simplex_grid(2, 1000);
  std::vector<double> cav;
  for (const auto& mu : grid) {
    const auto out = solver(mu);
    CHECK(out.net_value >= vf(mu) - 1e-9);
    const auto mean = barycenter(out.plan);
    CHECK(std::abs(mean[0] - mu[0]) <= 1e-9);
    double achieved = ps.kappa * ps.potential(mu);
    for (std::size_t j = 0; j < out.plan.size(); ++j) {
      achieved += out.plan.weights()[j] * learning_objective(vf, ps, out.plan.support()[j]);
    }
    CHECK(std::abs(achieved - out.net_value) <= 1e-6);
    cav.push_back(out.net_value - ps.kappa * ps.potential(mu));
  }
  for (std::size_t k = 1; k + 1 < cav.size(); ++k) CHECK(cav[k] >= 0.5 * (cav[k - 1] + cav[k + 1]) - 1e-9);

  // off-grid priors still dominate the no-learning payoff
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const auto mu = exptest::testing::random_belief(rng, 2);
    CHECK(solver(mu).net_value >= vf(mu) - 1e-9);
  }
}

TEST_CASE("optimal learning at the kink is symmetric and leaves a gap") {
  for (double kappa : {0.01, 0.1, 1.0}) {
    for (const auto& potential : {neg_entropy(), quadratic()}) {
      const ValueFunction vf(Contract(0.5, 1.0), 2);
      const auto out = informed_value(vf, PosteriorSeparable{kappa, potential}, Belief({0.5, 0.5}));
      if (out.plan.is_degenerate()) continue;
      REQUIRE(out.plan.size() == 2);
      const double lo = out.plan.support()[0][0];
      const double hi = out.plan.support()[1][0];
      CHECK(lo < 0.5);
      CHECK(hi > 0.5);
      CHECK(std::abs(lo - (1.0 - hi)) <= 1e-9);
    }
  }
}

TEST_CASE("three-state informed values use the LP envelope") {
  const ValueFunction vf(Contract(0.2, 1.0), 3);
  const PosteriorSeparable ps{0.02, neg_entropy()};
  InformedSolver solver(vf, ps, {30});
  for (const auto& mu : simplex_grid(3, 30)) {
    const auto out = solver(mu);
    CHECK(out.net_value >= vf(mu) - 1e-9);
    CHECK(out.plan.size() <= 3);
  }
  const auto center = solver(Belief::uniform(3));
  CHECK(center.net_value > vf(Belief::uniform(3)) + 0.1);
}
