#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "exptest/errors.hpp"
#include "exptest/oracle.hpp"
#include "exptest/screening.hpp"
#include "test_support.hpp"

using namespace exptest;

namespace {

const CostModel kExampleOneMenu = FixedMenu{{{Experiment::symmetric_binary(0.75), 50.0}}};
const CostModel kNullMenu = FixedMenu{};

std::vector<std::vector<double>> payoff_matrix(const ValueFunction& vf) {
  std::vector<std::vector<double>> m(vf.announcements(), std::vector<double>(vf.states()));
  for (std::size_t a = 0; a < vf.announcements(); ++a) {
    for (std::size_t s = 0; s < vf.states(); ++s) m[a][s] = vf.payment() - vf.fine(a, s);
  }
  return m;
}

}  // namespace

TEST_CASE("uninformed_maximin closed form") {
  const auto ex1 = uninformed_maximin(ValueFunction(Contract(250.0, 600.0), 2));
  CHECK(ex1.value == -50.0);
  CHECK(ex1.strategy == std::vector<double>{0.5, 0.5});

  for (std::size_t n : {2u, 3u, 5u}) {
    const double d = 7.0;
    CHECK(uninformed_maximin(ValueFunction(Contract(d / static_cast<double>(n), d), n)).value == 0.0);
  }

  const auto skew = uninformed_maximin(GeneralizedContract(1.0, {3.0, 1.0}));
  CHECK(skew.value == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(skew.strategy[0] == doctest::Approx(0.25));
  CHECK(skew.strategy[1] == doctest::Approx(0.75));
  CHECK(std::abs(oracle::lp_maximin(payoff_matrix(ValueFunction(GeneralizedContract(1.0, {3.0, 1.0})))).value - 0.25) <
        1e-12);

  const auto urn = ValueFunction::urn(Contract(3.0, 10.0));
  CHECK(uninformed_maximin(urn).value == -2.0);
  CHECK(std::abs(oracle::lp_maximin(payoff_matrix(urn)).value - (-2.0)) < 1e-9);
}

TEST_CASE("uninformed_maximin matches the LP on random contracts") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> fine(0.1, 50.0);
  std::uniform_int_distribution<int> dim(2, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = dim(rng);
    std::vector<double> fines(n);
    for (double& d : fines) d = fine(rng);
    const ValueFunction vf(GeneralizedContract(fine(rng), fines));
    const auto closed = uninformed_maximin(vf);
    const auto lp = oracle::lp_maximin(payoff_matrix(vf));
    CHECK(std::abs(closed.value - lp.value) <= 1e-9);
    // equalized expected fines
    for (std::size_t i = 0; i < n; ++i) CHECK(closed.strategy[i] * fines[i] == doctest::Approx(vf.payment() - closed.value));
  }
}

TEST_CASE("seu_uninformed_value") {
  CHECK(seu_uninformed_value(GeneralizedContract(Contract(4.0, 9.0), 3), Belief::uniform(3)) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(seu_uninformed_value(GeneralizedContract(1.0, {3.0, 1.0}), Belief({0.3, 0.7})) == doctest::Approx(0.3));

  const Belief rho({0.2, 0.3, 0.5});
  const auto gc = prop2_contract(rho, 10.0, 6.0);
  CHECK(seu_uninformed_value(gc, rho) == doctest::Approx(6.0 - 0.5 * 10.0).epsilon(1e-14));
}

TEST_CASE("prop2_contract") {
  const auto uniform = prop2_contract(Belief::uniform(4), 8.0, 1.0);
  for (double d : uniform.fines) CHECK(d == doctest::Approx(8.0).epsilon(1e-15));

  const auto two = prop2_contract(Belief({0.25, 0.75}), 100.0, 1.0);
  CHECK(two.fines[0] == 300.0);
  CHECK(two.fines[1] == 100.0);

  const Belief rho({0.2, 0.3, 0.5});
  const auto three = prop2_contract(rho, 10.0, 1.0);
  CHECK(three.fines[0] == doctest::Approx(25.0));
  CHECK(three.fines[1] == doctest::Approx(50.0 / 3.0));
  CHECK(three.fines[2] == 10.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(rho[i] * three.fines[i] - 5.0) < 1e-12);

  CHECK_THROWS_AS(prop2_contract(Belief({0.0, 1.0}), 1.0, 1.0), BoundaryPrior);
}

TEST_CASE("screens: the two-state single-experiment contract") {
  const auto grid = simplex_grid(2, 1000);
  const auto report = screens(ValueFunction(Contract(250.0, 600.0), 2), kExampleOneMenu, grid);
  CHECK(report.screens);
  CHECK(report.informed_min_net_value == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(report.uninformed_value == -50.0);
  CHECK(report.prior_set.count == 1001);
}

TEST_CASE("screens fails when u >= d/n or nothing can be learned") {
  const auto grid = simplex_grid(3, 30);
  const CostModel entropy = PosteriorSeparable{0.1, neg_entropy()};
  for (const CostModel& model : {kExampleOneMenu, entropy}) {
    if (std::holds_alternative<FixedMenu>(model)) continue;  // two-state menu
    CHECK_FALSE(screens(ValueFunction(Contract(5.0, 15.0), 3), model, grid).screens);
    CHECK_FALSE(screens(ValueFunction(Contract(6.0, 15.0), 3), model, grid).screens);
  }
  CHECK_FALSE(screens(ValueFunction(Contract(1e-6, 3.0), 3), kNullMenu, grid).screens);
  const auto report = screens(ValueFunction(Contract(1e-6, 3.0), 3), kNullMenu, grid);
  CHECK(report.informed_min_net_value == doctest::Approx(1e-6 - 1.0));
}

TEST_CASE("acceptance threshold u = d/n with nothing to learn") {
  for (std::size_t n : {2u, 3u, 4u}) {
    const int resolution = static_cast<int>(n) * 6;
    const auto grid = simplex_grid(n, resolution);
    const double d = 12.0;
    for (double offset : {-0.01, 0.0, 0.01}) {
      const double u = d / static_cast<double>(n) + offset * d;
      const auto report = screens(ValueFunction(Contract(u, d), n), kNullMenu, grid);
      CHECK(report.informed_accepts == (offset >= 0.0));
      CHECK(report.uninformed_value == u - d / static_cast<double>(n));
      CHECK_FALSE(report.screens);
    }
  }
}

TEST_CASE("acceptance is monotone in the payment") {
  const auto grid = simplex_grid(2, 200);
  const CostModel model = PosteriorSeparable{0.05, neg_entropy()};
  bool informed_before = false;
  bool uninformed_rejects_before = true;
  for (double u = 0.05; u < 0.7; u += 0.05) {
    const auto r = screens(ValueFunction(Contract(u, 1.0), 2), model, grid);
    if (informed_before) CHECK(r.informed_accepts);
    if (!uninformed_rejects_before) CHECK_FALSE(r.uninformed_rejects);
    informed_before = r.informed_accepts;
    uninformed_rejects_before = r.uninformed_rejects;
  }
}

TEST_CASE("relabelling states leaves every value unchanged") {
  std::mt19937_64 rng(31);
  const std::vector<std::vector<double>> rows = exptest::testing::random_stochastic(rng, 3, 4);
  const std::vector<std::size_t> perm = {2, 0, 1};
  std::vector<std::vector<double>> permuted(3);
  for (std::size_t i = 0; i < 3; ++i) permuted[i] = rows[perm[i]];
  const std::vector<double> fines = {2.0, 5.0, 3.0};
  std::vector<double> pfines(3);
  for (std::size_t i = 0; i < 3; ++i) pfines[i] = fines[perm[i]];

  const ValueFunction vf(GeneralizedContract(1.0, fines));
  const ValueFunction pvf(GeneralizedContract(1.0, pfines));
  const CostModel menu = FixedMenu{{{Experiment(rows), 0.1}}};
  const CostModel pmenu = FixedMenu{{{Experiment(permuted), 0.1}}};
  const CostModel entropy = PosteriorSeparable{0.05, neg_entropy()};

  CHECK(uninformed_maximin(vf).value == doctest::Approx(uninformed_maximin(pvf).value).epsilon(1e-14));
  InformedSolver a(vf, entropy, {30});
  InformedSolver b(pvf, entropy, {30});
  for (int k = 0; k < 20; ++k) {
    const auto mu = exptest::testing::random_belief(rng, 3);
    const Belief pmu({mu[perm[0]], mu[perm[1]], mu[perm[2]]});
    CHECK(informed_value(vf, menu, mu).net_value ==
          doctest::Approx(informed_value(pvf, pmenu, pmu).net_value).epsilon(1e-12));
    CHECK(std::abs(a(mu).net_value - b(pmu).net_value) <= 1e-6);
  }
}

TEST_CASE("assumption_probe") {
  // upsilon = min(mu, 1 - mu) - 1/4 on [1/4, 3/4]; worst ball prior is 0.430
  const auto ex1 = assumption_probe(kExampleOneMenu, 2, 0.1, 1000);
  REQUIRE(ex1.has_value());
  CHECK(ex1->epsilon == doctest::Approx(0.99 * (0.430 - 0.25)).epsilon(1e-12));
  CHECK(ex1->cost_bound == 50.0);

  CHECK_FALSE(assumption_probe(kNullMenu, 2, 0.1, 1000).has_value());

  const CostModel reveal = FixedMenu{{{Experiment::fully_informative(2), 3.0}}};
  const auto full = assumption_probe(reveal, 2, 0.1, 1000);
  REQUIRE(full.has_value());
  CHECK(std::abs(full->epsilon - 0.99 * (0.5 - 0.1 / std::sqrt(2.0))) <= 0.99e-3);
  CHECK(full->cost_bound == 3.0);
}

TEST_CASE("construct_screening_contract") {
  SUBCASE("single experiment menu") {
    // upsilon at mu = 0.43 is 0.18 < 0.2: a ball of radius 0.1 is too wide
    CHECK_THROWS_AS(construct_screening_contract(kExampleOneMenu, {0.2, 0.1, 50.0}, 2), AssumptionViolated);

    const auto built = construct_screening_contract(kExampleOneMenu, {0.2, 0.05, 50.0}, 2);
    CHECK(built.contract.d > 250.0);
    CHECK(built.contract.u > built.contract.d * built.outside_min_prob);
    CHECK(built.contract.u < built.contract.d / 2.0);
    CHECK(built.report.screens);
  }
  SUBCASE("nothing to learn") {
    CHECK_THROWS_AS(construct_screening_contract(kNullMenu, {0.1, 0.05, 1.0}, 2), AssumptionViolated);
  }
  SUBCASE("entropy cost end to end") {
    const CostModel model = PosteriorSeparable{0.1, neg_entropy()};
    const auto bounds = assumption_probe(model, 2, 0.05, 1000);
    REQUIRE(bounds.has_value());
    const auto built = construct_screening_contract(model, *bounds, 2);
    const auto check = screens(ValueFunction(built.contract, 2), model, simplex_grid(2, 1000));
    CHECK(check.screens);
    CHECK(built.payment_threshold < built.contract.u);
  }
}

TEST_CASE("xi_screen_search") {
  const PosteriorSeparable model{0.01, neg_entropy()};
  XiScreenOptions options;
  options.samples = 20000;
  const auto half = xi_screen_search(model, 2, 0.5, options);
  CHECK(half.found);
  CHECK(half.contract.u / half.contract.d <= 0.25);
  CHECK(half.measure.fraction >= 0.5);
  CHECK(half.informed_min_net_value >= -kAcceptSlack);
  // measure{rho : min rho > u/d} = 1 - 2u/d
  CHECK(std::abs(half.measure.fraction - (1.0 - 2.0 * half.contract.u / half.contract.d)) <= half.measure.half_width);

  options.samples = 100000;
  const auto tenth = xi_screen_search(model, 2, 0.1, options);
  CHECK(tenth.found);
  CHECK(tenth.contract.u / tenth.contract.d <= 0.05);
  // full revelation at the uniform prior costs kappa ln 2
  CHECK(tenth.contract.u > 0.01 * std::log(2.0));
  CHECK(tenth.measure.half_width < 0.01);
  CHECK(tenth.measure.fraction >= 0.9 - tenth.measure.half_width);

  options.samples = 20000;
  const auto all = xi_screen_search(model, 2, 1.0, options);
  CHECK(all.found);

  CHECK_THROWS_AS(xi_screen_search(model, 2, 0.0, options), InvalidArgument);

  options.max_fine = 1e-2;
  CHECK_THROWS_AS(xi_screen_search(model, 2, 0.1, options), SearchExhausted);
}

TEST_CASE("report rendering") {
  ScreeningOptions options;
  options.keep_rows = true;
  options.prior_set.kind = "simplex";
  options.prior_set.resolution = 4;
  const auto report = screens(ValueFunction(Contract(250.0, 600.0), 2), kExampleOneMenu, simplex_grid(2, 4),
                              UninformedKind::maximin(), options);
  const auto text = to_key_value(report);
  CHECK(text.find("screens=true\n") != std::string::npos);
  CHECK(text.find("uninformed.value=-50\n") != std::string::npos);
  CHECK(text.find("prior_set.count=5\n") != std::string::npos);
  const auto csv = to_csv(report);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  CHECK(csv.rfind("prior_0,prior_1,gross_value", 0) == 0);
}
