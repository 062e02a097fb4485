#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "exptest/experiment.hpp"
#include "exptest/simplex.hpp"

namespace exptest {

/// Convex potential c on the closed simplex. May return +infinity.
struct Potential {
  std::string name;
  std::function<double(const Belief&)> eval;

  double operator()(const Belief& x) const { return eval(x); }
};

/// c(x) = sum_i x_i ln x_i with 0 ln 0 = 0.
Potential neg_entropy();
/// c(x) = sum_i x_i^2.
Potential quadratic();
/// c(x) + offset; leaves every posterior-separable cost unchanged.
Potential shifted(Potential base, double offset);

struct MenuItem {
  Experiment experiment;
  double price;
};

/// A list of purchasable experiments. The null experiment is always available
/// at price zero and is not listed.
struct FixedMenu {
  std::vector<MenuItem> items;
};

/// Gamma(F) = kappa * E_F[c(x)] - kappa * c(prior).
struct PosteriorSeparable {
  double kappa;
  Potential potential;
};

using CostModel = std::variant<FixedMenu, PosteriorSeparable>;

/// Validates prices, experiments, and kappa. Throws InvalidArgument.
void validate(const CostModel& model);

bool is_uninformative(const Experiment& e);

/// Cost of running e at prior mu; +infinity when e is not on the menu.
double experiment_cost(const CostModel& model, const Experiment& e, const Belief& mu);

double distribution_cost(const PosteriorSeparable& model, const PosteriorDistribution& f);

std::string describe(const CostModel& model);

}  // namespace exptest
