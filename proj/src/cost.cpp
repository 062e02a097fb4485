#include "exptest/cost.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "exptest/errors.hpp"

namespace exptest {

Potential neg_entropy() {
  return {"neg_entropy", [](const Belief& x) {
            double acc = 0.0;
            for (double p : x.probs()) {
              if (p > 0.0) acc += p * std::log(p);
            }
            return acc;
          }};
}

Potential quadratic() {
  return {"quadratic", [](const Belief& x) {
            double acc = 0.0;
            for (double p : x.probs()) acc += p * p;
            return acc;
          }};
}

Potential shifted(Potential base, double offset) {
  auto name = base.name + "+" + std::to_string(offset);
  return {std::move(name), [base = std::move(base), offset](const Belief& x) { return base(x) + offset; }};
}

void validate(const CostModel& model) {
  if (const auto* menu = std::get_if<FixedMenu>(&model)) {
    for (const auto& item : menu->items) {
      if (!(item.price >= 0.0)) throw InvalidArgument("menu prices must be >= 0");
    }
    return;
  }
  const auto& ps = std::get<PosteriorSeparable>(model);
  if (!(ps.kappa > 0.0) || !std::isfinite(ps.kappa)) throw InvalidArgument("kappa must be > 0");
  if (!ps.potential.eval) throw InvalidArgument("posterior-separable model has no potential");
}

bool is_uninformative(const Experiment& e) {
  const auto& rows = e.likelihoods();
  for (const auto& row : rows) {
    for (std::size_t s = 0; s < row.size(); ++s) {
      if (std::abs(row[s] - rows.front()[s]) > kExactTol) return false;
    }
  }
  return true;
}

double experiment_cost(const CostModel& model, const Experiment& e, const Belief& mu) {
  if (e.states() != mu.size()) throw DimensionMismatch("experiment and prior differ in dimension");
  if (const auto* menu = std::get_if<FixedMenu>(&model)) {
    if (is_uninformative(e)) return 0.0;
    for (const auto& item : menu->items) {
      if (item.experiment.likelihoods() == e.likelihoods()) return item.price;
    }
    return std::numeric_limits<double>::infinity();
  }
  return distribution_cost(std::get<PosteriorSeparable>(model), induced_posterior_distribution(e, mu));
}

double distribution_cost(const PosteriorSeparable& model, const PosteriorDistribution& f) {
  double expected = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (f.weights()[j] <= 0.0) continue;
    const double c = model.potential(f.support()[j]);
    if (!std::isfinite(c)) throw InfinitePotential("potential is infinite at a support point");
    expected += f.weights()[j] * c;
  }
  const double at_prior = model.potential(f.prior());
  if (!std::isfinite(at_prior)) throw InfinitePotential("potential is infinite at the prior");
  return model.kappa * expected - model.kappa * at_prior;
}

std::string describe(const CostModel& model) {
  std::ostringstream out;
  if (const auto* menu = std::get_if<FixedMenu>(&model)) {
    out << "fixed_menu(" << menu->items.size() << " experiments)";
  } else {
    const auto& ps = std::get<PosteriorSeparable>(model);
    out << "posterior_separable(kappa=" << ps.kappa << ", potential=" << ps.potential.name << ")";
  }
  return out.str();
}

}  // namespace exptest
