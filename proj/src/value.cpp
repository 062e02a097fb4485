#include "exptest/value.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exptest/errors.hpp"

namespace exptest {

ValueFunction::ValueFunction(GeneralizedContract contract, Variant variant)
    : contract_(std::move(contract)), variant_(variant) {
  if (variant_ == Variant::UrnDraw && (contract_.size() != 3 || !contract_.equal_fines())) {
    throw InvalidArgument("the urn model has three states and a single fine");
  }
}

ValueFunction::ValueFunction(const Contract& contract, std::size_t n, Variant variant)
    : ValueFunction(GeneralizedContract(contract, n), variant) {}

ValueFunction ValueFunction::urn(const Contract& contract) {
  return ValueFunction(contract, 3, Variant::UrnDraw);
}

double ValueFunction::fine(std::size_t a, std::size_t state) const {
  if (variant_ == Variant::SimpleAnnouncement) return a == state ? contract_.fines[a] : 0.0;
  // States are ordered rr, rb, bb; announcement 0 is red, 1 is black.
  const double d = contract_.fines.front();
  if (state == 1) return d / 2.0;
  return (a == 0) == (state == 0) ? d : 0.0;
}

double ValueFunction::expected_fine(std::size_t a, const Belief& x) const {
  if (x.size() != states()) throw DimensionMismatch("belief dimension does not match the contract");
  if (variant_ == Variant::SimpleAnnouncement) return contract_.fines[a] * x[a];
  const double d = contract_.fines.front();
  return a == 0 ? d / 2.0 * (1.0 + x[0] - x[2]) : d / 2.0 * (1.0 + x[2] - x[0]);
}

double ValueFunction::operator()(const Belief& x) const {
  return contract_.u - expected_fine(announce(*this, x), x);
}

ValueFunction ValueFunction::with_payment(double u) const {
  return ValueFunction(GeneralizedContract(u, contract_.fines), variant_);
}

double gross_value(const ValueFunction& vf, const Belief& x) { return vf(x); }

std::size_t announce(const ValueFunction& vf, const Belief& x) {
  std::size_t best = 0;
  double best_fine = vf.expected_fine(0, x);
  for (std::size_t a = 1; a < vf.announcements(); ++a) {
    const double f = vf.expected_fine(a, x);
    if (f < best_fine) {
      best_fine = f;
      best = a;
    }
  }
  return best;
}

double learning_objective(const ValueFunction& vf, const PosteriorSeparable& model, const Belief& x) {
  const double c = model.potential(x);
  if (!std::isfinite(c)) throw InfinitePotential("potential is infinite on the envelope grid");
  return vf(x) - model.kappa * c;
}

int default_envelope_resolution(std::size_t n) {
  if (n <= 2) return 1000;
  if (n == 3) return 200;
  return 20;
}

InformedSolver::InformedSolver(ValueFunction vf, CostModel model, EnvelopeOptions options)
    : vf_(std::move(vf)),
      model_(std::move(model)),
      resolution_(options.resolution > 0 ? options.resolution : default_envelope_resolution(vf_.states())) {
  validate(model_);
  if (const auto* menu = std::get_if<FixedMenu>(&model_)) {
    for (const auto& item : menu->items) {
      if (item.experiment.states() != vf_.states()) throw DimensionMismatch("menu experiment has wrong state count");
    }
  }
}

InformedSolver::~InformedSolver() = default;
InformedSolver::InformedSolver(InformedSolver&&) noexcept = default;
InformedSolver& InformedSolver::operator=(InformedSolver&&) noexcept = default;

InformedOutcome InformedSolver::operator()(const Belief& mu) {
  if (mu.size() != vf_.states()) throw DimensionMismatch("prior dimension does not match the contract");
  if (const auto* menu = std::get_if<FixedMenu>(&model_)) return menu_value(*menu, mu);
  return separable_value(std::get<PosteriorSeparable>(model_), mu);
}

InformedOutcome InformedSolver::menu_value(const FixedMenu& menu, const Belief& mu) const {
  InformedOutcome best{vf_(mu), PosteriorDistribution::degenerate(mu), 0.0, std::nullopt};
  for (std::size_t k = 0; k < menu.items.size(); ++k) {
    const auto& e = menu.items[k].experiment;
    // Sum over signals of u * P(s) - min_a E[fine | joint], with no division.
    double expected_fine = 0.0;
    std::vector<double> joint(mu.size());
    for (std::size_t s = 0; s < e.signals(); ++s) {
      for (std::size_t i = 0; i < mu.size(); ++i) joint[i] = mu[i] * e.likelihood(i, s);
      double fine = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < vf_.announcements(); ++a) {
        double acc = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) acc += vf_.fine(a, i) * joint[i];
        fine = std::min(fine, acc);
      }
      expected_fine += fine;
    }
    const double net = vf_.payment() - expected_fine - menu.items[k].price;
    if (net > best.net_value) {
      best = {net, induced_posterior_distribution(e, mu), menu.items[k].price, k};
    }
  }
  return best;
}

InformedOutcome InformedSolver::separable_value(const PosteriorSeparable& model, const Belief& mu) {
  if (!envelope_) {
    auto grid = simplex_grid(vf_.states(), resolution_);
    std::vector<double> values;
    values.reserve(grid.size());
    for (const auto& x : grid) values.push_back(learning_objective(vf_, model, x));
    envelope_ = std::make_unique<GridEnvelope>(std::move(grid), std::move(values));
  }
  const double at_prior = model.kappa * model.potential(mu);
  // Staying put is always feasible even when mu is off the grid.
  const double stay = learning_objective(vf_, model, mu);
  auto cav = envelope_->evaluate(mu);
  if (stay >= cav.value) return {stay + at_prior, PosteriorDistribution::degenerate(mu), 0.0, std::nullopt};
  const double cost = distribution_cost(model, cav.plan);
  return {cav.value + at_prior, std::move(cav.plan), cost, std::nullopt};
}

InformedOutcome informed_value(const ValueFunction& vf, const CostModel& model, const Belief& mu,
                               EnvelopeOptions options) {
  InformedSolver solver(vf, model, options);
  return solver(mu);
}

}  // namespace exptest
