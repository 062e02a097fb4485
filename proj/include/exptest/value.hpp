#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "exptest/cost.hpp"
#include "exptest/envelope.hpp"
#include "exptest/simplex.hpp"

namespace exptest {

enum class Variant {
  /// The expert names one state; the fine for that state is charged if it
  /// realizes.
  SimpleAnnouncement,
  /// Three states {rr, rb, bb} of a two-ball urn. The expert names a colour
  /// (red, black) that will not be drawn; one ball is drawn uniformly.
  UrnDraw,
};

/// Gross (cost-free) payoff of accepting a contract as a function of the
/// expert's belief: u minus the smallest expected fine over announcements.
class ValueFunction {
 public:
  ValueFunction(GeneralizedContract contract, Variant variant = Variant::SimpleAnnouncement);
  ValueFunction(const Contract& contract, std::size_t n, Variant variant = Variant::SimpleAnnouncement);

  static ValueFunction urn(const Contract& contract);

  double operator()(const Belief& x) const;

  std::size_t states() const { return contract_.size(); }
  std::size_t announcements() const { return variant_ == Variant::UrnDraw ? 2 : contract_.size(); }
  /// Fine charged for announcement a when the state is `state`.
  double fine(std::size_t a, std::size_t state) const;
  double expected_fine(std::size_t a, const Belief& x) const;

  double payment() const { return contract_.u; }
  const GeneralizedContract& contract() const { return contract_; }
  Variant variant() const { return variant_; }

  ValueFunction with_payment(double u) const;

 private:
  GeneralizedContract contract_;
  Variant variant_;
};

double gross_value(const ValueFunction& vf, const Belief& x);

/// Optimal announcement at x; ties go to the lowest index.
std::size_t announce(const ValueFunction& vf, const Belief& x);

/// gross_value(x) - kappa * c(x): the objective whose envelope is the
/// posterior-separable learner's value (up to the constant kappa * c(prior)).
double learning_objective(const ValueFunction& vf, const PosteriorSeparable& model, const Belief& x);

struct EnvelopeOptions {
  /// Grid resolution for posterior-separable envelopes; 0 picks the default
  /// for the state count (see default_envelope_resolution).
  int resolution = 0;
};

int default_envelope_resolution(std::size_t n);

struct InformedOutcome {
  double net_value;
  PosteriorDistribution plan;
  double learning_cost;
  /// Index into FixedMenu::items of the purchased experiment, if any.
  std::optional<std::size_t> menu_choice;
};

/// Informed expert's value of accepting, net of optimal learning costs.
///
/// Keeps the envelope of the learning objective between calls, so sweeping
/// many priors costs one envelope build. Not safe for concurrent calls.
class InformedSolver {
 public:
  InformedSolver(ValueFunction vf, CostModel model, EnvelopeOptions options = {});
  ~InformedSolver();
  InformedSolver(InformedSolver&&) noexcept;
  InformedSolver& operator=(InformedSolver&&) noexcept;

  InformedOutcome operator()(const Belief& mu);

  const ValueFunction& value_function() const { return vf_; }
  const CostModel& model() const { return model_; }
  int resolution() const { return resolution_; }

 private:
  InformedOutcome menu_value(const FixedMenu& menu, const Belief& mu) const;
  InformedOutcome separable_value(const PosteriorSeparable& model, const Belief& mu);

  ValueFunction vf_;
  CostModel model_;
  int resolution_;
  std::unique_ptr<GridEnvelope> envelope_;
};

InformedOutcome informed_value(const ValueFunction& vf, const CostModel& model, const Belief& mu,
                               EnvelopeOptions options = {});

}  // namespace exptest
