#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "exptest/simplex.hpp"

namespace exptest {

/// Finite-signal statistical experiment: row i is the signal distribution
/// conditional on state i.
class Experiment {
 public:
  Experiment(std::vector<std::vector<double>> likelihoods, std::vector<std::string> signals = {});

  /// Every row equal to the one-point distribution: reveals nothing.
  static Experiment null(std::size_t n);
  /// Identity likelihoods: the signal reveals the state.
  static Experiment fully_informative(std::size_t n);
  /// Two states, two signals, P(h|H) = P(l|L) = accuracy.
  static Experiment symmetric_binary(double accuracy);

  std::size_t states() const { return likelihoods_.size(); }
  std::size_t signals() const { return labels_.size(); }
  double likelihood(std::size_t state, std::size_t signal) const { return likelihoods_[state][signal]; }
  const std::vector<std::vector<double>>& likelihoods() const { return likelihoods_; }
  const std::vector<std::string>& labels() const { return labels_; }

  bool operator==(const Experiment&) const = default;

 private:
  std::vector<std::vector<double>> likelihoods_;
  std::vector<std::string> labels_;
};

std::vector<double> signal_marginal(const Experiment& e, const Belief& mu);

/// Throws ZeroProbabilitySignal when the signal has zero marginal under mu.
Belief posterior(const Experiment& e, const Belief& mu, std::size_t signal);

/// Posteriors of the positive-probability signals, weighted by their marginals.
PosteriorDistribution induced_posterior_distribution(const Experiment& e, const Belief& mu);

/// Per-unit-fine benefit of learning from e at prior mu:
///   min_i mu_i - sum_s min_i mu_i P_i(s).
double upsilon(const Experiment& e, const Belief& mu);

/// The same benefit computed from an arbitrary Bayes-plausible distribution:
///   min_prob(prior) - sum_j w_j min_prob(x_j).
double upsilon(const PosteriorDistribution& f);

bool is_delta_valuable(const Experiment& e, const Belief& mu, double delta);

/// Post-processes the signals of e through a row-stochastic matrix.
Experiment garble(const Experiment& e, const std::vector<std::vector<double>>& kernel);

}  // namespace exptest
