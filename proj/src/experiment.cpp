#include "exptest/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "exptest/errors.hpp"

namespace exptest {

namespace {

void check_stochastic_row(const std::vector<double>& row, std::size_t width) {
  if (row.size() != width) throw DimensionMismatch("ragged likelihood matrix");
  double total = 0.0;
  for (double p : row) {
    if (!std::isfinite(p) || p < 0.0) throw InvalidArgument("likelihood entries must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > kExactTol) throw InvalidArgument("likelihood row does not sum to one");
}

void check_dimension(const Experiment& e, const Belief& mu) {
  if (e.states() != mu.size()) {
    throw DimensionMismatch("experiment has " + std::to_string(e.states()) + " states, belief has " +
                            std::to_string(mu.size()));
  }
}

}  // namespace

Experiment::Experiment(std::vector<std::vector<double>> likelihoods, std::vector<std::string> signals)
    : likelihoods_(std::move(likelihoods)), labels_(std::move(signals)) {
  if (likelihoods_.size() < 2) throw InvalidArgument("experiment needs at least two states");
  const std::size_t width = likelihoods_.front().size();
  if (width == 0) throw InvalidArgument("experiment needs at least one signal");
  for (const auto& row : likelihoods_) check_stochastic_row(row, width);
  if (labels_.empty()) {
    for (std::size_t s = 0; s < width; ++s) labels_.push_back("s" + std::to_string(s));
  } else if (labels_.size() != width) {
    throw DimensionMismatch("signal labels do not match likelihood columns");
  }
}

Experiment Experiment::null(std::size_t n) {
  return Experiment(std::vector<std::vector<double>>(n, std::vector<double>{1.0}), {"null"});
}

Experiment Experiment::fully_informative(std::size_t n) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
  return Experiment(std::move(rows));
}

Experiment Experiment::symmetric_binary(double accuracy) {
  return Experiment({{accuracy, 1.0 - accuracy}, {1.0 - accuracy, accuracy}}, {"h", "l"});
}

std::vector<double> signal_marginal(const Experiment& e, const Belief& mu) {
  check_dimension(e, mu);
  std::vector<double> marginal(e.signals(), 0.0);
  for (std::size_t i = 0; i < e.states(); ++i) {
    for (std::size_t s = 0; s < e.signals(); ++s) marginal[s] += mu[i] * e.likelihood(i, s);
  }
  return marginal;
}

Belief posterior(const Experiment& e, const Belief& mu, std::size_t signal) {
  const auto marginal = signal_marginal(e, mu);
  if (signal >= marginal.size()) throw InvalidArgument("signal index out of range");
  if (!(marginal[signal] > 0.0)) {
    throw ZeroProbabilitySignal("signal " + e.labels()[signal] + " has zero probability");
  }
  std::vector<double> probs(e.states());
  for (std::size_t i = 0; i < e.states(); ++i) probs[i] = mu[i] * e.likelihood(i, signal) / marginal[signal];
  return Belief(std::move(probs));
}

PosteriorDistribution induced_posterior_distribution(const Experiment& e, const Belief& mu) {
  const auto marginal = signal_marginal(e, mu);
  std::vector<Belief> support;
  std::vector<double> weights;
  for (std::size_t s = 0; s < marginal.size(); ++s) {
    if (!(marginal[s] > 0.0)) continue;
    support.push_back(posterior(e, mu, s));
    weights.push_back(marginal[s]);
  }
  return PosteriorDistribution(std::move(support), std::move(weights), mu);
}

double upsilon(const Experiment& e, const Belief& mu) {
  check_dimension(e, mu);
  double expected_min = 0.0;
  for (std::size_t s = 0; s < e.signals(); ++s) {
    double joint_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < e.states(); ++i) joint_min = std::min(joint_min, mu[i] * e.likelihood(i, s));
    expected_min += joint_min;
  }
  return min_prob(mu) - expected_min;
}

double upsilon(const PosteriorDistribution& f) {
  double expected_min = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) expected_min += f.weights()[j] * min_prob(f.support()[j]);
  return min_prob(f.prior()) - expected_min;
}

bool is_delta_valuable(const Experiment& e, const Belief& mu, double delta) {
  if (delta < 0.0) throw InvalidArgument("delta must be >= 0");
  return upsilon(e, mu) > delta;
}

Experiment garble(const Experiment& e, const std::vector<std::vector<double>>& kernel) {
  if (kernel.size() != e.signals()) throw DimensionMismatch("garbling kernel rows must match signals");
  const std::size_t out = kernel.front().size();
  for (const auto& row : kernel) check_stochastic_row(row, out);
  std::vector<std::vector<double>> rows(e.states(), std::vector<double>(out, 0.0));
  for (std::size_t i = 0; i < e.states(); ++i) {
    for (std::size_t s = 0; s < e.signals(); ++s) {
      for (std::size_t t = 0; t < out; ++t) rows[i][t] += e.likelihood(i, s) * kernel[s][t];
    }
  }
  // Rounding can push a row sum a hair past the validation tolerance for
  // long kernels; renormalize.
  for (auto& row : rows) {
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    for (double& p : row) p /= total;
  }
  return Experiment(std::move(rows));
}

}  // namespace exptest
