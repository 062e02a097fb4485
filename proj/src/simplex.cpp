#include "exptest/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "exptest/errors.hpp"

namespace exptest {

Belief::Belief(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw InvalidArgument("belief needs at least two states");
  }
  double total = 0.0;
  for (double& p : probs_) {
    if (!std::isfinite(p) || p < -kNegativeSlack) {
      throw InvalidArgument("belief coordinate out of range: " + std::to_string(p));
    }
    p = std::max(p, 0.0);
    total += p;
  }
  if (std::abs(total - 1.0) > kExactTol) {
    throw InvalidArgument("belief coordinates sum to " + std::to_string(total));
  }
}

Belief Belief::from_free(std::span<const double> head) {
  std::vector<double> probs(head.begin(), head.end());
  probs.push_back(1.0 - std::accumulate(head.begin(), head.end(), 0.0));
  return Belief(std::move(probs));
}

Belief Belief::from_counts(std::span<const int> counts, int resolution) {
  if (resolution <= 0) throw InvalidArgument("resolution must be positive");
  std::vector<double> probs;
  probs.reserve(counts.size());
  for (int k : counts) probs.push_back(static_cast<double>(k) / resolution);
  return Belief(std::move(probs));
}

Belief Belief::uniform(std::size_t n) {
  return Belief(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Belief Belief::vertex(std::size_t n, std::size_t i) {
  std::vector<double> probs(n, 0.0);
  probs.at(i) = 1.0;
  return Belief(std::move(probs));
}

double min_prob(const Belief& b) {
  return *std::min_element(b.probs().begin(), b.probs().end());
}

double distance(const Belief& a, const Belief& b, BallNorm norm) {
  if (a.size() != b.size()) throw DimensionMismatch("beliefs of different dimension");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = std::abs(a[i] - b[i]);
    acc = norm == BallNorm::Euclidean ? acc + diff * diff : std::max(acc, diff);
  }
  return norm == BallNorm::Euclidean ? std::sqrt(acc) : acc;
}

Contract::Contract(double u_, double d_) : u(u_), d(d_) {
  if (!(u > 0.0) || !(d > 0.0) || !std::isfinite(u) || !std::isfinite(d)) {
    throw InvalidArgument("contract requires u > 0 and d > 0");
  }
}

GeneralizedContract::GeneralizedContract(double u_, std::vector<double> fines_)
    : u(u_), fines(std::move(fines_)) {
  if (!(u > 0.0) || !std::isfinite(u)) throw InvalidArgument("contract requires u > 0");
  if (fines.size() < 2) throw InvalidArgument("generalized contract needs a fine per state");
  for (double d : fines) {
    if (!(d > 0.0) || !std::isfinite(d)) throw InvalidArgument("every fine must be > 0");
  }
}

GeneralizedContract::GeneralizedContract(const Contract& c, std::size_t n)
    : GeneralizedContract(c.u, std::vector<double>(n, c.d)) {}

bool GeneralizedContract::equal_fines() const {
  return std::all_of(fines.begin(), fines.end(), [&](double d) { return d == fines.front(); });
}

std::vector<double> barycenter(std::span<const Belief> support, std::span<const double> weights) {
  if (support.empty()) throw EmptySupport("posterior distribution has empty support");
  if (support.size() != weights.size()) throw DimensionMismatch("support and weights differ in length");
  std::vector<double> mean(support.front().size(), 0.0);
  for (std::size_t j = 0; j < support.size(); ++j) {
    if (support[j].size() != mean.size()) throw DimensionMismatch("support beliefs differ in dimension");
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += weights[j] * support[j][i];
  }
  return mean;
}

Belief barycenter(const PosteriorDistribution& f) {
  auto mean = barycenter(f.support(), f.weights());
  // Renormalize rounding drift so the result is a valid Belief.
  const double total = std::accumulate(mean.begin(), mean.end(), 0.0);
  for (double& m : mean) m /= total;
  return Belief(std::move(mean));
}

PosteriorDistribution::PosteriorDistribution(std::vector<Belief> support, std::vector<double> weights,
                                             Belief prior)
    : support_(std::move(support)), weights_(std::move(weights)), prior_(std::move(prior)) {
  const auto mean = barycenter(support_, weights_);
  double total = 0.0;
  for (double w : weights_) {
    if (w < -kNegativeSlack) throw InvalidArgument("negative posterior weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kExactTol) throw InvalidArgument("posterior weights do not sum to one");
  if (mean.size() != prior_.size()) throw DimensionMismatch("support and prior differ in dimension");
  for (std::size_t i = 0; i < mean.size(); ++i) {
    if (std::abs(mean[i] - prior_[i]) > kExactTol) {
      throw InvalidArgument("posterior distribution is not Bayes plausible");
    }
  }
}

PosteriorDistribution PosteriorDistribution::degenerate(const Belief& prior) {
  return PosteriorDistribution({prior}, {1.0}, prior);
}

bool PosteriorDistribution::is_degenerate() const {
  // every weighted posterior coincides with the prior
  for (std::size_t j = 0; j < support_.size(); ++j) {
    if (weights_[j] <= kExactTol) continue;
    for (std::size_t i = 0; i < prior_.size(); ++i) {
      if (std::abs(support_[j][i] - prior_[i]) > kExactTol) return false;
    }
  }
  return true;
}

std::size_t simplex_grid_size(std::size_t n, int resolution) {
  // C(resolution + n - 1, n - 1)
  double count = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    count = count * static_cast<double>(resolution + static_cast<int>(k)) / static_cast<double>(k);
  }
  return static_cast<std::size_t>(std::llround(count));
}

namespace {

void enumerate_compositions(std::vector<int>& counts, std::size_t pos, int remaining, int resolution,
                            std::vector<Belief>& out) {
  if (pos + 1 == counts.size()) {
    counts[pos] = remaining;
    out.push_back(Belief::from_counts(counts, resolution));
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    counts[pos] = k;
    enumerate_compositions(counts, pos + 1, remaining - k, resolution, out);
  }
}

}  // namespace

std::vector<Belief> simplex_grid(std::size_t n, int resolution) {
  if (n < 2) throw InvalidArgument("simplex grid needs n >= 2");
  if (resolution < 1) throw InvalidArgument("simplex grid needs resolution >= 1");
  std::vector<Belief> out;
  out.reserve(simplex_grid_size(n, resolution));
  std::vector<int> counts(n, 0);
  enumerate_compositions(counts, 0, resolution, resolution, out);
  return out;
}

std::vector<Belief> ball_grid(const Belief& center, double eta, int resolution, BallNorm norm) {
  if (!(eta > 0.0)) throw InvalidArgument("ball radius must be positive");
  auto grid = simplex_grid(center.size(), resolution);
  std::vector<Belief> inside;
  double best = std::numeric_limits<double>::infinity();
  std::size_t nearest = 0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double dist = distance(grid[j], center, norm);
    if (dist <= eta + kExactTol) inside.push_back(grid[j]);
    if (dist < best) {
      best = dist;
      nearest = j;
    }
  }
  if (inside.empty()) inside.push_back(grid[nearest]);
  return inside;
}

}  // namespace exptest
