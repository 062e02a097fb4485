#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace exptest {

// Tolerances shared across the library. Closed-form arithmetic is checked at
// kExactTol; anything that went through a grid is compared at kGridTol.
inline constexpr double kExactTol = 1e-9;
inline constexpr double kGridTol = 1e-6;
inline constexpr double kNegativeSlack = 1e-12;

/// A probability vector over the n >= 2 states. All n coordinates are stored.
///
/// Construction validates the simplex invariants; entries in
/// [-kNegativeSlack, 0) are clamped to zero.
class Belief {
 public:
  explicit Belief(std::vector<double> probs);

  /// Builds a belief from its first n-1 coordinates; the last one is
  /// 1 - sum of the others.
  static Belief from_free(std::span<const double> head);

  /// Lattice point k / resolution. Exact for symmetric grids.
  static Belief from_counts(std::span<const int> counts, int resolution);

  static Belief uniform(std::size_t n);
  static Belief vertex(std::size_t n, std::size_t i);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  bool operator==(const Belief&) const = default;

 private:
  std::vector<double> probs_;
};

double min_prob(const Belief& b);

enum class BallNorm { Euclidean, Sup };

double distance(const Belief& a, const Belief& b, BallNorm norm = BallNorm::Euclidean);

/// Lump-sum payment u and a single fine d charged when the announced
/// state realizes.
struct Contract {
  Contract(double u, double d);
  double u;
  double d;
};

/// One payment and a fine per state.
struct GeneralizedContract {
  GeneralizedContract(double u, std::vector<double> fines);
  explicit GeneralizedContract(const Contract& c, std::size_t n);

  double u;
  std::vector<double> fines;

  std::size_t size() const { return fines.size(); }
  bool equal_fines() const;
};

/// Finitely supported, Bayes-plausible distribution over posteriors.
class PosteriorDistribution {
 public:
  /// Validates weights and Bayes plausibility (kExactTol per coordinate).
  PosteriorDistribution(std::vector<Belief> support, std::vector<double> weights, Belief prior);

  static PosteriorDistribution degenerate(const Belief& prior);

  const std::vector<Belief>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  const Belief& prior() const { return prior_; }
  std::size_t size() const { return support_.size(); }
  /// True when every posterior with positive weight equals the prior.
  bool is_degenerate() const;

 private:
  std::vector<Belief> support_;
  std::vector<double> weights_;
  Belief prior_;
};

/// Weighted mean of the support. Throws EmptySupport when there is none.
std::vector<double> barycenter(std::span<const Belief> support, std::span<const double> weights);
Belief barycenter(const PosteriorDistribution& f);

/// Every belief whose coordinates are multiples of 1/resolution, ordered
/// lexicographically by coordinate count (first coordinate ascending).
std::vector<Belief> simplex_grid(std::size_t n, int resolution);

/// Number of points simplex_grid(n, resolution) returns.
std::size_t simplex_grid_size(std::size_t n, int resolution);

/// Grid points within eta of center. Never empty: falls back to the grid
/// point nearest to the center.
std::vector<Belief> ball_grid(const Belief& center, double eta, int resolution,
                              BallNorm norm = BallNorm::Euclidean);

}  // namespace exptest
