#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "exptest/simplex.hpp"

namespace exptest {

/// Value of the upper concave envelope at a prior, with a Bayes-plausible
/// distribution over grid points that attains it.
struct Concavification {
  double value;
  PosteriorDistribution plan;
};

/// Upper concave envelope of samples on the two-state simplex, built once by
/// an upper-hull scan over the first coordinate.
class LineEnvelope {
 public:
  /// points must be two-state beliefs sorted by first coordinate.
  LineEnvelope(std::vector<Belief> points, std::vector<double> values);

  Concavification evaluate(const Belief& mu) const;
  double value(double x) const;

  /// Indices (into the input points) of the hull vertices, left to right.
  const std::vector<std::size_t>& hull() const { return hull_; }

 private:
  std::size_t segment(double x) const;

  std::vector<Belief> points_;
  std::vector<double> values_;
  std::vector<std::size_t> hull_;
};

/// Upper concave envelope on an arbitrary simplex grid, evaluated by solving
///
///   max sum_j p_j f(x_j)  s.t.  sum_j p_j x_j = mu,  p >= 0
///
/// with a revised simplex method over the n equality rows. The optimal basis
/// is kept between queries: reduced costs do not depend on mu, so the last
/// basis is dual feasible for the next prior and a few dual simplex pivots
/// usually restore optimality. Not safe for concurrent evaluate() calls.
class SimplexEnvelope {
 public:
  SimplexEnvelope(std::vector<Belief> points, std::vector<double> values);

  /// Throws InfeasibleBarycenter when mu is outside the hull of the grid.
  Concavification evaluate(const Belief& mu);

  std::size_t pivots() const { return pivots_; }

 private:
  struct Column {
    std::vector<double> x;
    double f;
    bool artificial;
  };

  void refactor();
  std::vector<double> basic_weights(const Belief& mu) const;
  double reduced_cost(std::size_t j) const;
  void pivot(std::size_t row, std::size_t entering);
  bool dual_simplex(const Belief& mu);
  void primal_simplex(const Belief& mu);

  std::size_t dim_;
  std::vector<Belief> points_;
  std::vector<Column> columns_;
  std::vector<std::size_t> basis_;
  std::vector<std::vector<double>> inverse_;  // basis inverse, row-major
  std::vector<double> duals_;
  double tol_;
  std::size_t pivots_ = 0;
};

/// Envelope over a full simplex grid: hull scan for two states, LP otherwise.
class GridEnvelope {
 public:
  GridEnvelope(std::vector<Belief> points, std::vector<double> values);
  Concavification evaluate(const Belief& mu);

 private:
  std::variant<LineEnvelope, SimplexEnvelope> impl_;
};

/// One-shot upper concave envelope of (xs, fs) on [0, 1] evaluated at mu.
/// Support points are returned as two-state beliefs (x, 1 - x).
Concavification concavify_1d(std::span<const double> xs, std::span<const double> fs, double mu);

/// One-shot LP envelope over arbitrary grid points.
Concavification concavify_lp(std::span<const Belief> points, std::span<const double> values, const Belief& mu);

}  // namespace exptest
