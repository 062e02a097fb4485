#include "exptest/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "exptest/errors.hpp"

namespace exptest {

namespace {

constexpr double kPivotTol = 1e-12;
constexpr double kWeightTol = 1e-12;
constexpr std::size_t kBlandAfter = 500;

// Weights within kWeightTol of zero are dropped; the rest renormalized.
Concavification make_result(std::vector<Belief> support, std::vector<double> weights,
                            const std::vector<double>& values, const Belief& mu) {
  std::vector<Belief> kept;
  std::vector<double> kept_w;
  double value = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < support.size(); ++j) {
    if (weights[j] <= kWeightTol) continue;
    kept.push_back(std::move(support[j]));
    kept_w.push_back(weights[j]);
    total += weights[j];
  }
  std::size_t k = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j] <= kWeightTol) continue;
    kept_w[k] /= total;
    value += kept_w[k] * values[j];
    ++k;
  }
  return {value, PosteriorDistribution(std::move(kept), std::move(kept_w), mu)};
}

}  // namespace

// ---------------------------------------------------------------------------
// LineEnvelope

LineEnvelope::LineEnvelope(std::vector<Belief> points, std::vector<double> values)
    : points_(std::move(points)), values_(std::move(values)) {
  if (points_.empty()) throw EmptyGrid("envelope grid is empty");
  if (points_.size() != values_.size()) throw DimensionMismatch("grid and values differ in length");
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (points_[k].size() != 2) throw DimensionMismatch("line envelope needs two-state beliefs");
    if (k > 0 && points_[k][0] < points_[k - 1][0]) throw InvalidArgument("line envelope grid is not sorted");
    if (!std::isfinite(values_[k])) throw InvalidArgument("envelope objective is not finite");
  }

  auto x = [&](std::size_t k) { return points_[k][0]; };
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (!hull_.empty() && x(hull_.back()) == x(k)) {
      if (values_[k] <= values_[hull_.back()]) continue;
      hull_.pop_back();
    }
    while (hull_.size() >= 2) {
      const std::size_t a = hull_[hull_.size() - 2];
      const std::size_t b = hull_.back();
      const double cross = (x(b) - x(a)) * (values_[k] - values_[a]) - (values_[b] - values_[a]) * (x(k) - x(a));
      if (cross < 0.0) break;
      hull_.pop_back();
    }
    hull_.push_back(k);
  }
}

std::size_t LineEnvelope::segment(double x) const {
  const double lo = points_[hull_.front()][0];
  const double hi = points_[hull_.back()][0];
  if (x < lo - kNegativeSlack || x > hi + kNegativeSlack) {
    throw InfeasibleBarycenter("prior " + std::to_string(x) + " lies outside the grid");
  }
  if (hull_.size() == 1) return 0;
  // Last hull vertex with coordinate <= x, capped so that k + 1 is valid.
  auto it = std::upper_bound(hull_.begin(), hull_.end(), x,
                             [&](double v, std::size_t idx) { return v < points_[idx][0]; });
  std::size_t k = it == hull_.begin() ? 0 : static_cast<std::size_t>(it - hull_.begin()) - 1;
  return std::min(k, hull_.size() - 2);
}

double LineEnvelope::value(double x) const {
  const std::size_t k = segment(x);
  if (hull_.size() == 1) return values_[hull_.front()];
  const std::size_t a = hull_[k];
  const std::size_t b = hull_[k + 1];
  const double xa = points_[a][0];
  const double xb = points_[b][0];
  const double wb = std::clamp((x - xa) / (xb - xa), 0.0, 1.0);
  return (1.0 - wb) * values_[a] + wb * values_[b];
}

Concavification LineEnvelope::evaluate(const Belief& mu) const {
  if (mu.size() != 2) throw DimensionMismatch("line envelope evaluated at a non two-state prior");
  const double x = mu[0];
  const std::size_t k = segment(x);
  const std::size_t a = hull_[k];
  if (hull_.size() == 1 || x <= points_[a][0]) {
    return {values_[a], PosteriorDistribution({points_[a]}, {1.0}, mu)};
  }
  const std::size_t b = hull_[k + 1];
  const double xa = points_[a][0];
  const double xb = points_[b][0];
  if (x >= xb) return {values_[b], PosteriorDistribution({points_[b]}, {1.0}, mu)};
  const double wb = (x - xa) / (xb - xa);
  return make_result({points_[a], points_[b]}, {1.0 - wb, wb}, {values_[a], values_[b]}, mu);
}

// ---------------------------------------------------------------------------
// SimplexEnvelope

SimplexEnvelope::SimplexEnvelope(std::vector<Belief> points, std::vector<double> values)
    : dim_(points.empty() ? 0 : points.front().size()), points_(std::move(points)) {
  if (points_.empty()) throw EmptyGrid("envelope grid is empty");
  if (points_.size() != values.size()) throw DimensionMismatch("grid and values differ in length");

  double fmin = std::numeric_limits<double>::infinity();
  double fmax = -std::numeric_limits<double>::infinity();
  columns_.reserve(points_.size() + dim_);
  for (std::size_t j = 0; j < points_.size(); ++j) {
    if (points_[j].size() != dim_) throw DimensionMismatch("grid beliefs differ in dimension");
    if (!std::isfinite(values[j])) throw InvalidArgument("envelope objective is not finite");
    columns_.push_back({std::vector<double>(points_[j].probs().begin(), points_[j].probs().end()), values[j], false});
    fmin = std::min(fmin, values[j]);
    fmax = std::max(fmax, values[j]);
  }
  const double scale = 1.0 + std::max(std::abs(fmin), std::abs(fmax));
  tol_ = 1e-12 * scale;

  // Start from the vertices: B = I is primal feasible for every prior.
  // Missing vertices get a heavily penalized artificial column.
  const double penalty = fmin - 1e7 * (fmax - fmin + 1.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    std::size_t found = columns_.size();
    for (std::size_t j = 0; j < points_.size(); ++j) {
      if (points_[j][i] == 1.0) {
        found = j;
        break;
      }
    }
    if (found == columns_.size()) {
      std::vector<double> e(dim_, 0.0);
      e[i] = 1.0;
      columns_.push_back({std::move(e), penalty, true});
    }
    basis_.push_back(found);
  }
  refactor();
}

void SimplexEnvelope::refactor() {
  const std::size_t n = dim_;
  // Gauss-Jordan on [B | I].
  std::vector<std::vector<double>> a(n, std::vector<double>(2 * n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) a[i][k] = columns_[basis_[k]].x[i];
    a[i][n + i] = 1.0;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-14) throw Error("envelope LP basis became singular");
    std::swap(a[c], a[piv]);
    const double inv = 1.0 / a[c][c];
    for (double& v : a[c]) v *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0.0) continue;
      const double factor = a[r][c];
      for (std::size_t k = 0; k < 2 * n; ++k) a[r][k] -= factor * a[c][k];
    }
  }
  inverse_.assign(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) inverse_[i][k] = a[i][n + k];
  }
  duals_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) duals_[i] += inverse_[k][i] * columns_[basis_[k]].f;
  }
}

std::vector<double> SimplexEnvelope::basic_weights(const Belief& mu) const {
  std::vector<double> p(dim_, 0.0);
  for (std::size_t k = 0; k < dim_; ++k) {
    for (std::size_t i = 0; i < dim_; ++i) p[k] += inverse_[k][i] * mu[i];
  }
  return p;
}

double SimplexEnvelope::reduced_cost(std::size_t j) const {
  const auto& col = columns_[j];
  double acc = -col.f;
  for (std::size_t i = 0; i < dim_; ++i) acc += duals_[i] * col.x[i];
  return acc;
}

void SimplexEnvelope::pivot(std::size_t row, std::size_t entering) {
  basis_[row] = entering;
  ++pivots_;
  refactor();
}

bool SimplexEnvelope::dual_simplex(const Belief& mu) {
  std::vector<char> in_basis(columns_.size(), 0);
  const std::size_t cap = 50 * columns_.size() + 1000;
  for (std::size_t iter = 0; iter < cap; ++iter) {
    const auto p = basic_weights(mu);
    const std::size_t row = static_cast<std::size_t>(std::min_element(p.begin(), p.end()) - p.begin());
    if (p[row] >= -kWeightTol) return true;

    std::fill(in_basis.begin(), in_basis.end(), 0);
    for (std::size_t b : basis_) in_basis[b] = 1;
    const auto& rho = inverse_[row];
    std::size_t entering = columns_.size();
    double best_ratio = std::numeric_limits<double>::infinity();
    double best_alpha = 0.0;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      if (in_basis[j]) continue;
      double alpha = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) alpha += rho[i] * columns_[j].x[i];
      if (alpha >= -kPivotTol) continue;
      const double ratio = std::max(reduced_cost(j), 0.0) / -alpha;
      if (ratio < best_ratio - tol_ || (ratio <= best_ratio + tol_ && -alpha > best_alpha)) {
        best_ratio = std::min(ratio, best_ratio);
        best_alpha = -alpha;
        entering = j;
      }
    }
    if (entering == columns_.size()) return false;
    pivot(row, entering);
  }
  return false;
}

void SimplexEnvelope::primal_simplex(const Belief& mu) {
  std::vector<char> in_basis(columns_.size(), 0);
  for (std::size_t iter = 0;; ++iter) {
    const bool bland = iter > kBlandAfter;
    std::fill(in_basis.begin(), in_basis.end(), 0);
    for (std::size_t b : basis_) in_basis[b] = 1;

    std::size_t entering = columns_.size();
    double most_negative = -tol_;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      if (in_basis[j]) continue;
      const double d = reduced_cost(j);
      if (d < most_negative) {
        entering = j;
        if (bland) break;
        most_negative = d;
      }
    }
    if (entering == columns_.size()) return;

    const auto p = basic_weights(mu);
    std::vector<double> alpha(dim_, 0.0);
    for (std::size_t k = 0; k < dim_; ++k) {
      for (std::size_t i = 0; i < dim_; ++i) alpha[k] += inverse_[k][i] * columns_[entering].x[i];
    }
    std::size_t row = dim_;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < dim_; ++k) {
      if (alpha[k] <= kPivotTol) continue;
      const double ratio = std::max(p[k], 0.0) / alpha[k];
      const bool better = bland ? ratio < best - kWeightTol ||
                                      (ratio <= best + kWeightTol && row < dim_ && basis_[k] < basis_[row])
                                : ratio < best - kWeightTol ||
                                      (ratio <= best + kWeightTol && row < dim_ && alpha[k] > alpha[row]);
      if (row == dim_ || better) {
        if (row == dim_ || ratio < best) best = ratio;
        row = k;
      }
    }
    if (row == dim_) throw Error("envelope LP is unbounded");
    pivot(row, entering);
  }
}

Concavification SimplexEnvelope::evaluate(const Belief& mu) {
  if (mu.size() != dim_) throw DimensionMismatch("prior dimension does not match the envelope grid");

  const std::size_t before = pivots_;
  bool clean_up = pivots_ == 0;
  if (!dual_simplex(mu)) {
    clean_up = true;
    // Numerical trouble or an infeasible prior: restart from the vertex basis.
    basis_.clear();
    for (std::size_t i = 0; i < dim_; ++i) {
      std::size_t found = columns_.size();
      for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (columns_[j].x[i] == 1.0) {
          found = j;
          break;
        }
      }
      basis_.push_back(found);
    }
    refactor();
  }
  if (clean_up || pivots_ != before) primal_simplex(mu);

  const auto p = basic_weights(mu);
  std::vector<Belief> support;
  std::vector<double> weights;
  std::vector<double> values;
  for (std::size_t k = 0; k < dim_; ++k) {
    const auto& col = columns_[basis_[k]];
    if (col.artificial) {
      if (p[k] > kExactTol) throw InfeasibleBarycenter("prior lies outside the convex hull of the grid");
      continue;
    }
    support.push_back(points_[basis_[k]]);
    weights.push_back(std::max(p[k], 0.0));
    values.push_back(col.f);
  }
  return make_result(std::move(support), std::move(weights), values, mu);
}

// ---------------------------------------------------------------------------

GridEnvelope::GridEnvelope(std::vector<Belief> points, std::vector<double> values)
    : impl_(points.empty() || points.front().size() != 2
                ? std::variant<LineEnvelope, SimplexEnvelope>(
                      std::in_place_type<SimplexEnvelope>, std::move(points), std::move(values))
                : std::variant<LineEnvelope, SimplexEnvelope>(
                      std::in_place_type<LineEnvelope>, std::move(points), std::move(values))) {}

Concavification GridEnvelope::evaluate(const Belief& mu) {
  return std::visit([&](auto& env) { return env.evaluate(mu); }, impl_);
}

namespace {

// When mu is itself a grid point already attaining the envelope, report the
// degenerate plan: no split is needed.
Concavification prefer_staying(Concavification cav, std::span<const Belief> points, std::span<const double> values,
                               const Belief& mu) {
  const double scale = 1.0 + std::abs(cav.value);
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (distance(points[j], mu, BallNorm::Sup) > kNegativeSlack) continue;
    if (values[j] >= cav.value - 1e-12 * scale) return {values[j], PosteriorDistribution({points[j]}, {1.0}, mu)};
  }
  return cav;
}

}  // namespace

Concavification concavify_1d(std::span<const double> xs, std::span<const double> fs, double mu) {
  if (xs.empty()) throw EmptyGrid("envelope grid is empty");
  if (xs.size() != fs.size()) throw DimensionMismatch("grid and values differ in length");
  if (mu < -kNegativeSlack || mu > 1.0 + kNegativeSlack) throw InvalidArgument("prior outside [0, 1]");
  std::vector<Belief> points;
  points.reserve(xs.size());
  for (double x : xs) points.push_back(Belief({x, 1.0 - x}));
  const Belief prior({mu, 1.0 - mu});
  LineEnvelope env(points, std::vector<double>(fs.begin(), fs.end()));
  return prefer_staying(env.evaluate(prior), points, fs, prior);
}

Concavification concavify_lp(std::span<const Belief> points, std::span<const double> values, const Belief& mu) {
  SimplexEnvelope env(std::vector<Belief>(points.begin(), points.end()),
                      std::vector<double>(values.begin(), values.end()));
  return prefer_staying(env.evaluate(mu), points, values, mu);
}

}  // namespace exptest
