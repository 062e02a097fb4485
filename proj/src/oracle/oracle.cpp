#include "exptest/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace exptest::oracle {

double brute_force_two_point_search(const std::function<double(double)>& f, double prior, int resolution) {
  std::vector<double> xs(resolution + 1);
  std::vector<double> fs(resolution + 1);
  for (int k = 0; k <= resolution; ++k) {
    xs[k] = static_cast<double>(k) / resolution;
    fs[k] = f(xs[k]);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a <= resolution; ++a) {
    if (xs[a] > prior) break;
    for (int b = a; b <= resolution; ++b) {
      if (xs[b] < prior) continue;
      double v;
      if (b == a) {
        v = fs[a];
      } else {
        const double t = (prior - xs[a]) / (xs[b] - xs[a]);
        v = (1.0 - t) * fs[a] + t * fs[b];
      }
      best = std::max(best, v);
    }
  }
  if (best == -std::numeric_limits<double>::infinity()) {
    // Prior between grid points with no bracketing pair: impossible on [0, 1].
    throw std::invalid_argument("prior outside [0, 1]");
  }
  return best;
}

MaximinSolution lp_maximin(const std::vector<std::vector<double>>& payoff) {
  const std::size_t m = payoff.size();
  if (m == 0) throw std::invalid_argument("empty payoff matrix");
  const std::size_t n = payoff.front().size();

  // Shift so every entry is >= 1; the game value shifts by the same amount.
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& row : payoff) {
    if (row.size() != n) throw std::invalid_argument("ragged payoff matrix");
    for (double v : row) lowest = std::min(lowest, v);
  }
  const double shift = 1.0 - lowest;

  // Column player's LP: max sum y  s.t.  A y <= 1, y >= 0.
  // Tableau rows 0..m-1 are constraints, row m is the objective.
  // Columns 0..n-1 structural, n..n+m-1 slack, last is the right-hand side.
  const std::size_t width = n + m + 1;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(width, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = payoff[i][j] + shift;
    t[i][n + i] = 1.0;
    t[i][width - 1] = 1.0;
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -1.0;
  std::vector<std::size_t> basic(m);
  for (std::size_t i = 0; i < m; ++i) basic[i] = n + i;

  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (t[m][j] < -1e-13) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 1e-13) continue;
      const double ratio = t[i][width - 1] / t[i][enter];
      if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basic[i] < basic[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave == m) throw std::runtime_error("maximin LP unbounded");
    const double piv = t[leave][enter];
    for (double& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t[i][enter] == 0.0) continue;
      const double factor = t[i][enter];
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= factor * t[leave][j];
    }
    basic[leave] = enter;
  }

  // Optimum of the column LP is 1 / v'; the row player's weights are the
  // duals, read off the slack columns of the objective row.
  const double total = t[m][width - 1];
  MaximinSolution out;
  out.value = 1.0 / total - shift;
  out.strategy.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.strategy[i] = t[m][n + i] / total;
  return out;
}

ConvexityVerdict convexity_probe(const Potential& c, int resolution) {
  std::vector<double> values(resolution + 1);
  for (int k = 0; k <= resolution; ++k) {
    const double x = static_cast<double>(k) / resolution;
    values[k] = c(Belief({x, static_cast<double>(resolution - k) / resolution}));
  }
  ConvexityVerdict verdict{true, true};
  for (int k = 1; k < resolution; ++k) {
    const double chord = 0.5 * (values[k - 1] + values[k + 1]);
    if (values[k] > chord + 1e-9) verdict.convex = false;
    if (!(values[k] < chord - 1e-12)) verdict.strictly_convex = false;
  }
  verdict.strictly_convex = verdict.strictly_convex && verdict.convex;
  return verdict;
}

}  // namespace exptest::oracle
