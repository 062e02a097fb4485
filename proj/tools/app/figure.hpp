#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "search.hpp"
#include "exptest/screening.hpp"

namespace exptest::app {

/// Value curve of one prior on the two-state grid, with its concave envelope
/// and the concavifying chord through the optimal posteriors.
struct PriorTrace {
  double prior;
  std::vector<double> x;
  std::vector<double> gross;      // u - d min{x, 1 - x}
  std::vector<double> objective;  // gross - kappa c(x)
  std::vector<double> value;      // objective + kappa c(prior)
  std::vector<double> envelope;   // concave envelope of value
  std::vector<double> chord;      // NaN outside the support interval
  bool degenerate;
  double support_low;
  double support_high;
  double weight_low;
  double weight_high;
  double informed_value;
};

struct FigureSearch {
  Contract contract;
  double fine_to_kappa;
  PaymentWindow window;
};

struct FigureData {
  PosteriorSeparable model;
  Contract contract;
  int resolution;
  std::optional<FigureSearch> search;
  std::vector<PriorTrace> traces;
  ScreeningReport report;  // full-grid verification of the contract
};

/// Largest fine (on a log lattice in d / kappa) at which the outermost
/// priors do not learn and the innermost does, then the payment midway
/// through the screening window. Throws NoFeasibleU when nothing fits.
FigureSearch search_figure_contract(const PosteriorSeparable& model, const std::vector<double>& priors,
                                    int resolution);

FigureData compute_figure(const FigureConfig& config);

std::string traces_csv(const FigureData& data);
std::string support_csv(const FigureData& data);
std::string figure_svg(const FigureData& data);
std::string figure_summary(const FigureData& data);

}  // namespace exptest::app
