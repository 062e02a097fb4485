#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exptest/cost.hpp"
#include "exptest/errors.hpp"
#include "exptest/simplex.hpp"
#include "exptest/value.hpp"

namespace exptest {

/// Informed acceptance is "net value >= -kAcceptSlack"; the uninformed
/// expert rejects only when his value is below -kAcceptSlack, so values
/// within the slack of zero count as indifference, and indifference as
/// acceptance.
inline constexpr double kAcceptSlack = 1e-9;

struct MixedStrategy {
  double value;
  std::vector<double> strategy;
};

/// Maximin value of an expert who cannot learn and evaluates a mixed
/// announcement by its worst state. Fine-equalizing closed form.
MixedStrategy uninformed_maximin(const ValueFunction& vf);
MixedStrategy uninformed_maximin(const GeneralizedContract& contract);

/// Subjective expected-utility expert with prior rho who cannot learn: the
/// best pure announcement at rho.
double seu_uninformed_value(const ValueFunction& vf, const Belief& rho);
double seu_uninformed_value(const GeneralizedContract& contract, const Belief& rho);

struct UninformedKind {
  static UninformedKind maximin() { return {}; }
  static UninformedKind seu(Belief rho) { return {std::move(rho)}; }

  /// Empty for the maximin expert.
  std::optional<Belief> rho;
};

/// Describes the prior set a report was computed on.
struct PriorSetDescriptor {
  std::string kind = "list";  // simplex | ball | list
  int resolution = 0;
  std::size_t count = 0;
  std::optional<Belief> center;
  std::optional<double> eta;
  BallNorm norm = BallNorm::Euclidean;
};

struct PriorRow {
  Belief prior;
  double gross_value;
  double net_value;
  double learning_cost;
  std::size_t support_size;
};

struct ScreeningReport {
  GeneralizedContract contract;
  Variant variant;
  std::string model;
  double informed_min_net_value;
  Belief informed_argmin_prior;
  std::string uninformed_kind;
  double uninformed_value;
  std::vector<double> uninformed_strategy;
  bool informed_accepts;
  bool uninformed_rejects;
  bool screens;
  PriorSetDescriptor prior_set;
  int envelope_resolution;
  std::vector<PriorRow> rows;
};

struct ScreeningOptions {
  EnvelopeOptions envelope;
  PriorSetDescriptor prior_set;
  bool keep_rows = false;
};

/// Sweeps the informed expert over the prior grid and compares with the
/// uninformed expert. screens = informed accepts everywhere and the
/// uninformed expert strictly prefers to reject.
ScreeningReport screens(const ValueFunction& vf, const CostModel& model, std::span<const Belief> prior_grid,
                        const UninformedKind& uninformed = UninformedKind::maximin(),
                        const ScreeningOptions& options = {});

/// Epsilon/eta/T triple: on the ball of radius eta some affordable
/// (cost <= T) experiment is epsilon-valuable.
struct AssumptionBounds {
  double epsilon;
  double eta;
  double cost_bound;
};

struct ProbeOptions {
  std::optional<Belief> center;  // defaults to the uniform prior
  BallNorm norm = BallNorm::Euclidean;
  double slack = 0.01;
  /// Unit fine used to derive optimal learning plans for posterior-separable
  /// models.
  double probe_fine = 1.0;
  EnvelopeOptions envelope;
};

/// Empty when some ball prior has no valuable experiment.
std::optional<AssumptionBounds> assumption_probe(const CostModel& model, std::size_t n, double eta, int resolution,
                                                 const ProbeOptions& options = {});

struct ConstructOptions {
  int resolution = 0;  // prior grid; 0 picks the envelope default for n
  double margin = 0.05;
  BallNorm norm = BallNorm::Euclidean;
  double probe_fine = 1.0;
  EnvelopeOptions envelope;
};

struct ScreeningConstruction {
  Contract contract;
  double outside_min_prob;   // q_out
  double payment_threshold;  // smallest u at which every informed type accepts
  ScreeningReport report;
};

/// Builds a screening contract: d = (1 + margin) T / epsilon, then u by
/// bisection on (max(0, d q_out), d / n). The returned contract has been
/// verified with screens() on the full prior grid.
///
/// Throws AssumptionViolated when some ball prior has no epsilon-valuable
/// experiment of cost <= T, and NoFeasibleU when no u in the interval works.
ScreeningConstruction construct_screening_contract(const CostModel& model, const AssumptionBounds& assumption,
                                                   std::size_t n, const ConstructOptions& options = {});

/// Fines d_i = (rho_n / rho_i) d_n, equalizing rho_i d_i across states.
/// Throws BoundaryPrior when rho is not interior.
GeneralizedContract prop2_contract(const Belief& rho, double d_n, double u);

/// Monte Carlo estimate of the Lebesgue measure of a prior set.
struct MeasureEstimate {
  double fraction;
  double half_width;  // binomial, 99% normal approximation
  std::size_t samples;
};

inline constexpr double kConfidenceZ = 2.5758293035489;

/// Uniform (Dirichlet(1, ..., 1)) samples from the simplex.
std::vector<Belief> sample_simplex(std::size_t n, std::size_t count, std::uint64_t seed);

/// Fraction of priors at which an SEU expert who cannot learn rejects.
MeasureEstimate rejection_measure(const ValueFunction& vf, std::span<const Belief> samples);

struct XiScreenOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 20240531;
  int resolution = 0;  // informed verification grid; 0 picks the default
  EnvelopeOptions envelope;
  int fine_steps_per_decade = 4;
  int payment_steps_per_decade = 16;
  double min_fine = 1e-3;
  double max_fine = 1e6;
};

struct XiScreenResult {
  Contract contract;
  MeasureEstimate measure;
  double informed_min_net_value;
  bool found;
};

class SearchExhausted : public Error {
 public:
  SearchExhausted(const std::string& what, XiScreenResult best) : Error(what), best_(std::move(best)) {}
  const XiScreenResult& best() const { return best_; }

 private:
  XiScreenResult best_;
};

/// Searches a logarithmic (u, d) lattice for a contract that every informed
/// type accepts while the SEU uninformed expert rejects on at least 1 - xi of
/// the simplex.
XiScreenResult xi_screen_search(const PosteriorSeparable& model, std::size_t n, double xi,
                                const XiScreenOptions& options = {});

/// Machine-parseable key=value rendering.
std::string to_key_value(const ScreeningReport& report);
/// One CSV row per prior (requires keep_rows).
std::string to_csv(const ScreeningReport& report);

std::string format_vector(std::span<const double> v);
std::string format_number(double v);

}  // namespace exptest
