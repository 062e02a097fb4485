#include "exptest/screening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "exptest/experiment.hpp"

namespace exptest {

MixedStrategy uninformed_maximin(const GeneralizedContract& contract) {
  const std::size_t n = contract.size();
  if (contract.equal_fines()) {
    return {contract.u - contract.fines.front() / static_cast<double>(n),
            std::vector<double>(n, 1.0 / static_cast<double>(n))};
  }
  double harmonic = 0.0;
  for (double d : contract.fines) harmonic += 1.0 / d;
  std::vector<double> strategy;
  strategy.reserve(n);
  for (double d : contract.fines) strategy.push_back(1.0 / d / harmonic);
  return {contract.u - 1.0 / harmonic, std::move(strategy)};
}

MixedStrategy uninformed_maximin(const ValueFunction& vf) {
  if (vf.variant() == Variant::UrnDraw) {
    // Mass on rb costs d/2 whatever is announced, so no mixture beats d/2.
    return {vf.payment() - vf.contract().fines.front() / 2.0, {0.5, 0.5}};
  }
  return uninformed_maximin(vf.contract());
}

double seu_uninformed_value(const ValueFunction& vf, const Belief& rho) { return gross_value(vf, rho); }

double seu_uninformed_value(const GeneralizedContract& contract, const Belief& rho) {
  return seu_uninformed_value(ValueFunction(contract), rho);
}

ScreeningReport screens(const ValueFunction& vf, const CostModel& model, std::span<const Belief> prior_grid,
                        const UninformedKind& uninformed, const ScreeningOptions& options) {
  if (prior_grid.empty()) throw EmptyGrid("screening needs at least one prior");
  InformedSolver solver(vf, model, options.envelope);

  double worst = std::numeric_limits<double>::infinity();
  std::size_t worst_at = 0;
  std::vector<PriorRow> rows;
  for (std::size_t k = 0; k < prior_grid.size(); ++k) {
    const auto outcome = solver(prior_grid[k]);
    if (outcome.net_value < worst) {
      worst = outcome.net_value;
      worst_at = k;
    }
    if (options.keep_rows) {
      rows.push_back({prior_grid[k], vf(prior_grid[k]), outcome.net_value, outcome.learning_cost, outcome.plan.size()});
    }
  }

  double uninformed_value = 0.0;
  std::vector<double> strategy;
  std::string kind;
  if (uninformed.rho) {
    uninformed_value = seu_uninformed_value(vf, *uninformed.rho);
    strategy.assign(vf.announcements(), 0.0);
    strategy[announce(vf, *uninformed.rho)] = 1.0;
    kind = "seu";
  } else {
    auto mm = uninformed_maximin(vf);
    uninformed_value = mm.value;
    strategy = std::move(mm.strategy);
    kind = "maximin";
  }

  PriorSetDescriptor prior_set = options.prior_set;
  prior_set.count = prior_grid.size();

  const bool accepts = worst >= -kAcceptSlack;
  const bool rejects = uninformed_value < -kAcceptSlack;
  return ScreeningReport{vf.contract(),
                         vf.variant(),
                         describe(model),
                         worst,
                         prior_grid[worst_at],
                         std::move(kind),
                         uninformed_value,
                         std::move(strategy),
                         accepts,
                         rejects,
                         accepts && rejects,
                         std::move(prior_set),
                         solver.resolution(),
                         std::move(rows)};
}

namespace {

struct ProbeAtPrior {
  double upsilon;
  double cost;
};

// Best (upsilon, cost) a model offers at mu. Menus: the most valuable listed
// experiment. Posterior-separable: the plan that is optimal under a unit fine.
class ValuabilityProbe {
 public:
  ValuabilityProbe(const CostModel& model, std::size_t n, const ProbeOptions& options)
      : model_(model), n_(n), fine_(options.probe_fine) {
    if (const auto* ps = std::get_if<PosteriorSeparable>(&model_)) {
      solver_.emplace(ValueFunction(Contract(1.0, fine_), n_), *ps, options.envelope);
    }
  }

  ProbeAtPrior operator()(const Belief& mu) {
    if (const auto* menu = std::get_if<FixedMenu>(&model_)) {
      ProbeAtPrior best{0.0, 0.0};
      for (const auto& item : menu->items) {
        const double v = upsilon(item.experiment, mu);
        if (v > best.upsilon || (v == best.upsilon && item.price < best.cost)) best = {v, item.price};
      }
      return best;
    }
    const auto outcome = (*solver_)(mu);
    return {upsilon(outcome.plan), outcome.learning_cost};
  }

  // Cheapest certificate of epsilon-valuability with cost <= bound at mu, if
  // any. Posterior-separable models may also fully reveal the state.
  bool certifies(const Belief& mu, double epsilon, double bound) {
    if (const auto* menu = std::get_if<FixedMenu>(&model_)) {
      return std::any_of(menu->items.begin(), menu->items.end(), [&](const MenuItem& item) {
        return upsilon(item.experiment, mu) > epsilon && item.price <= bound;
      });
    }
    const auto probe = (*this)(mu);
    if (probe.upsilon > epsilon && probe.cost <= bound) return true;
    const auto& ps = std::get<PosteriorSeparable>(model_);
    const auto reveal = induced_posterior_distribution(Experiment::fully_informative(n_), mu);
    return upsilon(reveal) > epsilon && distribution_cost(ps, reveal) <= bound;
  }

 private:
  const CostModel& model_;
  std::size_t n_;
  double fine_;
  std::optional<InformedSolver> solver_;
};

}  // namespace

std::optional<AssumptionBounds> assumption_probe(const CostModel& model, std::size_t n, double eta, int resolution,
                                                 const ProbeOptions& options) {
  validate(model);
  const Belief center = options.center.value_or(Belief::uniform(n));
  if (center.size() != n) throw DimensionMismatch("probe center has the wrong dimension");
  const auto ball = ball_grid(center, eta, resolution, options.norm);

  ValuabilityProbe probe(model, n, options);
  double min_upsilon = std::numeric_limits<double>::infinity();
  double max_cost = 0.0;
  for (const auto& mu : ball) {
    const auto at = probe(mu);
    if (!(at.upsilon > 0.0)) return std::nullopt;
    min_upsilon = std::min(min_upsilon, at.upsilon);
    max_cost = std::max(max_cost, at.cost);
  }
  return AssumptionBounds{(1.0 - options.slack) * min_upsilon, eta, max_cost};
}

ScreeningConstruction construct_screening_contract(const CostModel& model, const AssumptionBounds& assumption,
                                                   std::size_t n, const ConstructOptions& options) {
  validate(model);
  if (!(assumption.epsilon > 0.0) || !(assumption.eta > 0.0) || assumption.cost_bound < 0.0) {
    throw InvalidArgument("assumption bounds need epsilon > 0, eta > 0, T >= 0");
  }
  const int resolution = options.resolution > 0 ? options.resolution : default_envelope_resolution(n);
  const Belief center = Belief::uniform(n);
  const auto grid = simplex_grid(n, resolution);

  ProbeOptions probe_options;
  probe_options.norm = options.norm;
  probe_options.probe_fine = options.probe_fine;
  probe_options.envelope = options.envelope;
  ValuabilityProbe probe(model, n, probe_options);

  std::vector<char> in_ball(grid.size(), 0);
  double q_out = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    in_ball[k] = distance(grid[k], center, options.norm) <= assumption.eta;
    if (!in_ball[k]) q_out = std::max(q_out, min_prob(grid[k]));
  }
  const auto ball = ball_grid(center, assumption.eta, resolution, options.norm);
  for (const auto& mu : ball) {
    if (!probe.certifies(mu, assumption.epsilon, assumption.cost_bound)) {
      throw AssumptionViolated(fmt::format("no experiment with upsilon > {} and cost <= {} at prior ({})",
                                           assumption.epsilon, assumption.cost_bound,
                                           format_vector(mu.probs())));
    }
  }

  // Any d works when learning is free.
  const double d = assumption.cost_bound > 0.0 ? (1.0 + options.margin) * assumption.cost_bound / assumption.epsilon
                                               : 1.0;
  const double hi = d / static_cast<double>(n);
  const double lo = std::max(0.0, d * q_out);

  // Net values are u plus a u-free term, so one sweep at a reference payment
  // answers every acceptance query in the bisection.
  InformedSolver solver(ValueFunction(Contract(hi, d), n), model, options.envelope);
  double shift = std::numeric_limits<double>::infinity();
  for (const auto& mu : grid) shift = std::min(shift, solver(mu).net_value - hi);
  auto accepts = [&](double u) { return u + shift >= 0.0; };

  double threshold = lo;
  if (!accepts(lo)) {
    if (!accepts(hi)) {
      throw NoFeasibleU(fmt::format("no payment in ({}, {}) makes every informed type accept at d = {}", lo, hi, d));
    }
    double a = lo;
    double b = hi;
    for (int iter = 0; iter < 200 && b - a > 1e-15 * hi; ++iter) {
      const double mid = 0.5 * (a + b);
      (accepts(mid) ? b : a) = mid;
    }
    threshold = b;
  }
  if (!(threshold < hi)) throw NoFeasibleU(fmt::format("acceptance threshold {} reaches d/n = {}", threshold, hi));
  const double u = 0.5 * (threshold + hi);
  const Contract contract(u, d);

  ScreeningOptions screen_options;
  screen_options.envelope = options.envelope;
  screen_options.prior_set = {"simplex", resolution, grid.size(), std::nullopt, std::nullopt, options.norm};
  auto report = screens(ValueFunction(contract, n), model, grid, UninformedKind::maximin(), screen_options);
  if (!report.screens) {
    throw NoFeasibleU(fmt::format("constructed contract (u={}, d={}) failed verification", u, d));
  }
  InformedSolver check(ValueFunction(contract, n), model, options.envelope);
  for (const auto& mu : ball) {
    if (!(check(mu).net_value > 0.0)) throw NoFeasibleU("informed net value is not strictly positive on the ball");
  }
  return {contract, q_out, threshold, std::move(report)};
}

GeneralizedContract prop2_contract(const Belief& rho, double d_n, double u) {
  const std::size_t n = rho.size();
  for (double p : rho.probs()) {
    if (!(p > 0.0)) throw BoundaryPrior("prior must be interior: every coordinate > 0");
  }
  if (!(d_n > 0.0)) throw InvalidArgument("d_n must be > 0");
  std::vector<double> fines(n);
  for (std::size_t i = 0; i + 1 < n; ++i) fines[i] = rho[n - 1] / rho[i] * d_n;
  fines[n - 1] = d_n;
  return GeneralizedContract(u, std::move(fines));
}

std::vector<Belief> sample_simplex(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<Belief> out;
  out.reserve(count);
  std::vector<double> draw(n);
  for (std::size_t k = 0; k < count; ++k) {
    double total = 0.0;
    for (double& v : draw) {
      v = expo(rng);
      total += v;
    }
    for (double& v : draw) v /= total;
    out.emplace_back(draw);
  }
  return out;
}

namespace {

MeasureEstimate binomial_estimate(std::size_t hits, std::size_t samples) {
  const double p = samples == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(samples);
  const double half = samples == 0 ? 1.0 : kConfidenceZ * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  return {p, half, samples};
}

}  // namespace

MeasureEstimate rejection_measure(const ValueFunction& vf, std::span<const Belief> samples) {
  std::size_t hits = 0;
  for (const auto& rho : samples) hits += seu_uninformed_value(vf, rho) < 0.0;
  return binomial_estimate(hits, samples.size());
}

XiScreenResult xi_screen_search(const PosteriorSeparable& model, std::size_t n, double xi,
                                const XiScreenOptions& options) {
  if (!(xi > 0.0) || xi > 1.0) throw InvalidArgument("xi must lie in (0, 1]");
  validate(CostModel(model));
  const int resolution = options.resolution > 0 ? options.resolution : default_envelope_resolution(n);
  const auto grid = simplex_grid(n, resolution);
  const auto samples = sample_simplex(n, options.samples, options.seed);

  // With equal fines the SEU expert rejects iff min_i rho_i > u / d.
  std::vector<double> mins;
  mins.reserve(samples.size());
  for (const auto& rho : samples) mins.push_back(min_prob(rho));
  std::sort(mins.begin(), mins.end());
  auto rejecting = [&](double ratio) {
    return static_cast<std::size_t>(mins.end() - std::upper_bound(mins.begin(), mins.end(), ratio));
  };
  const double required = 1.0 - xi;

  std::optional<XiScreenResult> best;
  const int fine_lo = static_cast<int>(std::floor(std::log10(options.min_fine) * options.fine_steps_per_decade));
  const int fine_hi = static_cast<int>(std::ceil(std::log10(options.max_fine) * options.fine_steps_per_decade));
  for (int k = fine_lo; k <= fine_hi; ++k) {
    const double d = std::pow(10.0, static_cast<double>(k) / options.fine_steps_per_decade);
    // Largest lattice payment below d/n whose rejection set is big enough.
    std::optional<double> payment;
    int j = static_cast<int>(std::floor(std::log10(d / static_cast<double>(n)) * options.payment_steps_per_decade));
    for (int steps = 0; steps < 40 * options.payment_steps_per_decade; ++steps, --j) {
      const double u = std::pow(10.0, static_cast<double>(j) / options.payment_steps_per_decade);
      if (u >= d / static_cast<double>(n)) continue;
      const auto frac = static_cast<double>(rejecting(u / d)) / static_cast<double>(samples.size());
      if (frac >= required) {
        payment = u;
        break;
      }
    }
    if (!payment) continue;

    InformedSolver solver(ValueFunction(Contract(*payment, d), n), CostModel(model), options.envelope);
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& mu : grid) worst = std::min(worst, solver(mu).net_value);
    const Contract contract(*payment, d);
    XiScreenResult result{contract, binomial_estimate(rejecting(*payment / d), samples.size()), worst, false};
    if (worst >= -kAcceptSlack) {
      result.found = true;
      return result;
    }
    if (!best || worst > best->informed_min_net_value) best = result;
  }
  if (!best) {
    throw SearchExhausted("no lattice contract meets the rejection requirement",
                          XiScreenResult{Contract(1.0, 1.0), {0.0, 1.0, samples.size()}, 0.0, false});
  }
  throw SearchExhausted("no lattice contract is accepted by every informed type", *best);
}

std::string format_number(double v) { return fmt::format("{}", v); }

std::string format_vector(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_number(v[i]);
  }
  return out;
}

namespace {

const char* norm_name(BallNorm norm) { return norm == BallNorm::Euclidean ? "euclidean" : "sup"; }

}  // namespace

std::string to_key_value(const ScreeningReport& r) {
  std::ostringstream out;
  out << "contract.u=" << format_number(r.contract.u) << '\n';
  out << "contract.fines=" << format_vector(r.contract.fines) << '\n';
  out << "contract.variant=" << (r.variant == Variant::UrnDraw ? "urn" : "simple") << '\n';
  out << "model=" << r.model << '\n';
  out << "envelope.resolution=" << r.envelope_resolution << '\n';
  out << "prior_set.kind=" << r.prior_set.kind << '\n';
  out << "prior_set.resolution=" << r.prior_set.resolution << '\n';
  out << "prior_set.count=" << r.prior_set.count << '\n';
  if (r.prior_set.center) out << "prior_set.center=" << format_vector(r.prior_set.center->probs()) << '\n';
  if (r.prior_set.eta) out << "prior_set.eta=" << format_number(*r.prior_set.eta) << '\n';
  out << "prior_set.norm=" << norm_name(r.prior_set.norm) << '\n';
  out << "informed.min_net_value=" << format_number(r.informed_min_net_value) << '\n';
  out << "informed.argmin_prior=" << format_vector(r.informed_argmin_prior.probs()) << '\n';
  out << "informed.accepts=" << (r.informed_accepts ? "true" : "false") << '\n';
  out << "informed.accept_slack=" << format_number(kAcceptSlack) << '\n';
  out << "uninformed.kind=" << r.uninformed_kind << '\n';
  out << "uninformed.value=" << format_number(r.uninformed_value) << '\n';
  out << "uninformed.strategy=" << format_vector(r.uninformed_strategy) << '\n';
  out << "uninformed.rejects=" << (r.uninformed_rejects ? "true" : "false") << '\n';
  out << "screens=" << (r.screens ? "true" : "false") << '\n';
  return out.str();
}

std::string to_csv(const ScreeningReport& r) {
  std::ostringstream out;
  const std::size_t n = r.contract.size();
  for (std::size_t i = 0; i < n; ++i) out << "prior_" << i << ',';
  out << "gross_value,net_value,learning_cost,support_size\n";
  for (const auto& row : r.rows) {
    for (double p : row.prior.probs()) out << format_number(p) << ',';
    out << format_number(row.gross_value) << ',' << format_number(row.net_value) << ','
        << format_number(row.learning_cost) << ',' << row.support_size << '\n';
  }
  return out.str();
}

}  // namespace exptest
