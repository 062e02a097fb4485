#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "config.hpp"
#include "exptest/errors.hpp"
#include "exptest/screening.hpp"
#include "figure.hpp"
#include "search.hpp"

namespace exptest::app {

namespace {

constexpr double kExampleTolerance = 1e-9;
constexpr double kJustBelowDepth = 0.01;

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError(fmt::format("cannot write {}", path.string()));
  file << text;
}

std::string config_text(const RunOptions& options, const char* fallback) {
  if (options.config) return read_config_file(*options.config);
  if (fallback == nullptr) throw ConfigError("this command needs --config");
  return fallback;
}

void print_source(const RunOptions& options, std::ostream& out) {
  out << "config=" << (options.config ? options.config->string() : std::string("builtin")) << '\n';
}

const char* norm_name(BallNorm norm) { return norm == BallNorm::Sup ? "sup" : "euclidean"; }

}  // namespace

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const AssumptionViolated& e) {
    err << "assumption violated: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const NoFeasibleU& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const BoundaryPrior& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const SearchExhausted& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const Error& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitConfigError;
  }
}

int cmd_example_one(const RunOptions&, std::ostream& out, std::ostream& err) {
  const double u = 250.0;
  const double d = 600.0;
  const double price = 50.0;
  const ValueFunction vf(Contract(u, d), 2);
  const CostModel menu = FixedMenu{{{Experiment::symmetric_binary(0.75), price}}};
  bool ok = true;
  out << "contract.u=250\ncontract.d=600\nexperiment.accuracy=0.75\nexperiment.price=50\n";
  out << fmt::format("tolerance={}\n", format_number(kExampleTolerance));

  auto check = [&](const std::string& key, double got, double expected) {
    const bool pass = std::abs(got - expected) <= kExampleTolerance;
    ok = ok && pass;
    out << fmt::format("{}={} expected={} {}\n", key, format_number(got), format_number(expected),
                       pass ? "ok" : "MISMATCH");
  };

  // inside (1/3, 2/3) the experiment is bought and pays u - d/4 - price
  for (double mu : {0.35, 0.45, 0.5, 0.55, 0.65}) {
    const auto outcome = informed_value(vf, menu, Belief({mu, 1.0 - mu}));
    check(fmt::format("informed.learning[{}]", format_number(mu)), outcome.net_value, u - d / 4.0 - price);
    if (!outcome.menu_choice) {
      ok = false;
      out << fmt::format("informed.learning[{}].buys=false MISMATCH\n", format_number(mu));
    }
  }
  for (double mu : {0.1, 0.25, 1.0 / 3.0, 2.0 / 3.0, 0.9}) {
    const auto outcome = informed_value(vf, menu, Belief({mu, 1.0 - mu}));
    const double no_learning = u - d * std::min(mu, 1.0 - mu);
    check(fmt::format("informed.no_learning[{}]", format_number(mu)), outcome.net_value, no_learning);
    if (outcome.net_value < 50.0 - kExampleTolerance) {
      ok = false;
      out << fmt::format("informed.no_learning[{}].at_least_50=false MISMATCH\n", format_number(mu));
    }
  }
  const auto uninformed = uninformed_maximin(vf);
  check("uninformed.value", uninformed.value, -50.0);
  out << "uninformed.strategy=" << format_vector(uninformed.strategy) << '\n';
  out << "status=" << (ok ? "ok" : "mismatch") << '\n';
  if (!ok) err << "example-one: values deviate from the expected payoffs\n";
  return ok ? kExitOk : kExitMismatch;
}

int cmd_figure(const RunOptions& options, std::ostream& out, std::ostream&) {
  auto config = parse_figure_config(config_text(options, kDefaultFigureConfig));
  if (options.grid) config.resolution = *options.grid;
  if (options.format != "csv" && options.format != "svg" && options.format != "both") {
    throw ConfigError("--format must be csv, svg or both");
  }
  const auto data = compute_figure(config);
  std::filesystem::create_directories(options.out_dir);
  print_source(options, out);
  out << figure_summary(data);
  if (options.format != "svg") {
    write_file(options.out_dir / "figure_traces.csv", traces_csv(data));
    write_file(options.out_dir / "figure_support.csv", support_csv(data));
    out << "output.traces=" << (options.out_dir / "figure_traces.csv").string() << '\n';
    out << "output.support=" << (options.out_dir / "figure_support.csv").string() << '\n';
  }
  if (options.format != "csv") {
    write_file(options.out_dir / "figure.svg", figure_svg(data));
    out << "output.svg=" << (options.out_dir / "figure.svg").string() << '\n';
  }
  return kExitOk;
}

int cmd_screen(const RunOptions& options, std::ostream& out, std::ostream&) {
  auto config = parse_screen_config(config_text(options, nullptr));
  if (options.grid) {
    config.prior_set.resolution = *options.grid;
    config.envelope_resolution = *options.grid;
  }
  const std::size_t n = config.n;
  const EnvelopeOptions envelope{config.envelope_resolution};
  ScreeningOptions screen_options;
  screen_options.envelope = envelope;
  const auto priors = build_prior_set(config.prior_set, n, screen_options.prior_set);
  const UninformedKind uninformed =
      config.seu_rho ? UninformedKind::seu(Belief(*config.seu_rho)) : UninformedKind::maximin();

  print_source(options, out);
  out << "n=" << n << '\n';
  out << "contract.source="
      << (config.contract.kind == ContractSpec::Kind::Explicit        ? "config"
          : config.contract.kind == ContractSpec::Kind::PaymentSearch ? "payment_search"
                                                                      : "search")
      << '\n';

  std::optional<ValueFunction> vf;
  if (config.contract.kind == ContractSpec::Kind::FullSearch) {
    if (config.seu_rho) throw ConfigError("/contract: search constructs equal-fine contracts for the maximin expert");
    const int res = config.prior_set.resolution > 0 ? config.prior_set.resolution : default_envelope_resolution(n);
    AssumptionBounds bounds{};
    if (config.search.epsilon) {
      bounds = {*config.search.epsilon, config.search.eta, *config.search.cost_bound};
      out << "search.bounds=config\n";
    } else {
      ProbeOptions probe;
      probe.norm = config.search.norm;
      probe.envelope = envelope;
      const auto found = assumption_probe(config.model, n, config.search.eta, res, probe);
      if (!found) {
        throw AssumptionViolated(
            fmt::format("some prior within {} of the uniform prior has no valuable experiment", config.search.eta));
      }
      bounds = *found;
      out << "search.bounds=probe\n";
    }
    out << "search.epsilon=" << format_number(bounds.epsilon) << '\n';
    out << "search.eta=" << format_number(bounds.eta) << '\n';
    out << "search.cost_bound=" << format_number(bounds.cost_bound) << '\n';
    out << "search.norm=" << norm_name(config.search.norm) << '\n';
    out << "search.margin=" << format_number(config.search.margin) << '\n';
    ConstructOptions construct;
    construct.resolution = res;
    construct.margin = config.search.margin;
    construct.norm = config.search.norm;
    construct.envelope = envelope;
    const auto built = construct_screening_contract(config.model, bounds, n, construct);
    out << "search.outside_min_prob=" << format_number(built.outside_min_prob) << '\n';
    out << "search.payment_threshold=" << format_number(built.payment_threshold) << '\n';
    vf.emplace(built.contract, n);
    if (config.prior_set.kind == "simplex" && built.report.prior_set.count == priors.size()) {
      // construction already swept this grid
      out << to_key_value(built.report);
      return kExitOk;
    }
  } else {
    std::vector<double> fines = config.contract.fines;
    if (fines.size() == 1) fines.assign(n, fines[0]);
    const double u = config.contract.kind == ContractSpec::Kind::Explicit ? config.contract.u : fines[0];
    vf.emplace(GeneralizedContract(u, fines), config.variant);
    if (config.contract.kind == ContractSpec::Kind::PaymentSearch) {
      PaymentWindow window{};
      vf.emplace(place_payment(*vf, config.model, priors, uninformed, envelope, 0.5, &window));
      out << "search.informed_threshold=" << format_number(window.informed_threshold) << '\n';
      out << "search.break_even=" << format_number(window.break_even) << '\n';
    }
  }
  const auto report = screens(*vf, config.model, priors, uninformed, screen_options);
  out << to_key_value(report);
  return kExitOk;
}

int cmd_prop2(const RunOptions& options, std::ostream& out, std::ostream&) {
  auto config = parse_prop2_config(config_text(options, kDefaultProp2Config));
  if (options.rho) config.rho = *options.rho;
  if (options.d_n) config.d_n = *options.d_n;
  if (options.u) config.u = *options.u;
  if (options.grid) config.resolution = *options.grid;
  const Belief rho(config.rho);
  const std::size_t n = rho.size();
  const int res = config.resolution > 0 ? config.resolution : default_envelope_resolution(n);
  const EnvelopeOptions envelope{res};

  const auto fines = prop2_contract(rho, config.d_n, config.u.value_or(1.0)).fines;
  double lo = rho[0] * fines[0];
  double hi = lo;
  for (std::size_t i = 0; i < n; ++i) {
    lo = std::min(lo, rho[i] * fines[i]);
    hi = std::max(hi, rho[i] * fines[i]);
  }
  print_source(options, out);
  out << "rho=" << format_vector(rho.probs()) << '\n';
  out << "d_n=" << format_number(config.d_n) << '\n';
  out << "contract.fines=" << format_vector(fines) << '\n';
  out << "expected_fine=" << format_number(rho[n - 1] * fines[n - 1]) << '\n';
  out << "expected_fine.spread=" << format_number(hi - lo) << '\n';

  ProbeOptions probe;
  probe.center = rho;
  probe.norm = config.norm;
  probe.envelope = envelope;
  const auto bounds = assumption_probe(config.model, n, config.eta, res, probe);
  if (!bounds) throw AssumptionViolated(fmt::format("some prior within {} of rho has no valuable experiment", config.eta));
  out << "probe.epsilon=" << format_number(bounds->epsilon) << '\n';
  out << "probe.eta=" << format_number(bounds->eta) << '\n';
  out << "probe.cost_bound=" << format_number(bounds->cost_bound) << '\n';
  out << "probe.norm=" << norm_name(config.norm) << '\n';

  ScreeningOptions screen_options;
  screen_options.envelope = envelope;
  screen_options.prior_set.kind = "simplex";
  screen_options.prior_set.resolution = res;
  const auto priors = simplex_grid(n, res);
  screen_options.prior_set.count = priors.size();
  const auto seu = UninformedKind::seu(rho);
  ValueFunction vf(GeneralizedContract(config.u.value_or(rho[n - 1] * config.d_n), fines));
  if (!config.u) {
    PaymentWindow window{};
    // just below the expected fine rho_n d_n, where the SEU expert turns to rejecting
    vf = place_payment(vf, config.model, priors, seu, envelope, kJustBelowDepth, &window);
    out << "search.informed_threshold=" << format_number(window.informed_threshold) << '\n';
    out << "search.break_even=" << format_number(window.break_even) << '\n';
  }
  out << to_key_value(screens(vf, config.model, priors, seu, screen_options));
  return kExitOk;
}

int cmd_xi_screen(const RunOptions& options, std::ostream& out, std::ostream& err) {
  auto config = parse_xi_config(config_text(options, kDefaultXiConfig));
  if (options.seed) config.options.seed = *options.seed;
  if (options.grid) config.options.resolution = *options.grid;
  const double target = 1.0 - config.xi;

  auto print = [&](const XiScreenResult& r) {
    const double t = r.contract.u / r.contract.d;
    const double n = static_cast<double>(config.n);
    out << "contract.u=" << format_number(r.contract.u) << '\n';
    out << "contract.d=" << format_number(r.contract.d) << '\n';
    out << "measure.fraction=" << format_number(r.measure.fraction) << '\n';
    out << "measure.half_width=" << format_number(r.measure.half_width) << '\n';
    out << "measure.ci=" << format_number(r.measure.fraction - r.measure.half_width) << ','
        << format_number(r.measure.fraction + r.measure.half_width) << '\n';
    out << "measure.confidence=0.99\n";
    out << "measure.analytic=" << format_number(std::pow(std::max(0.0, 1.0 - n * t), n - 1.0)) << '\n';
    out << "informed.min_net_value=" << format_number(r.informed_min_net_value) << '\n';
    out << "found=" << (r.found ? "true" : "false") << '\n';
  };

  print_source(options, out);
  out << "n=" << config.n << '\n';
  out << "model=" << describe(CostModel(config.model)) << '\n';
  out << "xi=" << format_number(config.xi) << '\n';
  out << "target=" << format_number(target) << '\n';
  out << "samples=" << config.options.samples << '\n';
  out << "seed=" << config.options.seed << '\n';
  try {
    print(xi_screen_search(config.model, config.n, config.xi, config.options));
  } catch (const SearchExhausted& e) {
    print(e.best());
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  }
  return kExitOk;
}

}  // namespace exptest::app
