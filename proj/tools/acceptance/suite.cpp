#include "suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "../app/config.hpp"
#include "../app/figure.hpp"
#include "../app/search.hpp"
#include "exptest/envelope.hpp"
#include "exptest/oracle.hpp"
#include "exptest/screening.hpp"

namespace exptest::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
CriterionResult timed(int id, std::string name, double limit, F&& body) {
  const auto start = Clock::now();
  CriterionResult r{id, std::move(name), false, 0.0, limit, {}};
  try {
    r.pass = body(r.detail);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail += fmt::format("{}exception: {}", r.detail.empty() ? "" : "; ", e.what());
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit > 0.0 && r.seconds >= limit) {
    r.pass = false;
    r.detail += fmt::format("; runtime {:.2f} s over the {} s limit", r.seconds, limit);
  }
  return r;
}

const CostModel& example_one_menu() {
  static const CostModel menu = FixedMenu{{{Experiment::symmetric_binary(0.75), 50.0}}};
  return menu;
}

double max_abs_gap(double a, double b) { return std::abs(a - b); }

}  // namespace

std::string format_result(const CriterionResult& r) {
  const std::string limit = r.time_limit > 0.0 ? fmt::format(" < {} s", r.time_limit) : "";
  return fmt::format("{} criterion {}: {} ({:.2f} s{}) {}", r.pass ? "PASS" : "FAIL", r.id, r.name, r.seconds, limit,
                     r.detail);
}

CriterionResult example_one_reproduction() {
  return timed(1, "two-state single-experiment example", 1.0, [](std::string& detail) {
    constexpr double tol = 1e-9;
    const ValueFunction vf(Contract(250.0, 600.0), 2);
    double worst_learning = 0.0;
    bool ok = true;
    for (double mu : {0.35, 0.45, 0.5, 0.55, 0.65}) {
      const auto out = informed_value(vf, example_one_menu(), Belief({mu, 1.0 - mu}));
      worst_learning = std::max(worst_learning, max_abs_gap(out.net_value, 50.0));
      ok = ok && out.menu_choice.has_value();
    }
    double lowest_outside = std::numeric_limits<double>::infinity();
    for (double mu : {0.1, 1.0 / 3.0, 2.0 / 3.0, 0.9}) {
      const auto out = informed_value(vf, example_one_menu(), Belief({mu, 1.0 - mu}));
      lowest_outside = std::min(lowest_outside, out.net_value);
      ok = ok && std::abs(out.net_value - (250.0 - 600.0 * std::min(mu, 1.0 - mu))) <= tol;
    }
    const double uninformed = uninformed_maximin(vf).value;
    ok = ok && worst_learning <= tol && lowest_outside >= 50.0 - tol && std::abs(uninformed + 50.0) <= tol;
    detail = fmt::format("max |learning payoff - 50| = {:.3g}, min no-learning payoff = {}, uninformed = {} (tol 1e-9)",
                         worst_learning, lowest_outside, uninformed);
    return ok;
  });
}

CriterionResult null_menu_threshold() {
  return timed(2, "nothing-to-learn threshold u = d/n", 5.0, [](std::string& detail) {
    constexpr double slack = 1e-6;
    const double d = 10.0;
    bool ok = true;
    int cases = 0;
    for (std::size_t n : {2u, 3u, 5u}) {
      // resolutions divisible by n so the uniform prior is on the grid
      const int res = n == 2 ? 1000 : n == 3 ? 201 : 40;
      const auto grid = simplex_grid(n, res);
      const double share = 1.0 / static_cast<double>(n);
      for (double offset : {-0.01, 0.0, 0.01}) {
        const double u = (share + offset) * d;
        const ValueFunction vf(Contract(u, d), n);
        const auto report = screens(vf, FixedMenu{}, grid);
        const bool accepts = report.informed_min_net_value >= -slack;
        const bool should = u >= d * share;
        const double expected = u - d / static_cast<double>(n);
        if (accepts != should || report.uninformed_value != expected || report.screens) {
          ok = false;
          detail += fmt::format("n={} u/d={}: accepts={} uninformed={} expected {}; ", n, u / d, accepts,
                                report.uninformed_value, expected);
        }
        ++cases;
      }
    }
    detail += fmt::format("{} cases, grid slack 1e-6, uninformed value compared exactly", cases);
    return ok;
  });
}

CriterionResult screening_pipeline() {
  return timed(3, "probe, construct and verify screening contracts", 60.0, [](std::string& detail) {
    struct Case {
      std::string label;
      CostModel model;
      std::size_t n;
      double eta;
    };
    std::vector<Case> cases;
    cases.push_back({"single experiment n=2", example_one_menu(), 2, 0.05});
    for (double kappa : {0.01, 0.1}) {
      for (std::size_t n : {2u, 3u}) {
        cases.push_back({fmt::format("entropy kappa={} n={}", kappa, n), PosteriorSeparable{kappa, neg_entropy()}, n,
                         0.05});
      }
    }
    bool ok = true;
    for (const auto& c : cases) {
      const int res = c.n == 2 ? 1000 : 200;
      const auto bounds = assumption_probe(c.model, c.n, c.eta, res);
      if (!bounds) {
        ok = false;
        detail += fmt::format("[{}: probe found no bounds] ", c.label);
        continue;
      }
      ConstructOptions options;
      options.resolution = res;
      const auto built = construct_screening_contract(c.model, *bounds, c.n, options);
      // construction ends with a screens() sweep over the full grid
      const auto& report = built.report;
      ok = ok && report.screens && report.prior_set.kind == "simplex" &&
           report.prior_set.count == simplex_grid_size(c.n, res);
      detail += fmt::format("[{}: eps={:.4g} T={:.4g} u={:.6g} d={:.6g} informed min={:.3g} uninformed={:.3g} {}] ",
                            c.label, bounds->epsilon, bounds->cost_bound, built.contract.u, built.contract.d,
                            report.informed_min_net_value, report.uninformed_value,
                            report.screens ? "screens" : "DOES NOT SCREEN");
    }
    return ok;
  });
}

CriterionResult envelope_oracle_agreement() {
  return timed(4, "1-D envelope vs LP vs exhaustive pair search", 0.0, [](std::string& detail) {
    constexpr int res = 200;
    constexpr int trials = 100;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> slope(-3.0, 3.0);
    std::uniform_int_distribution<int> kinks(1, 4);
    const auto grid = simplex_grid(2, res);
    std::vector<double> xs;
    for (const auto& b : grid) xs.push_back(b[0]);

    double worst_value = 0.0;
    double worst_plausibility = 0.0;
    double worst_achievement = 0.0;
    for (int t = 0; t < trials; ++t) {
      const int k = kinks(rng);
      std::vector<double> at(k);
      std::vector<double> weight(k);
      for (int i = 0; i < k; ++i) {
        at[i] = unit(rng);
        weight[i] = slope(rng);
      }
      const double linear = slope(rng);
      const double kappa = 0.5 * unit(rng);
      const Potential potential = t % 2 == 0 ? neg_entropy() : quadratic();
      std::vector<double> fs;
      for (const auto& b : grid) {
        double f = linear * b[0] - kappa * potential(b);
        for (int i = 0; i < k; ++i) f += weight[i] * std::abs(b[0] - at[i]);
        fs.push_back(f);
      }
      const double mu = unit(rng);
      const Belief prior({mu, 1.0 - mu});
      const auto hull = concavify_1d(xs, fs, mu);
      const auto lp = concavify_lp(grid, fs, prior);
      const double brute = oracle::brute_force_two_point_search(
          [&](double x) { return fs[static_cast<std::size_t>(std::lround(x * res))]; }, mu, res);
      worst_value = std::max({worst_value, std::abs(hull.value - lp.value), std::abs(hull.value - brute),
                              std::abs(lp.value - brute)});
      for (const auto* plan : {&hull.plan, &lp.plan}) {
        const auto centre = barycenter(*plan);
        worst_plausibility = std::max(worst_plausibility, std::abs(centre[0] - mu));
        double achieved = 0.0;
        for (std::size_t j = 0; j < plan->size(); ++j) {
          achieved += plan->weights()[j] * fs[static_cast<std::size_t>(std::lround(plan->support()[j][0] * res))];
        }
        worst_achievement = std::max(worst_achievement, std::abs(achieved - hull.value));
      }
    }
    detail = fmt::format(
        "{} objectives at resolution {}: max value gap {:.3g} (tol 1e-6), max barycenter gap {:.3g} (tol 1e-9), "
        "max achievement gap {:.3g} (tol 1e-6)",
        trials, res, worst_value, worst_plausibility, worst_achievement);
    return worst_value <= 1e-6 && worst_plausibility <= 1e-9 && worst_achievement <= 1e-6;
  });
}

CriterionResult kink_avoidance() {
  return timed(5, "optimal learning avoids the kink", 0.0, [](std::string& detail) {
    bool ok = true;
    constexpr int line_res = 1000;
    for (double kappa : {0.01, 0.1}) {
      const CostModel model = PosteriorSeparable{kappa, neg_entropy()};
      const auto bounds = assumption_probe(model, 2, 0.05, line_res);
      if (!bounds) {
        ok = false;
        detail += fmt::format("[two-state kappa={}: probe failed] ", kappa);
        continue;
      }
      ConstructOptions options;
      options.resolution = line_res;
      const auto built = construct_screening_contract(model, *bounds, 2, options);
      InformedSolver solver(ValueFunction(built.contract, 2), model, {line_res});
      const auto plan = solver(Belief::uniform(2)).plan;
      double lo = 1.0;
      double hi = 0.0;
      std::size_t count = 0;
      for (std::size_t j = 0; j < plan.size(); ++j) {
        if (plan.weights()[j] <= 1e-12) continue;
        ++count;
        lo = std::min(lo, plan.support()[j][0]);
        hi = std::max(hi, plan.support()[j][0]);
      }
      const bool pass = count == 2 && hi - lo >= 10.0 / line_res;
      ok = ok && pass;
      detail += fmt::format("[two-state kappa={} d={:.4g}: support {:.4g}..{:.4g}, gap {:.4g} >= {}] ", kappa,
                            built.contract.d, lo, hi, hi - lo, 10.0 / line_res);
    }

    constexpr int urn_res = 200;
    const double limit = 2.0 / urn_res;
    const auto ball = ball_grid(Belief::uniform(3), 0.1, urn_res);
    for (double kappa : {0.01, 0.1}) {
      const CostModel model = PosteriorSeparable{kappa, neg_entropy()};
      const auto vf = app::place_payment(ValueFunction::urn(Contract(1.0, 1.0)), model, ball,
                                         UninformedKind::maximin(), {urn_res});
      InformedSolver solver(vf, model, {urn_res});
      double closest = std::numeric_limits<double>::infinity();
      int learning = 0;
      for (double a : {0.05, 0.1, 0.2, 0.25, 0.3, 1.0 / 3.0, 0.4, 0.45}) {
        const auto plan = solver(Belief({a, 1.0 - 2.0 * a, a})).plan;
        if (plan.is_degenerate()) continue;
        ++learning;
        for (std::size_t j = 0; j < plan.size(); ++j) {
          if (plan.weights()[j] <= 1e-12) continue;
          closest = std::min(closest, std::abs(plan.support()[j][0] - plan.support()[j][2]) / std::sqrt(2.0));
        }
      }
      const bool pass = learning > 0 && closest >= limit;
      ok = ok && pass;
      detail += fmt::format("[urn kappa={} u={:.4g} d=1: {} learning priors, closest support {:.4g} >= {}] ", kappa,
                            vf.payment(), learning, closest, limit);
    }
    return ok;
  });
}

CriterionResult generalized_contracts() {
  return timed(6, "generalized contracts screen an expected-utility expert", 30.0, [](std::string& detail) {
    std::mt19937_64 rng(6);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> log_fine(std::log(0.5), std::log(20.0));
    const CostModel model = PosteriorSeparable{0.01, neg_entropy()};
    constexpr double kMaxEta = 0.05;
    double worst_spread = 0.0;
    int screened = 0;
    int trials = 0;
    std::string failures;
    for (int t = 0; t < 50; ++t) {
      const std::size_t n = 2 + static_cast<std::size_t>(t % 3);
      const int res = n == 2 ? 1000 : n == 3 ? 100 : 20;
      const int probe_res = n == 2 ? 1000 : n == 3 ? 200 : 100;
      std::vector<double> p(n);
      double total = 0.0;
      for (double& x : p) total += (x = 0.05 + expo(rng));
      for (double& x : p) x /= total;
      const Belief rho(p);
      const double d_n = std::exp(log_fine(rng));
      const auto gc = prop2_contract(rho, d_n, 1.0);
      double lo = rho[0] * gc.fines[0];
      double hi = lo;
      for (std::size_t i = 0; i < n; ++i) {
        lo = std::min(lo, rho[i] * gc.fines[i]);
        hi = std::max(hi, rho[i] * gc.fines[i]);
      }
      worst_spread = std::max(worst_spread, hi - lo);
      ++trials;

      // keep the ball inside the simplex: no experiment is valuable where a
      // state has probability zero
      const double eta = std::min(kMaxEta, 0.5 * min_prob(rho));
      ProbeOptions probe;
      probe.center = rho;
      probe.envelope.resolution = res;
      if (!assumption_probe(model, n, eta, probe_res, probe)) {
        failures += fmt::format("trial {} probe failed; ", t);
        continue;
      }
      const auto priors = simplex_grid(n, res);
      const auto seu = UninformedKind::seu(rho);
      ScreeningOptions options;
      options.envelope.resolution = res;
      try {
        const auto vf = app::place_payment(ValueFunction(gc), model, priors, seu, options.envelope, 0.01);
        const auto report = screens(vf, model, priors, seu, options);
        if (report.screens && vf.payment() < rho[n - 1] * d_n) {
          ++screened;
        } else {
          failures += fmt::format("trial {} does not screen; ", t);
        }
      } catch (const NoFeasibleU& e) {
        failures += fmt::format("trial {}: {}; ", t, e.what());
      }
    }
    detail = fmt::format("{} of {} random priors screened, max expected-fine spread {:.3g} (tol 1e-12){}{}", screened,
                         trials, worst_spread, failures.empty() ? "" : "; ", failures);
    return worst_spread < 1e-12 && screened == trials;
  });
}

CriterionResult xi_screening() {
  return timed(7, "xi-screening by Monte Carlo", 60.0, [](std::string& detail) {
    const PosteriorSeparable model{0.01, neg_entropy()};
    constexpr int res = 1000;
    bool ok = true;
    for (double xi : {0.5, 0.2, 0.1}) {
      XiScreenOptions options;
      options.resolution = res;
      const auto result = xi_screen_search(model, 2, xi, options);
      ScreeningOptions check;
      check.envelope.resolution = res;
      const auto report =
          screens(ValueFunction(result.contract, 2), model, simplex_grid(2, res), UninformedKind::maximin(), check);
      const double analytic = 1.0 - 2.0 * result.contract.u / result.contract.d;
      const bool pass = result.measure.samples == 100000 && result.measure.fraction >= 1.0 - xi - result.measure.half_width &&
                        report.informed_min_net_value >= -kAcceptSlack &&
                        std::abs(analytic - result.measure.fraction) <= result.measure.half_width;
      ok = ok && pass;
      detail += fmt::format(
          "[xi={}: u={:.6g} d={:.6g} measure {:.5f} +- {:.5f}, analytic {:.5f}, informed min {:.3g}] ", xi,
          result.contract.u, result.contract.d, result.measure.fraction, result.measure.half_width, analytic,
          report.informed_min_net_value);
    }
    return ok;
  });
}

CriterionResult maximin_closed_form() {
  return timed(8, "equalizer formula vs zero-sum LP", 0.0, [](std::string& detail) {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> dim(2, 6);
    std::uniform_real_distribution<double> log_fine(std::log(0.01), std::log(100.0));
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      const std::size_t n = static_cast<std::size_t>(dim(rng));
      std::vector<double> fines(n);
      for (double& d : fines) d = std::exp(log_fine(rng));
      const double u = std::exp(log_fine(rng));
      const GeneralizedContract gc(u, fines);
      double inverse_sum = 0.0;
      for (double d : fines) inverse_sum += 1.0 / d;
      std::vector<std::vector<double>> payoff(n, std::vector<double>(n, u));
      for (std::size_t i = 0; i < n; ++i) payoff[i][i] -= fines[i];
      const double lp = oracle::lp_maximin(payoff).value;
      const double closed = uninformed_maximin(gc).value;
      worst = std::max({worst, std::abs(closed - lp), std::abs(closed - (u - 1.0 / inverse_sum))});
    }
    detail = fmt::format("200 contracts with n in 2..6, max gap {:.3g} (tol 1e-9)", worst);
    return worst <= 1e-9;
  });
}

CriterionResult figure_ordering() {
  return timed(9, "value-curve figure ordering", 0.0, [](std::string& detail) {
    const auto data = app::compute_figure(app::parse_figure_config(app::kDefaultFigureConfig));
    auto trace_of = [&](double p) -> const app::PriorTrace& {
      for (const auto& t : data.traces) {
        if (std::abs(t.prior - p) < 1e-12) return t;
      }
      throw InvalidArgument("figure has no trace for the requested prior");
    };
    const auto& low = trace_of(0.47);
    const auto& mid = trace_of(0.5);
    const auto& high = trace_of(0.53);
    bool lowest = true;
    bool mirrored = true;
    for (std::size_t j = 0; j < mid.x.size(); ++j) {
      lowest = lowest && mid.value[j] < low.value[j] && mid.value[j] < high.value[j];
      mirrored = mirrored && std::abs(low.value[j] - high.value[j]) <= 1e-9;
    }
    // a farther prior must sit strictly above every nearer one
    bool increasing = true;
    for (const auto& a : data.traces) {
      for (const auto& b : data.traces) {
        const double gap = std::abs(b.prior - 0.5) - std::abs(a.prior - 0.5);
        for (std::size_t j = 0; j < a.x.size(); ++j) {
          if (gap > 1e-12) increasing = increasing && b.value[j] > a.value[j];
          if (std::abs(gap) <= 1e-12) increasing = increasing && std::abs(b.value[j] - a.value[j]) <= 1e-9;
        }
      }
    }
    const bool learning = low.degenerate && high.degenerate && !mid.degenerate;
    detail = fmt::format(
        "u={:.6g} d={:.6g} kappa={}: prior 0.5 lowest={} ordering by distance={} equal-distance curves match={}, "
        "degenerate 0.47/0.53 = {}/{}, 0.5 learns on {:.4g}..{:.4g}, screens={}",
        data.contract.u, data.contract.d, data.model.kappa, lowest, increasing, mirrored, low.degenerate,
        high.degenerate, mid.support_low, mid.support_high, data.report.screens);
    return lowest && increasing && mirrored && learning && data.report.screens;
  });
}

std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> results;
  for (auto* criterion : {&example_one_reproduction, &null_menu_threshold, &screening_pipeline,
                          &envelope_oracle_agreement, &kink_avoidance, &generalized_contracts, &xi_screening,
                          &maximin_closed_form, &figure_ordering}) {
    results.push_back(criterion());
    if (on_result) on_result(results.back());
  }
  return results;
}

}  // namespace exptest::acceptance
