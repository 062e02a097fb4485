#include "figure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "exptest/envelope.hpp"

namespace exptest::app {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct PlanShape {
  bool degenerate;
  double low;
  double high;
  double weight_low;
  double weight_high;
};

PlanShape shape(const PosteriorDistribution& plan, double prior) {
  PlanShape s{plan.is_degenerate(), prior, prior, 1.0, 0.0};
  if (s.degenerate) return s;
  s.low = 1.0;
  s.high = 0.0;
  for (std::size_t j = 0; j < plan.size(); ++j) {
    if (plan.weights()[j] <= 1e-12) continue;
    const double x = plan.support()[j][0];
    if (x < s.low) {
      s.low = x;
      s.weight_low = plan.weights()[j];
    }
    if (x > s.high) {
      s.high = x;
      s.weight_high = plan.weights()[j];
    }
  }
  return s;
}

std::vector<double> outermost(const std::vector<double>& priors, bool far) {
  double target = far ? 0.0 : 1.0;
  for (double p : priors) {
    const double dist = std::abs(p - 0.5);
    target = far ? std::max(target, dist) : std::min(target, dist);
  }
  std::vector<double> out;
  for (double p : priors) {
    if (std::abs(std::abs(p - 0.5) - target) <= 1e-12) out.push_back(p);
  }
  return out;
}

std::string cell(double v) { return std::isnan(v) ? std::string() : format_number(v); }

}  // namespace

FigureSearch search_figure_contract(const PosteriorSeparable& model, const std::vector<double>& priors,
                                    int resolution) {
  if (!(model.kappa > 0.0)) throw NoFeasibleU("the figure search needs a positive kappa");
  const auto far = outermost(priors, true);
  const auto near = outermost(priors, false);
  const auto grid = simplex_grid(2, resolution);
  const double min_width = 10.0 / resolution;
  for (int k = 24; k >= -40; --k) {
    const double ratio = std::pow(10.0, k / 8.0);
    const double d = model.kappa * ratio;
    const ValueFunction vf(Contract(0.5 * d, d), 2);
    InformedSolver solver(vf, model, {resolution});
    bool fits = true;
    for (double p : far) fits = fits && solver(Belief({p, 1.0 - p})).plan.is_degenerate();
    for (double p : near) {
      const auto s = shape(solver(Belief({p, 1.0 - p})).plan, p);
      fits = fits && !s.degenerate && s.high - s.low >= min_width;
    }
    if (!fits) continue;
    PaymentWindow window{};
    try {
      const auto placed = place_payment(vf, model, grid, UninformedKind::maximin(), {resolution}, 0.5, &window);
      return {Contract(placed.payment(), d), ratio, window};
    } catch (const NoFeasibleU&) {
      continue;
    }
  }
  throw NoFeasibleU("no fine on the lattice separates the figure priors");
}

FigureData compute_figure(const FigureConfig& config) {
  std::optional<FigureSearch> search;
  Contract contract = config.contract.value_or(Contract(1.0, 1.0));
  if (!config.contract) {
    search = search_figure_contract(config.model, config.priors, config.resolution);
    contract = search->contract;
  }
  const ValueFunction vf(contract, 2);
  const auto grid = simplex_grid(2, config.resolution);

  ScreeningOptions options;
  options.envelope.resolution = config.resolution;
  options.prior_set.kind = "simplex";
  options.prior_set.resolution = config.resolution;
  // Without a cost, learning is free: full revelation at price zero has the
  // same value as the envelope of the piecewise-linear curve.
  const CostModel report_model = config.model.kappa > 0.0
                                     ? CostModel(config.model)
                                     : CostModel(FixedMenu{{{Experiment::fully_informative(2), 0.0}}});
  FigureData data{config.model, contract, config.resolution, search, {},
                  screens(vf, report_model, grid, UninformedKind::maximin(), options)};

  std::vector<double> objective;
  for (const auto& x : grid) objective.push_back(learning_objective(vf, config.model, x));
  const LineEnvelope envelope(grid, objective);
  const double kappa = config.model.kappa;

  for (double prior : config.priors) {
    const Belief mu({prior, 1.0 - prior});
    const double shift = kappa == 0.0 ? 0.0 : kappa * config.model.potential(mu);
    const double stay = learning_objective(vf, config.model, mu);
    auto cav = envelope.evaluate(mu);
    const bool stays = stay >= cav.value;
    const auto s = shape(stays ? PosteriorDistribution::degenerate(mu) : cav.plan, prior);
    PriorTrace t{prior, {}, {}, {}, {}, {}, {}, s.degenerate, s.low, s.high, s.weight_low, s.weight_high,
                 std::max(stay, cav.value) + shift};
    const double v_low = envelope.value(s.low) + shift;
    const double v_high = envelope.value(s.high) + shift;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double x = grid[j][0];
      t.x.push_back(x);
      t.gross.push_back(vf(grid[j]));
      t.objective.push_back(objective[j]);
      t.value.push_back(objective[j] + shift);
      t.envelope.push_back(envelope.value(x) + shift);
      if (!s.degenerate && x >= s.low && x <= s.high) {
        t.chord.push_back(v_low + (v_high - v_low) * (x - s.low) / (s.high - s.low));
      } else {
        t.chord.push_back(kNan);
      }
    }
    data.traces.push_back(std::move(t));
  }
  return data;
}

std::string traces_csv(const FigureData& data) {
  std::ostringstream out;
  out << "prior,x,gross,objective,value,envelope,chord\n";
  for (const auto& t : data.traces) {
    for (std::size_t j = 0; j < t.x.size(); ++j) {
      out << format_number(t.prior) << ',' << format_number(t.x[j]) << ',' << format_number(t.gross[j]) << ','
          << format_number(t.objective[j]) << ',' << format_number(t.value[j]) << ',' << format_number(t.envelope[j])
          << ',' << cell(t.chord[j]) << '\n';
    }
  }
  return out.str();
}

std::string support_csv(const FigureData& data) {
  std::ostringstream out;
  out << "prior,degenerate,support_low,support_high,weight_low,weight_high,informed_value\n";
  for (const auto& t : data.traces) {
    out << format_number(t.prior) << ',' << (t.degenerate ? "true" : "false") << ',' << format_number(t.support_low)
        << ',' << format_number(t.support_high) << ',' << format_number(t.weight_low) << ','
        << format_number(t.weight_high) << ',' << format_number(t.informed_value) << '\n';
  }
  return out.str();
}

std::string figure_svg(const FigureData& data) {
  constexpr double width = 760.0;
  constexpr double height = 480.0;
  constexpr double left = 70.0;
  constexpr double right = 170.0;
  constexpr double top = 30.0;
  constexpr double bottom = 50.0;
  static const char* const colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  // zoom on the priors and their posteriors; the CSV keeps the whole grid
  double x0 = 1.0;
  double x1 = 0.0;
  for (const auto& t : data.traces) {
    x0 = std::min({x0, t.prior, t.support_low});
    x1 = std::max({x1, t.prior, t.support_high});
  }
  x0 = std::max(0.0, x0 - 0.1);
  x1 = std::min(1.0, x1 + 0.1);
  auto visible = [&](double x) { return x >= x0 - 1e-12 && x <= x1 + 1e-12; };

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& t : data.traces) {
    for (std::size_t j = 0; j < t.x.size(); ++j) {
      if (!visible(t.x[j])) continue;
      lo = std::min(lo, t.value[j]);
      hi = std::max(hi, t.envelope[j]);
    }
  }
  if (!(hi > lo)) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * plot_w; };
  auto py = [&](double y) { return top + (hi - y) / (hi - lo) * plot_h; };

  std::ostringstream out;
  out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">)", width,
                     height, width, height)
      << '\n';
  out << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
  out << fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>)", left, top, plot_w,
                     plot_h)
      << '\n';
  for (int i = 0; i <= 4; ++i) {
    const double x = x0 + (x1 - x0) * i / 4.0;
    out << fmt::format(R"(<line x1="{0:.2f}" y1="{1:.2f}" x2="{0:.2f}" y2="{2:.2f}" stroke="black"/>)", px(x),
                       top + plot_h, top + plot_h + 5)
        << '\n';
    out << fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="12" text-anchor="middle">{:.3g}</text>)", px(x),
                       top + plot_h + 20, x)
        << '\n';
    const double y = lo + (hi - lo) * i / 4.0;
    out << fmt::format(R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="black"/>)", left - 5, py(y),
                       left, py(y))
        << '\n';
    out << fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="11" text-anchor="end">{:.4g}</text>)", left - 8,
                       py(y) + 4, y)
        << '\n';
  }
  out << fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="13" text-anchor="middle">posterior x</text>)",
                     left + plot_w / 2, height - 10)
      << '\n';

  for (std::size_t i = 0; i < data.traces.size(); ++i) {
    const auto& t = data.traces[i];
    const char* colour = colours[i % std::size(colours)];
    auto polyline = [&](const std::vector<double>& ys, const char* extra) {
      out << R"(<polyline fill="none" stroke=")" << colour << '"' << extra << R"( points=")";
      bool first = true;
      for (std::size_t j = 0; j < t.x.size(); ++j) {
        if (std::isnan(ys[j]) || !visible(t.x[j])) continue;
        if (!first) out << ' ';
        out << fmt::format("{:.2f},{:.2f}", px(t.x[j]), py(ys[j]));
        first = false;
      }
      out << "\"/>\n";
    };
    polyline(t.value, R"( stroke-width="1.5")");
    polyline(t.envelope, R"( stroke-width="1" stroke-dasharray="5,3")");
    if (!t.degenerate) polyline(t.chord, R"( stroke-width="2.5")");
    const double ly = top + 20.0 * (i + 1);
    out << fmt::format(R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="{}" stroke-width="2"/>)",
                       width - right + 15, ly, width - right + 40, ly, colour)
        << '\n';
    out << fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="12">prior {}{}</text>)", width - right + 45, ly + 4,
                       t.prior, t.degenerate ? "" : " (learns)")
        << '\n';
  }
  out << "</svg>\n";
  return out.str();
}

std::string figure_summary(const FigureData& data) {
  std::ostringstream out;
  out << "model=" << describe(CostModel(data.model)) << '\n';
  out << "resolution=" << data.resolution << '\n';
  out << "contract.u=" << format_number(data.contract.u) << '\n';
  out << "contract.d=" << format_number(data.contract.d) << '\n';
  out << "contract.source=" << (data.search ? "search" : "config") << '\n';
  if (data.search) {
    out << "search.fine_to_kappa=" << format_number(data.search->fine_to_kappa) << '\n';
    out << "search.informed_threshold=" << format_number(data.search->window.informed_threshold) << '\n';
    out << "search.break_even=" << format_number(data.search->window.break_even) << '\n';
  }
  for (const auto& t : data.traces) {
    const auto key = fmt::format("prior[{}]", format_number(t.prior));
    out << key << ".degenerate=" << (t.degenerate ? "true" : "false") << '\n';
    out << key << ".support=" << format_number(t.support_low) << ',' << format_number(t.support_high) << '\n';
    out << key << ".informed_value=" << format_number(t.informed_value) << '\n';
  }
  out << "informed.min_net_value=" << format_number(data.report.informed_min_net_value) << '\n';
  out << "uninformed.value=" << format_number(data.report.uninformed_value) << '\n';
  out << "screens=" << (data.report.screens ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace exptest::app
