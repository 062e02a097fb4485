#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "acceptance/suite.hpp"
#include "app/commands.hpp"
#include "app/config.hpp"

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace exptest::app;
  CLI::App cli{"Screening contracts for experts who can and cannot learn"};
  cli.require_subcommand(1);

  RunOptions options;
  std::string config;
  std::uint64_t seed = 0;
  int grid = 0;
  std::string out_dir = ".";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Scenario file (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--grid", grid, "Grid resolution per edge")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--format", options.format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));
  };

  auto* example_one = cli.add_subcommand("example-one", "Two-state single-experiment example");
  auto* figure = cli.add_subcommand("figure", "Value curves, envelopes and concavifying chords");
  auto* screen = cli.add_subcommand("screen", "Check or construct a screening contract");
  auto* prop2 = cli.add_subcommand("prop2", "Generalized contract against an expected-utility expert");
  auto* xi = cli.add_subcommand("xi-screen", "Contract rejected on most of the simplex");
  auto* acceptance = cli.add_subcommand("acceptance", "Run the acceptance suite");
  for (auto* sub : {example_one, figure, screen, prop2, xi, acceptance}) add_common(sub);

  std::string rho;
  double d_n = 0.0;
  double u = 0.0;
  prop2->add_option("--rho", rho, "Comma-separated interior prior");
  prop2->add_option("--dn", d_n, "Fine for the last state")->check(CLI::PositiveNumber);
  prop2->add_option("--u", u, "Payment; searched when omitted")->check(CLI::PositiveNumber);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  auto* active = cli.get_subcommands().front();
  if (active->count("--config") > 0) options.config = config;
  if (active->count("--seed") > 0) options.seed = seed;
  if (active->count("--grid") > 0) options.grid = grid;
  options.out_dir = out_dir;

  if (active == acceptance) {
    int failed = 0;
    exptest::acceptance::run_all([&](const exptest::acceptance::CriterionResult& r) {
      std::cout << exptest::acceptance::format_result(r) << std::endl;
      if (!r.pass) ++failed;
    });
    return failed == 0 ? kExitOk : kExitMismatch;
  }

  return guarded(
      [&]() -> int {
        if (active == prop2) {
          if (prop2->count("--rho") > 0) {
            try {
              options.rho = parse_list(rho);
            } catch (const std::exception&) {
              throw ConfigError("--rho: expected comma-separated numbers");
            }
          }
          if (prop2->count("--dn") > 0) options.d_n = d_n;
          if (prop2->count("--u") > 0) options.u = u;
          return cmd_prop2(options, std::cout, std::cerr);
        }
        if (active == example_one) return cmd_example_one(options, std::cout, std::cerr);
        if (active == figure) return cmd_figure(options, std::cout, std::cerr);
        if (active == screen) return cmd_screen(options, std::cout, std::cerr);
        return cmd_xi_screen(options, std::cout, std::cerr);
      },
      std::cerr);
}
