#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "exptest/cost.hpp"
#include "exptest/errors.hpp"
#include "exptest/screening.hpp"
#include "exptest/simplex.hpp"
#include "exptest/value.hpp"

namespace exptest::app {

/// Malformed or inconsistent scenario file. The message names the line and
/// column for syntax errors and the JSON pointer of the offending field
/// otherwise.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct PriorSetSpec {
  std::string kind = "simplex";  // simplex | ball | list
  int resolution = 0;            // 0 picks the envelope default
  std::optional<std::vector<double>> center;
  double eta = 0.05;
  BallNorm norm = BallNorm::Euclidean;
  std::vector<std::vector<double>> priors;
};

struct ContractSpec {
  enum class Kind {
    Explicit,
    /// Fines are given; u is placed between the informed acceptance
    /// threshold and the uninformed break-even payment.
    PaymentSearch,
    /// Probe the assumption and construct (u, d) from scratch.
    FullSearch,
  };
  Kind kind = Kind::Explicit;
  double u = 0.0;
  std::vector<double> fines;  // one entry means equal fines
};

struct SearchSpec {
  double eta = 0.05;
  double margin = 0.05;
  BallNorm norm = BallNorm::Euclidean;
  std::optional<double> epsilon;
  std::optional<double> cost_bound;
};

struct ScreenConfig {
  std::size_t n = 2;
  Variant variant = Variant::SimpleAnnouncement;
  CostModel model = FixedMenu{};
  ContractSpec contract;
  SearchSpec search;
  PriorSetSpec prior_set;
  std::optional<std::vector<double>> seu_rho;  // empty means maximin
  int envelope_resolution = 0;
};

struct FigureConfig {
  PosteriorSeparable model{1.0, neg_entropy()};
  std::vector<double> priors{0.47, 0.5, 0.53};
  std::optional<Contract> contract;  // empty means search
  int resolution = 1000;
};

struct XiConfig {
  PosteriorSeparable model{0.01, neg_entropy()};
  std::size_t n = 2;
  double xi = 0.1;
  XiScreenOptions options;
};

struct Prop2Config {
  std::vector<double> rho{0.25, 0.75};
  double d_n = 100.0;
  std::optional<double> u;  // empty means payment search
  CostModel model = PosteriorSeparable{0.01, neg_entropy()};
  double eta = 0.05;
  BallNorm norm = BallNorm::Euclidean;
  int resolution = 0;
};

ScreenConfig parse_screen_config(const std::string& text);
FigureConfig parse_figure_config(const std::string& text);
XiConfig parse_xi_config(const std::string& text);
Prop2Config parse_prop2_config(const std::string& text);

/// Reads a whole file; throws ConfigError when it cannot be opened.
std::string read_config_file(const std::filesystem::path& path);

extern const char* const kDefaultFigureConfig;
extern const char* const kDefaultXiConfig;
extern const char* const kDefaultProp2Config;

std::vector<Belief> build_prior_set(const PriorSetSpec& spec, std::size_t n, PriorSetDescriptor& descriptor);

}  // namespace exptest::app
