#include "config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"

namespace exptest::app {

using nlohmann::json;

const char* const kDefaultFigureConfig = R"({
  "model": {"type": "separable", "potential": "neg_entropy", "kappa": 1.0},
  "priors": [0.47, 0.5, 0.53],
  "contract": "search",
  "resolution": 1000
})";

const char* const kDefaultXiConfig = R"({
  "n": 2,
  "xi": 0.1,
  "model": {"type": "separable", "potential": "neg_entropy", "kappa": 0.01},
  "samples": 100000,
  "seed": 20240531
})";

const char* const kDefaultProp2Config = R"({
  "rho": [0.25, 0.75],
  "d_n": 100,
  "model": {"type": "separable", "potential": "neg_entropy", "kappa": 0.01},
  "eta": 0.05
})";

namespace {

json parse_text(const std::string& text) {
  try {
    return json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 0;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 0;
      } else {
        ++column;
      }
    }
    throw ConfigError(fmt::format("syntax error at line {}, column {}: {}", line, column + 1, e.what()));
  }
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(fmt::format("{}: {}", path.empty() ? "/" : path, message));
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(child(path, key), "missing field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) fail(path, "must be positive");
  return v;
}

long long integer(const json& j, const std::string& path, long long lo) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo) fail(path, fmt::format("must be at least {}", lo));
  return v;
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], child(path, i)));
  return out;
}

std::vector<double> probabilities(const json& j, const std::string& path, std::size_t n) {
  auto v = numbers(j, path);
  if (n != 0 && v.size() != n) fail(path, fmt::format("expected {} coordinates, got {}", n, v.size()));
  try {
    (void)Belief(v);
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return v;
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> known) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) fail(child(path, it.key()), "unknown field");
  }
}

BallNorm parse_norm(const json& j, const std::string& path) {
  const auto s = string(j, path);
  if (s == "euclidean") return BallNorm::Euclidean;
  if (s == "sup") return BallNorm::Sup;
  fail(path, "expected \"euclidean\" or \"sup\"");
}

Potential parse_potential(const json& j, const std::string& path) {
  const auto name = string(j, path);
  if (name == "neg_entropy") return neg_entropy();
  if (name == "quadratic") return quadratic();
  fail(path, "expected \"neg_entropy\" or \"quadratic\"");
}

Experiment parse_experiment(const json& item, const std::string& path, std::size_t n) {
  if (item.contains("likelihoods")) {
    const auto& rows = item["likelihoods"];
    const auto rows_path = child(path, "likelihoods");
    if (!rows.is_array() || rows.size() != n) fail(rows_path, fmt::format("expected {} rows", n));
    std::vector<std::vector<double>> m;
    for (std::size_t i = 0; i < rows.size(); ++i) m.push_back(numbers(rows[i], child(rows_path, i)));
    try {
      return Experiment(std::move(m));
    } catch (const Error& e) {
      fail(rows_path, e.what());
    }
  }
  const auto kind = string(require(item, "experiment", path), child(path, "experiment"));
  if (kind == "full") return Experiment::fully_informative(n);
  if (kind == "null") return Experiment::null(n);
  if (kind == "symmetric_binary") {
    if (n != 2) fail(child(path, "experiment"), "symmetric_binary needs two states");
    const auto acc_path = child(path, "accuracy");
    const double acc = number(require(item, "accuracy", path), acc_path);
    try {
      return Experiment::symmetric_binary(acc);
    } catch (const Error& e) {
      fail(acc_path, e.what());
    }
  }
  fail(child(path, "experiment"), "expected \"full\", \"null\", \"symmetric_binary\" or a likelihoods field");
}

PosteriorSeparable parse_separable(const json& j, const std::string& path, bool allow_zero = false) {
  reject_unknown(j, path, {"type", "kappa", "potential", "offset"});
  const double kappa = number(require(j, "kappa", path), child(path, "kappa"));
  if (allow_zero ? kappa < 0.0 : !(kappa > 0.0)) {
    fail(child(path, "kappa"), allow_zero ? "must be non-negative" : "must be positive");
  }
  auto potential = parse_potential(require(j, "potential", path), child(path, "potential"));
  if (j.contains("offset")) potential = shifted(potential, number(j["offset"], child(path, "offset")));
  return PosteriorSeparable{kappa, std::move(potential)};
}

CostModel parse_model(const json& j, const std::string& path, std::size_t n) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto type = string(require(j, "type", path), child(path, "type"));
  if (type == "separable") return parse_separable(j, path);
  if (type != "menu") fail(child(path, "type"), "expected \"menu\" or \"separable\"");
  reject_unknown(j, path, {"type", "items"});
  FixedMenu menu;
  if (j.contains("items")) {
    const auto& items = j["items"];
    const auto items_path = child(path, "items");
    if (!items.is_array()) fail(items_path, "expected an array");
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto item_path = child(items_path, i);
      if (!items[i].is_object()) fail(item_path, "expected an object");
      reject_unknown(items[i], item_path, {"experiment", "accuracy", "likelihoods", "price"});
      auto e = parse_experiment(items[i], item_path, n);
      const double price = number(require(items[i], "price", item_path), child(item_path, "price"));
      if (price < 0.0) fail(child(item_path, "price"), "must be non-negative");
      menu.items.push_back({std::move(e), price});
    }
  }
  return menu;
}

PosteriorSeparable parse_separable_model(const json& j, const std::string& path, bool allow_zero = false) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto type = string(require(j, "type", path), child(path, "type"));
  if (type != "separable") fail(child(path, "type"), "this command needs a \"separable\" model");
  return parse_separable(j, path, allow_zero);
}

PriorSetSpec parse_prior_set(const json& j, const std::string& path, std::size_t n) {
  if (!j.is_object()) fail(path, "expected an object");
  reject_unknown(j, path, {"kind", "resolution", "center", "eta", "norm", "priors"});
  PriorSetSpec spec;
  if (j.contains("kind")) spec.kind = string(j["kind"], child(path, "kind"));
  if (spec.kind != "simplex" && spec.kind != "ball" && spec.kind != "list") {
    fail(child(path, "kind"), "expected \"simplex\", \"ball\" or \"list\"");
  }
  if (j.contains("resolution")) spec.resolution = static_cast<int>(integer(j["resolution"], child(path, "resolution"), 1));
  if (j.contains("center")) spec.center = probabilities(j["center"], child(path, "center"), n);
  if (j.contains("eta")) spec.eta = positive(j["eta"], child(path, "eta"));
  if (j.contains("norm")) spec.norm = parse_norm(j["norm"], child(path, "norm"));
  if (spec.kind == "list") {
    const auto& list = require(j, "priors", path);
    const auto list_path = child(path, "priors");
    if (!list.is_array() || list.empty()) fail(list_path, "expected a non-empty array");
    for (std::size_t i = 0; i < list.size(); ++i) spec.priors.push_back(probabilities(list[i], child(list_path, i), n));
  }
  return spec;
}

ContractSpec parse_contract(const json& j, const std::string& path, std::size_t n) {
  ContractSpec spec;
  if (j.is_string()) {
    if (j.get<std::string>() != "search") fail(path, "expected \"search\" or an object");
    spec.kind = ContractSpec::Kind::FullSearch;
    return spec;
  }
  if (!j.is_object()) fail(path, "expected \"search\" or an object");
  reject_unknown(j, path, {"u", "d", "fines"});
  if (j.contains("d") == j.contains("fines")) fail(path, "give exactly one of \"d\" and \"fines\"");
  if (j.contains("d")) {
    spec.fines = {positive(j["d"], child(path, "d"))};
  } else {
    spec.fines = numbers(j["fines"], child(path, "fines"));
    if (spec.fines.size() != n) fail(child(path, "fines"), fmt::format("expected {} fines", n));
    for (std::size_t i = 0; i < n; ++i) positive(j["fines"][i], child(child(path, "fines"), i));
  }
  const auto& u = require(j, "u", path);
  if (u.is_string()) {
    if (u.get<std::string>() != "search") fail(child(path, "u"), "expected a number or \"search\"");
    spec.kind = ContractSpec::Kind::PaymentSearch;
  } else {
    spec.u = positive(u, child(path, "u"));
  }
  return spec;
}

}  // namespace

std::string read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ScreenConfig parse_screen_config(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) fail("", "expected an object");
  reject_unknown(j, "", {"n", "variant", "model", "contract", "search", "prior_set", "uninformed", "envelope_resolution"});
  ScreenConfig cfg;
  if (j.contains("variant")) {
    const auto v = string(j["variant"], "/variant");
    if (v == "urn") {
      cfg.variant = Variant::UrnDraw;
    } else if (v != "simple") {
      fail("/variant", "expected \"simple\" or \"urn\"");
    }
  }
  if (cfg.variant == Variant::UrnDraw) {
    cfg.n = 3;
    if (j.contains("n") && integer(j["n"], "/n", 1) != 3) fail("/n", "the urn variant has three states");
  } else {
    cfg.n = static_cast<std::size_t>(integer(require(j, "n", ""), "/n", 2));
  }
  cfg.model = parse_model(require(j, "model", ""), "/model", cfg.n);
  cfg.contract = parse_contract(require(j, "contract", ""), "/contract", cfg.n);
  if (cfg.variant == Variant::UrnDraw) {
    if (cfg.contract.kind == ContractSpec::Kind::FullSearch) fail("/contract", "the urn variant needs a fixed fine d");
    if (cfg.contract.fines.size() != 1) fail("/contract", "the urn variant takes a single fine d");
  }
  if (j.contains("search")) {
    const auto& s = j["search"];
    if (!s.is_object()) fail("/search", "expected an object");
    reject_unknown(s, "/search", {"eta", "margin", "norm", "epsilon", "cost_bound"});
    if (s.contains("eta")) cfg.search.eta = positive(s["eta"], "/search/eta");
    if (s.contains("margin")) cfg.search.margin = number(s["margin"], "/search/margin");
    if (s.contains("norm")) cfg.search.norm = parse_norm(s["norm"], "/search/norm");
    if (s.contains("epsilon")) cfg.search.epsilon = positive(s["epsilon"], "/search/epsilon");
    if (s.contains("cost_bound")) cfg.search.cost_bound = number(s["cost_bound"], "/search/cost_bound");
    if (cfg.search.epsilon.has_value() != cfg.search.cost_bound.has_value()) {
      fail("/search", "give both epsilon and cost_bound or neither");
    }
  }
  if (j.contains("prior_set")) cfg.prior_set = parse_prior_set(j["prior_set"], "/prior_set", cfg.n);
  if (j.contains("uninformed")) {
    const auto& u = j["uninformed"];
    if (u.is_string()) {
      if (u.get<std::string>() != "maximin") fail("/uninformed", "expected \"maximin\" or {\"seu\": [...]}");
    } else if (u.is_object() && u.contains("seu")) {
      cfg.seu_rho = probabilities(u["seu"], "/uninformed/seu", cfg.n);
    } else {
      fail("/uninformed", "expected \"maximin\" or {\"seu\": [...]}");
    }
  }
  if (j.contains("envelope_resolution")) {
    cfg.envelope_resolution = static_cast<int>(integer(j["envelope_resolution"], "/envelope_resolution", 1));
  }
  return cfg;
}

FigureConfig parse_figure_config(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) fail("", "expected an object");
  reject_unknown(j, "", {"model", "priors", "contract", "resolution"});
  FigureConfig cfg;
  if (j.contains("model")) cfg.model = parse_separable_model(j["model"], "/model", true);
  if (j.contains("priors")) {
    cfg.priors = numbers(j["priors"], "/priors");
    for (std::size_t i = 0; i < cfg.priors.size(); ++i) {
      if (cfg.priors[i] < 0.0 || cfg.priors[i] > 1.0) fail(child("/priors", i), "must lie in [0, 1]");
    }
  }
  if (j.contains("resolution")) cfg.resolution = static_cast<int>(integer(j["resolution"], "/resolution", 2));
  if (j.contains("contract")) {
    const auto spec = parse_contract(j["contract"], "/contract", 2);
    if (spec.kind == ContractSpec::Kind::Explicit) {
      if (spec.fines.size() != 1 && spec.fines[0] != spec.fines[1]) fail("/contract", "the figure needs equal fines");
      cfg.contract = Contract(spec.u, spec.fines[0]);
    } else if (spec.kind == ContractSpec::Kind::PaymentSearch) {
      fail("/contract/u", "the figure searches both terms; use \"contract\": \"search\"");
    }
  }
  if (!cfg.contract && cfg.model.kappa == 0.0) fail("/contract", "the contract search needs kappa > 0");
  return cfg;
}

XiConfig parse_xi_config(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) fail("", "expected an object");
  reject_unknown(j, "", {"n", "xi", "model", "samples", "seed", "resolution", "min_fine", "max_fine"});
  XiConfig cfg;
  if (j.contains("n")) cfg.n = static_cast<std::size_t>(integer(j["n"], "/n", 2));
  if (j.contains("xi")) {
    cfg.xi = number(j["xi"], "/xi");
    if (!(cfg.xi > 0.0 && cfg.xi <= 1.0)) fail("/xi", "must lie in (0, 1]");
  }
  if (j.contains("model")) cfg.model = parse_separable_model(j["model"], "/model");
  if (j.contains("samples")) cfg.options.samples = static_cast<std::size_t>(integer(j["samples"], "/samples", 1));
  if (j.contains("seed")) cfg.options.seed = static_cast<std::uint64_t>(integer(j["seed"], "/seed", 0));
  if (j.contains("resolution")) cfg.options.resolution = static_cast<int>(integer(j["resolution"], "/resolution", 1));
  if (j.contains("min_fine")) cfg.options.min_fine = positive(j["min_fine"], "/min_fine");
  if (j.contains("max_fine")) cfg.options.max_fine = positive(j["max_fine"], "/max_fine");
  return cfg;
}

Prop2Config parse_prop2_config(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) fail("", "expected an object");
  reject_unknown(j, "", {"rho", "d_n", "u", "model", "eta", "norm", "resolution"});
  Prop2Config cfg;
  if (j.contains("rho")) cfg.rho = probabilities(j["rho"], "/rho", 0);
  if (cfg.rho.size() < 2) fail("/rho", "needs at least two states");
  if (j.contains("d_n")) cfg.d_n = positive(j["d_n"], "/d_n");
  if (j.contains("u")) cfg.u = positive(j["u"], "/u");
  if (j.contains("model")) cfg.model = parse_model(j["model"], "/model", cfg.rho.size());
  if (j.contains("eta")) cfg.eta = positive(j["eta"], "/eta");
  if (j.contains("norm")) cfg.norm = parse_norm(j["norm"], "/norm");
  if (j.contains("resolution")) cfg.resolution = static_cast<int>(integer(j["resolution"], "/resolution", 1));
  return cfg;
}

std::vector<Belief> build_prior_set(const PriorSetSpec& spec, std::size_t n, PriorSetDescriptor& descriptor) {
  descriptor = {};
  descriptor.kind = spec.kind;
  std::vector<Belief> priors;
  if (spec.kind == "list") {
    for (const auto& p : spec.priors) priors.emplace_back(p);
  } else {
    const int res = spec.resolution > 0 ? spec.resolution : default_envelope_resolution(n);
    descriptor.resolution = res;
    if (spec.kind == "simplex") {
      priors = simplex_grid(n, res);
    } else {
      const Belief center = spec.center ? Belief(*spec.center) : Belief::uniform(n);
      priors = ball_grid(center, spec.eta, res, spec.norm);
      descriptor.center = center;
      descriptor.eta = spec.eta;
      descriptor.norm = spec.norm;
    }
  }
  descriptor.count = priors.size();
  return priors;
}

}  // namespace exptest::app
