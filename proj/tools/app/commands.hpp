#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace exptest::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitMismatch = 1,
  kExitInfeasible = 2,
  kExitConfigError = 3,
};

struct RunOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  std::filesystem::path out_dir = ".";
  std::string format = "both";  // csv | svg | both
  // prop2 overrides
  std::optional<std::vector<double>> rho;
  std::optional<double> d_n;
  std::optional<double> u;
};

int cmd_example_one(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_figure(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_screen(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_prop2(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_xi_screen(const RunOptions& options, std::ostream& out, std::ostream& err);

/// Runs a command body and maps library errors to exit codes: infeasible or
/// violated assumptions give 2, bad input gives 3.
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace exptest::app
