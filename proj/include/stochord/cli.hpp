#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stochord/io.hpp"

namespace stochord {

/// Everything a subcommand needs. Only result-affecting fields are embedded
/// in reports; `out` and `threads` are not, so a rerun elsewhere or with a
/// different worker count reproduces the report byte for byte.
struct CommandConfig {
  std::string subcommand;  // indices | galton | test-gamma | simulate-table | bridge-lab | limit-law | quantile-table

  std::string x, y;  // sample CSV paths
  std::string f, g;  // model specs: inline JSON, JSON file or sample CSV
  bool header = false;

  std::optional<double> gamma0;
  double alpha = kDefaultAlpha;
  std::optional<std::size_t> B;
  std::size_t grid = kDefaultGridSize;
  std::string grid_layout = "uniform";
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string out = ".";

  // simulate-table
  std::vector<int> cases;
  std::vector<std::string> families;
  std::vector<double> gamma0s;
  std::vector<std::size_t> sizes;
  std::string scenario;  // user scenario JSON

  // bridge-lab
  std::string mode = "occupation";
  std::size_t paths = 10000;
  std::size_t bridge_m = kDefaultBridgeGrid;
  std::string subset = "0:1";
  std::optional<std::size_t> n, m;
  double delta = 0.1;

  // limit-law
  std::string kind = "gamma";
  double lambda = 0.5;
  std::optional<double> tolerance;

  /// Throws ParameterError when a required field is missing or out of range.
  void validate() const;
};

/// Reads STOCHORD_SEED when --seed is absent; 1 when neither is set.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed);

Json config_to_json(const CommandConfig& config);
CommandConfig config_from_json(const Json& j);

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitData = 3, kExitNumeric = 4 };

/// Runs one validated subcommand: writes reports into config.out and prints
/// the main JSON report to `out`. Errors go to `err` as one JSON object and
/// select the exit code.
int run_command(const CommandConfig& config, std::ostream& out, std::ostream& err);

/// Re-executes the configuration embedded in a report.
int rerun_report(const std::string& report_path, const std::string& out_dir, unsigned threads, std::ostream& out,
                 std::ostream& err);

/// Full command line front end.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stochord
