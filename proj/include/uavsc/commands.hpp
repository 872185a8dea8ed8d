#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace uavsc {

struct CommandOptions {
  std::string scenario = "paper_default";
  std::filesystem::path out = "out";
  std::uint64_t seed = 1;
  long samples = 0;  ///< 0 keeps the scenario's count
  bool quick = false;

  // optimize / pareto
  std::string mode = "jotb";
  std::optional<double> kappa;
  std::optional<double> period;

  // metrics / rate-vs-power sweeps; unset bounds take per-figure defaults
  std::string figure = "scp";
  std::string state = "h1";
  std::optional<double> from, to;
  int points = 61;
  int slot = 0;
};

struct RunManifest {
  std::string command;
  std::string scenario;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  std::vector<std::string> files;
  double elapsed_s = 0.0;

  std::string to_json() const;
};

struct CommandResult {
  RunManifest manifest;
  int failures = 0;  ///< validation checks that failed
  bool optimization_failed = false;
  std::string message;
};

CommandResult cmd_metrics(const CommandOptions& opt);
CommandResult cmd_rate_vs_power(const CommandOptions& opt);
CommandResult cmd_optimize(const CommandOptions& opt);
CommandResult cmd_pareto(const CommandOptions& opt);
CommandResult cmd_validate(const CommandOptions& opt, std::ostream& log);
CommandResult cmd_gains(const CommandOptions& opt);

/// Runs a named command and maps the outcome to an exit code:
/// 0 ok, 1 config error, 2 optimization failure, 3 validation failure.
int run_command(const std::string& name, const CommandOptions& opt, std::ostream& log, std::ostream& err);

}  // namespace uavsc
