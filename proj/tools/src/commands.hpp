#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "metriplectic/dynamics.hpp"

namespace metriplectic::cli {

/// Process exit codes shared by all subcommands.
enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,        // simulate/compare: config error; verify: suite failed
  kRuntimeError = 2,   // simulate/compare: run left the domain; verify: bad arguments
};

struct SimulateArgs {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out_dir;
};

struct VerifyArgs {
  std::string system;
  std::optional<std::filesystem::path> spec;
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t cases = 100;
  std::size_t jobs = 1;
  bool use_fd = false;
};

[[nodiscard]] int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
[[nodiscard]] int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);
[[nodiscard]] int cmd_compare(const SimulateArgs& args, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
[[nodiscard]] int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Column names of the trajectory CSV for a system.
[[nodiscard]] std::vector<std::string> csv_header(const SystemSpec& spec);

/// Writes the accepted part of a trajectory; an aborted run gets a final
/// "# truncated ..." marker row.
void write_csv(std::ostream& os, const SystemSpec& spec, const Trajectory& traj);

/// "{:.17g}" formatting used for every number in CSV output.
[[nodiscard]] std::string format_number(double v);

}  // namespace metriplectic::cli
