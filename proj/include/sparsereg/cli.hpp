#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparsereg/report.hpp"

namespace sparsereg::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kNumerical = 3,
  kIo = 4,
  kCheckFailed = 5,
};

struct RunConfig {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = ".";
  report::Format format = report::Format::csv;
};

struct ParamSpec {
  std::string name;
  std::string default_value;
  std::string help;
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<ParamSpec> params;
};

/// Every subcommand with its accepted keys and defaults.
const std::vector<CommandSpec>& commands();

/// Fills in defaults; throws std::invalid_argument on an unknown command or key.
RunConfig resolve(RunConfig config);

/// Runs one command, writing its tables and manifest.json into output_dir.
/// Messages go to the given streams.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

struct ParseOutcome {
  std::optional<RunConfig> config;
  int exit_code = kOk;
};

/// Command-line front end. SPARSEREG_OUTPUT_DIR supplies output_dir when the
/// flag is absent.
ParseOutcome parse_command_line(int argc, const char* const* argv, std::ostream& out,
                                std::ostream& err);

/// "start:stop:step", inclusive of stop up to rounding.
std::vector<double> parse_grid(const std::string& text);

}  // namespace sparsereg::cli
