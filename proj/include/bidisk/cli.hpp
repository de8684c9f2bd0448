#pragma once

// Command-line front end, callable in-process.

#include <string>
#include <vector>

namespace bidisk::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalFault = 2 };

struct CommandResult {
  int exit_code = kOk;
  /// Primary output (report, CSV, ...); written to --out when given, else stdout.
  std::string out;
  /// Diagnostics for stderr.
  std::string err;
  /// Target file from --out, empty for stdout.
  std::string out_path;
};

/// Parses and runs one command. `args` excludes the program name. `seed` offsets
/// the quasi-random designs (the executable reads it from BIDISK_JULIA_SEED).
/// Never throws.
CommandResult run(const std::vector<std::string>& args, std::size_t seed = 0);

/// Parses a BIDISK_JULIA_SEED value; throws bidisk::ConfigError when malformed.
std::size_t parse_seed(const std::string& text);

}  // namespace bidisk::cli
