#include <cstdlib>
#include <fstream>
#include <iostream>

#include "bidisk/cli.hpp"
#include "bidisk/errors.hpp"

int main(int argc, char** argv) {
  std::size_t seed = 0;
  if (const char* env = std::getenv("BIDISK_JULIA_SEED"); env != nullptr && *env != '\0') {
    try {
      seed = bidisk::cli::parse_seed(env);
    } catch (const bidisk::ConfigError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return bidisk::cli::kConfigError;
    }
  }
  const std::vector<std::string> args(argv + 1, argv + argc);
  const bidisk::cli::CommandResult r = bidisk::cli::run(args, seed);
  std::cerr << r.err;
  if (r.exit_code != bidisk::cli::kOk || r.out_path.empty()) {
    std::cout << r.out;
    return r.exit_code;
  }
  std::ofstream out(r.out_path, std::ios::binary);
  out << r.out;
  if (!out) {
    std::cerr << "error: cannot write '" << r.out_path << "'\n";
    return bidisk::cli::kConfigError;
  }
  return r.exit_code;
}
