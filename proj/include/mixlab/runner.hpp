#pragma once

#include <cstdint>
#include <string>

namespace mixlab {

// One CLI invocation: a subcommand plus the shared flags.  An empty output
// path means stdout.
struct RunConfig {
  std::string subcommand;
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 1;
  int threads = 1;
};

// Dispatches a subcommand; returns a process exit code.
int run(const RunConfig& config);

}  // namespace mixlab
