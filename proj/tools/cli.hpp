#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "versa/state_machine.hpp"

namespace versa::cli {

enum ExitCode : int { kOk = 0, kHardError = 1, kUnresolved = 2 };

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::optional<std::string> profile;
  std::optional<std::string> table_path;
  std::size_t window = kDefaultWindowRadius;
  double carry_threshold = kDefaultCarryThreshold;
  std::string out_dir = "versa_out";
  std::string format = "csv";
  bool simplified = false;
  unsigned jobs = 1;
};

/// Entry point shared by the binary and the tests. Never calls exit().
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace versa::cli
