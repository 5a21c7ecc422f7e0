#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace radmax::cli {

/// A validated command with resolved parameters; execution is a pure function
/// of the plan (plus the seed it carries).
struct RunPlan {
  std::string command;
  nlohmann::json params;
  std::string out_path;          // empty: write to stdout
  std::string format = "json";   // json|csv
  std::uint64_t seed = 12345;
  int threads = 0;
};

/// Invalid flags, unknown subcommands, or out-of-range parameters (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RunPlan parse(const std::vector<std::string>& args);

/// Runs the plan, writing artifacts; returns the process exit code
/// (0 success, 1 computational/runtime failure).
int execute(const RunPlan& plan, std::ostream& out, std::ostream& err);

/// Full entry point: parse + execute with the documented exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace radmax::cli
