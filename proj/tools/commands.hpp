#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace ridge::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kNumericalFailure = 2,
  kNotConverged = 3,
  kVerifyFailed = 4,
  kTooLarge = 5,
};

/// Largest q^n the oracle accepts.
inline constexpr double kOracleMaxNodes = 1e6;

struct SolveOptions {
  std::filesystem::path outdir = "ridge_results";
  std::optional<std::size_t> q;
  std::optional<std::size_t> dense;
  bool force_fixed_point = false;
};

int cmd_solve(const std::string& config_path, const SolveOptions& opts, std::ostream& out,
              std::ostream& err);
int cmd_verify(const std::string& config_path, const std::filesystem::path& results,
               double threshold, std::ostream& out, std::ostream& err);
int cmd_oracle(const std::string& config_path, bool force_fixed_point, std::ostream& out,
               std::ostream& err);
int cmd_export(const std::filesystem::path& results, std::size_t points, std::ostream& out,
               std::ostream& err);

/// Applies RIDGEAPPROX_THREADS (unset or 0: all processors). Throws
/// ConfigError on a malformed value.
void apply_thread_env();

/// Full command line: `ridgeapprox <command> ...`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ridge::cli
