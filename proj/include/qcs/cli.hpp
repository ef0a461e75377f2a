#pragma once

// `qcs run` / `qcs check`: solve a scenario, write series, snapshots and
// reports, and turn check verdicts into exit codes.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qcs/scenario.hpp"
#include "qcs/verify.hpp"

namespace qcs::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

/// Bad command line: unknown suite, malformed list, missing scenario.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunOptions {
  std::filesystem::path out_dir = "out";
  std::optional<double> tolerance;  // replaces every verification tolerance
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<double>> snapshots;
  std::optional<std::vector<CheckSuite>> checks;
  bool write_series = true;  // false for `check`: reports only
};

struct RunResult {
  std::filesystem::path directory;
  std::vector<VerificationReport> reports;
  nlohmann::json summary;

  bool passed() const;
};

/// Applies command-line overrides; throws ScenarioError naming the flag when
/// an override violates a scenario invariant.
void apply_overrides(Scenario& s, const RunOptions& options);

/// Runs the selected suites on a solved scenario.
std::vector<VerificationReport> run_checks(const Scenario& s, const ModeTrajectory& modes,
                                           std::span<const CheckSuite> suites);

/// Solves, writes the output files under out_dir/<id>/ and runs the checks.
/// Prints one line per report to `log`.
RunResult run_scenario(const Scenario& s, const RunOptions& options, std::ostream& log);

/// Shortest round-trip decimal form; the output files rely on it for
/// byte-identical reruns.
std::string format_double(double x);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::vector<double> parse_number_list(std::string_view text);
std::vector<CheckSuite> parse_suite_list(std::span<const std::string> names);

int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qcs::cli
