#pragma once

// Declarative scenario files (JSON, versioned by the "schema" field) and
// their validation into library inputs.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcs/coefficients.hpp"
#include "qcs/errors.hpp"
#include "qcs/modes.hpp"

namespace qcs {

inline constexpr int kScenarioSchema = 1;

enum class CheckSuite { delta, schrodinger, overlap, completeness, norm, closed_form, hamilton };

std::string_view to_string(CheckSuite s);
std::optional<CheckSuite> parse_suite(std::string_view name);
std::span<const CheckSuite> all_suites();

struct Tolerances {
  double solver = 1e-12;
  double delta = 1e-8;
  double robertson_schrodinger = 1e-10;
  double schrodinger = 1e-6;
  double zeroed_phase = 1e-4;
  double overlap = 1e-8;
  double completeness = 2e-2;
  double norm = 1e-8;
  double hamilton = 1e-6;
  std::optional<double> closed_form;  // per-profile default when absent
};

struct SchrodingerSettings {
  std::vector<double> probes;  // empty: mid-interval
  double h_tau = 1e-5;
  std::size_t points = 4001;
  double half_width = 10.0;
  bool zeroed_phase = true;  // also report the dropped-phase defect
};

struct OverlapSettings {
  std::vector<double> taus = {0.0, 1.0, 3.0};
  std::size_t z_points = 5;  // per axis, components in [-z_max/sqrt2, z_max/sqrt2]
  double z_max = 2.0;
};

struct CompletenessTest {
  enum class Kind { coherent, gaussian };
  Kind kind = Kind::coherent;
  complex z;
  double q0 = 0.0;
  double p0 = 0.0;
};

struct CompletenessSettings {
  std::size_t samples = 1'000'000;
  double radius = 6.0;
  std::optional<double> tau;  // default min(1, tau_max)
  unsigned workers = 0;
  std::vector<CompletenessTest> tests;  // empty: Phi_0 and a Gaussian at q0 = 1
};

struct Scenario {
  std::string id;
  std::string description;
  CoefficientSet coefficients;
  double sigma_q = 1.0;
  std::vector<complex> states;  // quantum numbers
  double tau_max = 10.0;
  std::size_t tau_samples = 1001;
  std::size_t grid_points = 2048;
  double grid_half_width = 10.0;
  Tolerances tolerances;
  std::uint64_t seed = 1;
  std::vector<double> snapshots;
  std::vector<CheckSuite> checks;
  SchrodingerSettings schrodinger;
  OverlapSettings overlap;
  CompletenessSettings completeness;
};

/// Parse or validation failure, located in the source text when possible.
class ScenarioError : public Error {
 public:
  ScenarioError(const std::string& what, std::string field, std::size_t line, std::size_t column)
      : Error(what), field_(std::move(field)), line_(line), column_(column) {}
  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }  // 0 when unknown
  std::size_t column() const noexcept { return column_; }

 private:
  std::string field_;
  std::size_t line_;
  std::size_t column_;
};

/// Letters, digits, '_', '-', '.'; not "." or "..".
bool is_filesystem_safe(std::string_view id);

/// `origin` prefixes diagnostics, usually the file path.
Scenario parse_scenario(std::string_view text, const std::string& origin = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

/// True when closed_form_agreement applies to the coefficients.
bool has_closed_form(const Scenario& s);

/// Byte offset of every JSON pointer's key (or array element) in a valid
/// JSON text. Used to place validation diagnostics.
std::vector<std::pair<std::string, std::size_t>> json_locations(std::string_view text);

}  // namespace qcs
