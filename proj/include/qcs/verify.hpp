#pragma once

// Numerical checks of the identities the coherent-state construction
// promises: Schrodinger residual, overlaps, smeared completeness,
// normalization, closed-form modes and Hamilton's equations.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcs/states.hpp"

namespace qcs {

struct VerificationReport {
  std::string check;
  std::string scenario;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  nlohmann::json metadata = nlohmann::json::object();
};

/// passed is residual <= tolerance; a NaN residual fails.
VerificationReport make_report(std::string check, std::string scenario, double residual,
                               double tolerance,
                               nlohmann::json metadata = nlohmann::json::object());

nlohmann::json to_json(const VerificationReport& r);
nlohmann::json to_json(std::span<const VerificationReport> reports);

// --- Schrodinger residual ---------------------------------------------------

struct SchrodingerOptions {
  double h_tau = 1e-5;
  std::size_t points = 4001;  // odd, so the halved grid nests
  double half_width = 10.0;   // in units of sigma_q(tau)
  bool include_phase = true;
  bool refine = true;
  /// Coarse residuals below this are accepted without a refinement verdict.
  double floor = 1e-7;
};

struct SchrodingerResult {
  double residual = 0.0;          // coarse level
  double refined_residual = 0.0;  // (h/2, dq/2); equals residual when not refined
  double ratio = 1.0;             // residual / refined_residual
  std::size_t points = 0;
  double h_tau = 0.0;
};

/// max |i d_tau Phi - H Phi| / max |Phi| over the interior of a uniform grid,
/// with a centred difference in tau and fourth-order differences in q.
double schrodinger_residual_on(const ModeTrajectory& m, const CoherentStateSpec& spec, double tau,
                               std::span<const double> q_grid, double h_tau,
                               bool include_phase = true);

/// Grid around the state plus one refinement level. Throws DiagnosticError
/// when the coarse residual exceeds the floor and grows by more than 10%
/// on the refined grid.
SchrodingerResult schrodinger_residual(const ModeTrajectory& m, const CoherentStateSpec& spec,
                                       double tau, const SchrodingerOptions& options = {});

/// d(Im phi)/dtau = alpha Q^2 - (P^2 + Re f/g)/2 - nu P - eps: the residual a
/// state shows when its phase integral is dropped.
double phase_defect(const ModeTrajectory& m, const CoherentStateSpec& spec, double tau);

// --- overlaps ---------------------------------------------------------------

struct OverlapResult {
  complex numerical;
  complex analytic;  // exp(z1* z2 - (|z1|^2 + |z2|^2)/2)
  double difference = 0.0;
  std::size_t points = 0;
};

/// Gaussian probability outside [lo, hi] for mean q_mean, deviation sigma.
double tail_mass(double q_mean, double sigma, double lo, double hi);

/// Trapezoid quadrature of conj(Phi_z1) Phi_z2. An empty grid selects a
/// uniform grid covering both packets. Throws GridError when either packet
/// loses more than 1e-10 of its mass outside the grid.
OverlapResult overlap(const ModeTrajectory& m, double sigma_q, complex z1, complex z2, double tau,
                      std::span<const double> q_grid = {});

// --- completeness -----------------------------------------------------------

struct SamplerConfig {
  std::size_t samples = 1'000'000;
  double radius = 6.0;  // truncation |z - z_psi| <= radius
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0: hardware concurrency
  std::size_t block = 1u << 14;
  double tolerance = 2e-2;
  std::size_t probes = 17;
};

/// Test function on a uniform grid; center is the quantum number the
/// sampler is centred on.
struct TestFunction {
  std::vector<double> grid;
  std::vector<complex> values;
  complex center;
};

/// psi = Phi_z0 of the family at the slice's tau.
TestFunction coherent_test_function(const FamilySlice& slice, complex z0, std::size_t points = 257,
                                    double half_width = 8.0);

/// Real Gaussian with mean q0, momentum p0 and the slice's sigma_q(tau).
TestFunction displaced_gaussian(const FamilySlice& slice, double q0, double p0 = 0.0,
                                std::size_t points = 257, double half_width = 8.0);

struct CompletenessResult {
  std::vector<double> probe_q;
  std::vector<complex> estimate;
  std::vector<complex> reference;  // pi psi(q)
  double relative_error = 0.0;     // max |estimate - reference| / max |reference|
  double statistical_error = 0.0;  // same normalization, one standard deviation
  std::size_t samples = 0;
  std::size_t blocks = 0;
  std::uint64_t seed = 0;
  double radius = 0.0;
};

/// Monte-Carlo estimate of int d^2z Phi_z(q) <Phi_z, psi> at probe points.
/// Samples are drawn in fixed-size blocks with per-block seeds and merged in
/// block order, so the result does not depend on the worker count. Throws
/// UndersamplingError when the statistical error exceeds the tolerance.
CompletenessResult completeness_apply(const ModeTrajectory& m, double sigma_q, double tau,
                                      const TestFunction& psi, const SamplerConfig& config = {});

// --- normalization, invariants, classical motion ---------------------------

/// |int rho dq - 1| by the trapezoid rule.
double norm_check(std::span<const double> q_grid, std::span<const double> rho);
double norm_check(const StateSnapshot& snap);

/// max |2 Re(g* f) - 1| over `samples` uniform tau values on [0, tau_max].
double delta_residual(const ModeTrajectory& m, std::size_t samples = 1000);

/// max |sigma_q^2 sigma_p^2 - sigma_qp^2 - 1/4| on the same samples.
double robertson_schrodinger_residual(const ModeTrajectory& m, std::size_t samples = 1000);

/// Max over interior samples of the Hamilton-equation residuals
///   q' - (p + 2 beta q + nu),   p' + (2 alpha q + 2 beta p + rho),
/// with centred differences of the mean trajectory.
double hamilton_residual(const ModeTrajectory& m, const CoherentStateSpec& spec,
                         std::size_t samples = 400, double h = 1e-4);

// --- closed forms -----------------------------------------------------------

struct SolvableProfile {
  enum class Kind { free_particle, oscillator, sech2 };
  Kind kind = Kind::free_particle;
  double omega = 0.0;
  double omega0 = 0.0;
};

std::string_view to_string(SolvableProfile::Kind kind);

/// Recognizes the three exactly solvable coefficient sets.
std::optional<SolvableProfile> detect_profile(const CoefficientSet& c);

/// Default closed-form tolerance of a profile.
double closed_form_tolerance(SolvableProfile::Kind kind);

/// Mode deviation from the closed form on [0, tau_max] plus the
/// omega0 -> 0 and omega, omega0 -> 0 limits of the sech^2 solution. A
/// missing tolerance uses closed_form_tolerance. Throws DomainError when the
/// coefficients match no solvable profile.
std::vector<VerificationReport> closed_form_agreement(const ModeTrajectory& m,
                                                      const std::string& scenario,
                                                      std::optional<double> tolerance = {},
                                                      std::size_t samples = 1000);

}  // namespace qcs
