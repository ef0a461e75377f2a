#pragma once

// Coherent-state family built on a solved mode trajectory: quantum numbers,
// mean trajectories, the phase integral, wavefunctions, densities, moments,
// and the fixed-frequency / sech^2 special cases.

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qcs/modes.hpp"

namespace qcs {

/// One member of the sigma_q family, labelled by its quantum number z.
struct CoherentStateSpec {
  double sigma_q = 1.0;
  complex z;

  static CoherentStateSpec from_initial_data(double q0, double p0, double sigma_q);
  static CoherentStateSpec from_quantum_number(complex z, double sigma_q);

  double q0() const { return 2.0 * sigma_q * z.real(); }
  double p0() const { return z.imag() / sigma_q; }
};

/// z = q0 / (2 sigma_q) + i sigma_q p0.
complex z_from_initial_data(double q0, double p0, double sigma_q);
/// Inverse of z_from_initial_data: (q0, p0).
std::pair<double, double> initial_data_from_z(complex z, double sigma_q);

/// z = f q + i g p + phi_shift for phase-space point (q, p) at the modes' tau.
complex quantum_number_at(const ModeState& m, double q, double p);

struct TrajectoryPoint {
  double tau = 0.0;
  double q = 0.0;
  double p = 0.0;
};

/// q = 2 Re[g* (z - phi_shift)], p = 2 Im[f* (z - phi_shift)].
TrajectoryPoint mean_trajectory(const ModeTrajectory& m, const CoherentStateSpec& spec,
                                double tau);

struct PhaseRecord {
  double tau = 0.0;
  complex phase;  // accumulated phase integral, zero at tau = 0
};

/// The phase integral int_0^tau { i alpha q^2 - (i/2)[p^2 + f/g] - i nu p - beta - i eps }
/// along the mean trajectory of spec.
PhaseRecord phase_integral(const ModeTrajectory& m, const CoherentStateSpec& spec, double tau);

/// Constant phase -Re z Im z. Together with the phase integral it fixes the
/// relative phases of the family so that overlaps are exp(z1* z2 - ...).
double reference_phase(const CoherentStateSpec& spec);

struct EvaluationOptions {
  /// false drops i Im(phi) (and the reference phase); used to probe the
  /// defect the phase integral removes.
  bool include_phase = true;
};

/// log Phi(q) = i P q - (w/2)(q - Q)^2 + c0.
struct GaussianExponent {
  complex w;  // f / g
  double Q = 0.0;
  double P = 0.0;
  complex c0;

  complex log_value(double q) const {
    const double d = q - Q;
    return complex(0.0, P * q) - 0.5 * w * (d * d) + c0;
  }
  complex operator()(double q) const { return std::exp(log_value(q)); }
};

GaussianExponent cs_exponent(const ModeTrajectory& m, const CoherentStateSpec& spec, double tau,
                             const EvaluationOptions& options = {});

/// Modes and phase moments of one sigma_q family frozen at one tau; builds
/// the state of any z without touching the dense solution again.
class FamilySlice {
 public:
  FamilySlice(const ModeTrajectory& m, double sigma_q, double tau);

  GaussianExponent exponent(complex z, const EvaluationOptions& options = {}) const;
  TrajectoryPoint point(complex z) const;
  double im_phase(complex z) const;
  const ModeState& modes() const { return modes_; }
  double sigma_q() const { return sigma_q_; }

 private:
  double sigma_q_;
  ModeState modes_;
  PhaseMoments moments_;
  double log_norm_;
};

/// Uniform grid of `points` samples spanning q(tau) +- half_width * sigma_q(tau).
std::vector<double> default_grid(const ModeTrajectory& m, const CoherentStateSpec& spec,
                                 double tau, std::size_t points = 2048,
                                 double half_width = 10.0);

/// Normalized coherent state on q_grid (canonical, branch-free form).
std::vector<complex> evaluate_cs(const ModeTrajectory& m, const CoherentStateSpec& spec,
                                 double tau, std::span<const double> q_grid,
                                 const EvaluationOptions& options = {});

/// Fixed-frequency oscillator state written with (sqrt(2 pi) g)^(-1/2); the
/// square root follows arg g(tau) continuously from tau = 0.
std::vector<complex> evaluate_cs_ho_closed_form(double omega, double sigma_q, complex z,
                                                double tau, std::span<const double> q_grid);

/// Gaussian density with mean q_mean and deviation sigma.
std::vector<double> density(double q_mean, double sigma, std::span<const double> q_grid);
std::vector<double> density(const ModeTrajectory& m, const CoherentStateSpec& spec, double tau,
                            std::span<const double> q_grid);

struct Deviations {
  double sigma_q = 0.0;
  double sigma_p = 0.0;
  double sigma_qp = 0.0;
  /// Imaginary part of i[1/2 - g f*]; zero while Re(g* f) = 1/2 holds.
  double imaginary_residual = 0.0;
};

Deviations deviations(const ModeState& m);

struct UncertaintyProducts {
  double robertson_schrodinger = 0.0;  // sigma_q^2 sigma_p^2 - sigma_qp^2
  double heisenberg = 0.0;             // sigma_q sigma_p
};

UncertaintyProducts uncertainty_products(const ModeState& m);

enum class HoCase { a, b, c };

char to_char(HoCase c);

/// An extremal value attained at tau = first_tau + n * spacing, n = 0, 1, ...
/// spacing == 0 means the value is attained for every tau.
struct Extremum {
  double value = 0.0;
  double first_tau = 0.0;
  double spacing = 0.0;

  double location(int n) const { return first_tau + n * spacing; }
};

struct HoCaseTable {
  HoCase kind = HoCase::a;
  Extremum sigma_q_min, sigma_q_max;
  Extremum sigma_p_min, sigma_p_max;
  Extremum product_min, product_max;  // sigma_q(tau) sigma_p(tau)
};

/// a if |sigma_q sqrt(2 omega) - 1| <= tol, b if below, c otherwise.
HoCaseTable ho_case_classify(double sigma_q, double omega, double tol = 1e-12);

struct QuasiharmonicDecomposition {
  double R = 1.0;
  double Theta = 0.0;
  double R0 = 0.0;
  std::optional<double> Theta0;  // undefined when q0 = p0 = 0
  double q = 0.0;                // R0 R sin(omega tau + Theta + Theta0)
};

/// Amplitude/phase form of the sech^2 mean trajectory with data (q0, p0).
QuasiharmonicDecomposition quasiharmonic_decompose(double omega, double omega0, double q0,
                                                   double p0, double tau);

struct StateSnapshot {
  double tau = 0.0;
  std::vector<double> q_grid;
  std::vector<complex> psi;
  std::vector<double> rho;
  Deviations deviations;
  TrajectoryPoint point;
  PhaseRecord phase;
};

StateSnapshot snapshot(const ModeTrajectory& m, const CoherentStateSpec& spec, double tau,
                       std::size_t points = 2048, double half_width = 10.0);

/// One row of the per-state time series.
struct SeriesRow {
  double tau, q, p, sigma_q, sigma_p, sigma_qp, rs, heisenberg, im_phase;
};

SeriesRow series_row(const ModeTrajectory& m, const CoherentStateSpec& spec, double tau);

}  // namespace qcs
