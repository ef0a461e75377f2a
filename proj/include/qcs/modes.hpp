#pragma once

// Mode functions of the linear integral of motion A = f q + i g p + phi_shift.
//
//   f' = -2 beta f + 2 i alpha g
//   g' =  i f + 2 beta g
//   phi_shift' = -nu f + i rho g
//
// Re(g* f) is conserved; the coherent-state construction fixes it to 1/2.

#include <complex>
#include <utility>
#include <vector>

#include "qcs/coefficients.hpp"
#include "qcs/ode.hpp"

namespace qcs {

using complex = std::complex<double>;

enum class Convention { generalized, coherent };

/// f(0) = c1, g(0) = c2 with Re(c2* c1) = 1/2.
struct InitialData {
  complex c1;
  complex c2;
  Convention convention = Convention::generalized;

  /// c1 = 1/(2 sigma_q), c2 = sigma_q: the coherent-state family member.
  static InitialData coherent(double sigma_q);
  /// Arbitrary phases; validated on construction.
  static InitialData generalized(complex c1, complex c2);

  /// Throws DomainError when an invariant is violated.
  void validate() const;
  double sigma_q() const { return std::abs(c2); }
};

struct ModeState {
  double tau = 0.0;
  complex f;
  complex g;
  complex phi_shift;
};

/// Quadrature moments of the phase integrand accumulated alongside the modes.
/// For z = x + i y the phase integral is
///   Re phi = re
///   Im phi = im_1 + im_x x + im_y y + im_xx x^2 + im_xy x y + im_yy y^2,
/// which lets one solve serve every quantum number.
struct PhaseMoments {
  double re = 0.0;
  double im_1 = 0.0, im_x = 0.0, im_y = 0.0;
  double im_xx = 0.0, im_xy = 0.0, im_yy = 0.0;
};

/// Dense solution of the mode equations on [0, tau_max]. Immutable.
class ModeTrajectory {
 public:
  static constexpr std::size_t kModeComponents = 6;
  static constexpr std::size_t kComponents = 13;

  ModeTrajectory(CoefficientSet coefficients, InitialData initial, double tolerance,
                 ode::DenseSolution solution);

  ModeState at(double tau) const;
  PhaseMoments phase_moments(double tau) const;

  const CoefficientSet& coefficients() const { return coefficients_; }
  const InitialData& initial() const { return initial_; }
  double tolerance() const { return tolerance_; }
  double tau_max() const { return solution_.t_end(); }
  /// Accepted integrator steps.
  std::span<const double> knots() const { return solution_.knots(); }
  ModeState knot_state(std::size_t i) const;

 private:
  CoefficientSet coefficients_;
  InitialData initial_;
  double tolerance_;
  ode::DenseSolution solution_;
};

/// Integrates the mode equations from 0 to tau_max with local tolerance tol
/// in [1e-14, 1e-6]. Throws IntegrationError on step underflow and
/// ConsistencyError when |Re(g* f) - 1/2| > 100 tol at an accepted step.
ModeTrajectory solve_modes(const CoefficientSet& c, const InitialData& init, double tau_max,
                           double tol);

/// f = 2 i beta g - i g'.
complex f_from_g(const CoefficientSet& c, complex g, complex g_dot, double tau);

/// 2 Re(g* f).
double delta_invariant(const ModeState& m);

struct ModePair {
  complex g;
  complex f;
};

/// Closed-form g for omega^2(tau) = omega^2 + 2 omega0^2 / cosh^2(omega0 tau),
/// with g(0) = B and g'(0) = i A; f follows with beta = 0.
ModePair sech2_modes(double omega, double omega0, complex A, complex B, double tau);

/// Fixed-frequency oscillator modes in the coherent-state convention.
ModePair oscillator_modes(double omega, double sigma_q, double tau);

/// Free particle: g = B + i A tau, f = A.
ModePair free_particle_modes(complex A, complex B, double tau);

}  // namespace qcs
