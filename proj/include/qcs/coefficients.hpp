#pragma once

// Coefficient functions of the dimensionless quadratic Hamiltonian
//
//   H = p^2/2 + alpha q^2 + beta (q p + p q) + rho q + nu p + eps,
//
// the map from a dimensional Hamiltonian onto that form, and the effective
// oscillator frequency omega^2 = 2 alpha - 4 beta^2 - 2 beta'.

#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qcs {

/// Natural cubic spline through strictly increasing knots. Reproduces the
/// knot values exactly and is C2 between them.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  std::span<const double> knots() const { return x_; }
  std::span<const double> values() const { return y_; }

 private:
  std::size_t segment(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

/// Static potential V(q) used to build coefficients from a stationary problem.
class Potential {
 public:
  struct Polynomial {
    std::vector<double> coefficients;  // c0 + c1 q + c2 q^2 + ...
  };
  struct Sech2 {
    double amplitude;  // V = amplitude / cosh^2(width q)
    double width;
  };
  struct Tabulated {
    std::shared_ptr<const CubicSpline> spline;
  };

  static Potential polynomial(std::vector<double> coefficients);
  static Potential sech2(double amplitude, double width);
  static Potential tabulated(std::vector<double> q, std::vector<double> v);

  double operator()(double q) const;
  double derivative(double q) const;

 private:
  using Repr = std::variant<Polynomial, Sech2, Tabulated>;
  explicit Potential(Repr repr) : repr_(std::move(repr)) {}
  Repr repr_;
};

enum class CoefficientKind { constant, harmonic, sech2, tabulated, stationary };

std::string_view to_string(CoefficientKind kind);

/// One real coefficient function of tau. Immutable once built.
class CoefficientFunction {
 public:
  /// c(tau) = value
  static CoefficientFunction constant(double value);
  /// c(tau) = offset + amplitude cos(frequency tau + phase)
  static CoefficientFunction harmonic(double offset, double amplitude,
                                      double frequency, double phase = 0.0);
  /// c(tau) = (omega^2 + 2 omega0^2 / cosh^2(omega0 tau)) / 2, i.e. half the
  /// reflectionless sech^2 frequency profile; used as alpha.
  static CoefficientFunction sech2(double omega, double omega0);
  /// Cubic interpolation of samples on a strictly increasing tau grid.
  static CoefficientFunction tabulated(std::vector<double> tau,
                                       std::vector<double> values);
  /// c(tau) = (V(tau) - E) / 2, the alpha that identifies g'' + omega^2 g = 0
  /// with a stationary problem in potential V at energy E.
  static CoefficientFunction stationary(Potential potential, double energy);

  CoefficientFunction() : CoefficientFunction(constant(0.0)) {}

  double operator()(double tau) const;
  /// d/dtau. Closed forms are differentiated analytically; tabulated data uses
  /// a centred difference with the local knot spacing (one-sided at the ends).
  double derivative(double tau) const;

  CoefficientKind kind() const;
  bool is_zero() const;
  /// Tau interval the function is defined on (infinite for closed forms).
  double domain_begin() const;
  double domain_end() const;

  struct Constant {
    double value;
  };
  struct Harmonic {
    double offset, amplitude, frequency, phase;
  };
  struct Sech2 {
    double omega, omega0;
  };
  struct Tabulated {
    std::shared_ptr<const CubicSpline> spline;
  };
  struct Stationary {
    Potential potential;
    double energy;
  };
  using Repr = std::variant<Constant, Harmonic, Sech2, Tabulated, Stationary>;

  const Repr& repr() const { return repr_; }

 private:
  explicit CoefficientFunction(Repr repr) : repr_(std::move(repr)) {}
  Repr repr_;
};

/// Values of the five coefficients at one tau.
struct CoefficientValues {
  double alpha = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  double nu = 0.0;
  double eps = 0.0;
};

/// The five coefficient functions together with the interval [0, tau_max]
/// they are used on.
class CoefficientSet {
 public:
  CoefficientSet() = default;
  CoefficientSet(CoefficientFunction alpha, CoefficientFunction beta,
                 CoefficientFunction rho, CoefficientFunction nu,
                 CoefficientFunction eps,
                 double tau_max = std::numeric_limits<double>::infinity());

  static CoefficientSet free_particle(double tau_max);
  static CoefficientSet oscillator(double omega, double tau_max);
  static CoefficientSet sech2(double omega, double omega0, double tau_max);

  /// Range-checked, finiteness-checked evaluation.
  CoefficientValues at(double tau) const;
  double beta_derivative(double tau) const;

  const CoefficientFunction& alpha() const { return alpha_; }
  const CoefficientFunction& beta() const { return beta_; }
  const CoefficientFunction& rho() const { return rho_; }
  const CoefficientFunction& nu() const { return nu_; }
  const CoefficientFunction& eps() const { return eps_; }
  double tau_max() const { return tau_max_; }

  /// Same functions on a different interval; re-checks tabulated coverage.
  CoefficientSet with_tau_max(double tau_max) const;

 private:
  void check_range(double tau) const;

  CoefficientFunction alpha_, beta_, rho_, nu_, eps_;
  double tau_max_ = std::numeric_limits<double>::infinity();
};

/// omega^2(tau) = 2 alpha - 4 beta^2 - 2 beta'. May be negative.
double effective_frequency(const CoefficientSet& c, double tau);

/// alpha = (V - E)/2 and all other coefficients zero, so that
/// effective_frequency returns V(tau) - E.
CoefficientSet from_stationary_potential(
    Potential potential, double energy,
    double tau_max = std::numeric_limits<double>::infinity());

/// Dimensional Hamiltonian
///   H_x = r1 p^2 + r2 x^2 + r3 (x p + p x) + r4 x + r5 p + r6
/// with coefficients given as functions of dimensional time t.
struct DimensionalSystem {
  std::function<double(double)> r1, r2, r3, r4, r5, r6;
  double length = 1.0;
  double hbar = 1.0;
};

/// Monotone map between dimensional time t and tau = (2 hbar / l^2) int_0^t r1.
class TimeMap {
 public:
  TimeMap(std::function<double(double)> r1, double scale,
          std::vector<double> t_knots, std::vector<double> tau_knots);

  double tau_of_t(double t) const;
  double t_of_tau(double tau) const;
  double t_max() const { return t_.back(); }
  double tau_max() const { return tau_.back(); }
  std::span<const double> t_knots() const { return t_; }
  std::span<const double> tau_knots() const { return tau_; }

 private:
  double rate(double t) const { return scale_ * r1_(t); }

  std::function<double(double)> r1_;
  double scale_;  // 2 hbar / l^2
  std::vector<double> t_;
  std::vector<double> tau_;
};

struct NondimensionalSystem {
  CoefficientSet coefficients;
  TimeMap time_map;
};

/// Converts a dimensional system on [0, t_max] into tabulated dimensionless
/// coefficients on the tau grid induced by n_samples uniform t samples.
NondimensionalSystem nondimensionalize(const DimensionalSystem& sys,
                                       double t_max, std::size_t n_samples);

}  // namespace qcs
