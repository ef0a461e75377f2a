#include "qcs/modes.hpp"

#include <cmath>
#include <sstream>

#include "qcs/errors.hpp"

namespace qcs {

namespace {

constexpr complex I{0.0, 1.0};

complex load(std::span<const double> y, std::size_t k) { return {y[2 * k], y[2 * k + 1]}; }

void store(std::span<double> y, std::size_t k, complex v) {
  y[2 * k] = v.real();
  y[2 * k + 1] = v.imag();
}

}  // namespace

InitialData InitialData::coherent(double sigma_q) {
  if (!(sigma_q > 0.0) || !std::isfinite(sigma_q))
    throw DomainError("sigma_q must be positive and finite");
  return InitialData{complex(0.5 / sigma_q, 0.0), complex(sigma_q, 0.0), Convention::coherent};
}

InitialData InitialData::generalized(complex c1, complex c2) {
  InitialData d{c1, c2, Convention::generalized};
  d.validate();
  return d;
}

void InitialData::validate() const {
  if (!std::isfinite(c1.real()) || !std::isfinite(c1.imag()) || !std::isfinite(c2.real()) ||
      !std::isfinite(c2.imag()))
    throw DomainError("initial mode values must be finite");
  if (std::abs(c1) == 0.0 || std::abs(c2) == 0.0)
    throw DomainError("initial mode values f(0) and g(0) must be nonzero");
  const double re = (std::conj(c2) * c1).real();
  if (std::abs(re - 0.5) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "initial data violate Re(g(0)* f(0)) = 1/2 (got " << re << ")";
    throw DomainError(os.str());
  }
  if (convention == Convention::coherent) {
    if (c1.imag() != 0.0 || c2.imag() != 0.0 || !(c1.real() > 0.0) || !(c2.real() > 0.0))
      throw DomainError("coherent-state convention needs real positive f(0), g(0)");
  }
}

ModeTrajectory::ModeTrajectory(CoefficientSet coefficients, InitialData initial,
                               double tolerance, ode::DenseSolution solution)
    : coefficients_(std::move(coefficients)),
      initial_(initial),
      tolerance_(tolerance),
      solution_(std::move(solution)) {}

ModeState ModeTrajectory::at(double tau) const {
  double y[kComponents];
  solution_.evaluate(tau, y);
  const std::span<const double> v(y, kComponents);
  return ModeState{tau, load(v, 0), load(v, 1), load(v, 2)};
}

ModeState ModeTrajectory::knot_state(std::size_t i) const {
  const auto y = solution_.knot_value(i);
  return ModeState{solution_.knots()[i], load(y, 0), load(y, 1), load(y, 2)};
}

PhaseMoments ModeTrajectory::phase_moments(double tau) const {
  double y[kComponents];
  solution_.evaluate(tau, y);
  return PhaseMoments{y[6], y[7], y[8], y[9], y[10], y[11], y[12]};
}

ModeTrajectory solve_modes(const CoefficientSet& c, const InitialData& init, double tau_max,
                           double tol) {
  init.validate();
  if (!(tol >= 1e-14 && tol <= 1e-6))
    throw DomainError("solver tolerance must lie in [1e-14, 1e-6]");
  if (!(tau_max > 0.0) || !std::isfinite(tau_max))
    throw DomainError("tau_max must be positive and finite");
  if (tau_max > c.tau_max() * (1.0 + 1e-12))
    throw RangeError("tau_max exceeds the coefficient interval");

  const auto rhs = [&c](double tau, std::span<const double> y, std::span<double> dy) {
    const CoefficientValues k = c.at(tau);
    const complex f = load(y, 0), g = load(y, 1), phi = load(y, 2);
    store(dy, 0, -2.0 * k.beta * f + 2.0 * I * k.alpha * g);
    store(dy, 1, I * f + 2.0 * k.beta * g);
    store(dy, 2, -k.nu * f + I * k.rho * g);

    // Mean trajectory is affine in (x, y) = (Re z, Im z).
    const double qc = -2.0 * (std::conj(g) * phi).real();
    const double qx = 2.0 * g.real(), qy = 2.0 * g.imag();
    const double pc = -2.0 * (std::conj(f) * phi).imag();
    const double px = -2.0 * f.imag(), py = 2.0 * f.real();
    const complex w = f / g;

    dy[6] = 0.5 * w.imag() - k.beta;
    dy[7] = k.alpha * qc * qc - 0.5 * pc * pc - k.nu * pc - k.eps - 0.5 * w.real();
    dy[8] = 2.0 * k.alpha * qc * qx - pc * px - k.nu * px;
    dy[9] = 2.0 * k.alpha * qc * qy - pc * py - k.nu * py;
    dy[10] = k.alpha * qx * qx - 0.5 * px * px;
    dy[11] = 2.0 * k.alpha * qx * qy - px * py;
    dy[12] = k.alpha * qy * qy - 0.5 * py * py;
  };

  double y0[ModeTrajectory::kComponents] = {};
  y0[0] = init.c1.real();
  y0[1] = init.c1.imag();
  y0[2] = init.c2.real();
  y0[3] = init.c2.imag();

  ode::Options opt;
  opt.rtol = tol;
  opt.atol = tol;
  ode::DenseSolution sol;
  try {
    sol = ode::dopri5(rhs, y0, 0.0, tau_max, opt);
  } catch (const EvaluationError& e) {
    throw IntegrationError(std::string("mode integration failed: ") + e.what(), 0.0);
  }

  ModeTrajectory traj(c, init, tol, std::move(sol));
  for (std::size_t i = 0; i < traj.knots().size(); ++i) {
    const ModeState m = traj.knot_state(i);
    const double drift = std::abs((std::conj(m.g) * m.f).real() - 0.5);
    if (drift > 100.0 * tol) {
      std::ostringstream os;
      os.precision(6);
      os << "delta invariant drifted by " << drift << " at tau = " << m.tau
         << " (limit " << 100.0 * tol << ")";
      throw ConsistencyError(os.str());
    }
  }
  return traj;
}

complex f_from_g(const CoefficientSet& c, complex g, complex g_dot, double tau) {
  const double beta = c.at(tau).beta;
  return 2.0 * I * beta * g - I * g_dot;
}

double delta_invariant(const ModeState& m) { return 2.0 * (std::conj(m.g) * m.f).real(); }

ModePair sech2_modes(double omega, double omega0, complex A, complex B, double tau) {
  if (!(omega > 0.0)) throw DomainError("sech2_modes needs omega > 0");
  const double w2 = omega * omega + omega0 * omega0;
  const double th = std::tanh(omega0 * tau);
  const double ch = std::cosh(omega0 * tau);
  const double sech2 = 1.0 / (ch * ch);
  const double co = std::cos(omega * tau), si = std::sin(omega * tau);

  const complex cos_coef = I * A * omega0 * th / w2 + B;
  const complex sin_coef = I * A * omega * omega / w2 - B * omega0 * th;
  const complex g = cos_coef * co + sin_coef * si / omega;

  const complex cos_coef_dot = I * A * omega0 * omega0 * sech2 / w2;
  const complex sin_coef_dot = -B * omega0 * omega0 * sech2;
  const complex g_dot = cos_coef_dot * co - cos_coef * omega * si + sin_coef_dot * si / omega +
                        sin_coef * co;
  return ModePair{g, -I * g_dot};
}

ModePair oscillator_modes(double omega, double sigma_q, double tau) {
  if (!(omega > 0.0) || !(sigma_q > 0.0))
    throw DomainError("oscillator_modes needs omega > 0 and sigma_q > 0");
  const double co = std::cos(omega * tau), si = std::sin(omega * tau);
  return ModePair{complex(sigma_q * co, si / (2.0 * sigma_q * omega)),
                  complex(co / (2.0 * sigma_q), sigma_q * omega * si)};
}

ModePair free_particle_modes(complex A, complex B, double tau) {
  return ModePair{B + I * A * tau, A};
}

}  // namespace qcs
