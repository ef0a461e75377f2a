#include "qcs/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qcs/errors.hpp"

namespace qcs {

namespace {

constexpr complex I{0.0, 1.0};

void require_sigma(double sigma_q) {
  if (!(sigma_q > 0.0) || !std::isfinite(sigma_q))
    throw DomainError("sigma_q must be positive and finite");
}

// States are defined on coherent-convention modes (mu = 0) whose g(0)
// matches the family parameter.
void require_family(const ModeTrajectory& m, const CoherentStateSpec& spec) {
  require_sigma(spec.sigma_q);
  if (m.initial().convention != Convention::coherent)
    throw DomainError("coherent states need modes solved in the coherent-state convention");
  const double g0 = m.initial().c2.real();
  if (std::abs(g0 - spec.sigma_q) > 1e-12 * spec.sigma_q) {
    std::ostringstream os;
    os << "state sigma_q = " << spec.sigma_q << " does not match the modes' g(0) = " << g0;
    throw DomainError(os.str());
  }
}

double im_phase_of(const PhaseMoments& pm, complex z) {
  const double x = z.real(), y = z.imag();
  return pm.im_1 + pm.im_x * x + pm.im_y * y + pm.im_xx * x * x + pm.im_xy * x * y +
         pm.im_yy * y * y;
}

TrajectoryPoint point_from(const ModeState& s, complex z) {
  const complex shifted = z - s.phi_shift;
  return TrajectoryPoint{s.tau, 2.0 * (std::conj(s.g) * shifted).real(),
                         2.0 * (std::conj(s.f) * shifted).imag()};
}

}  // namespace

CoherentStateSpec CoherentStateSpec::from_initial_data(double q0, double p0, double sigma_q) {
  return CoherentStateSpec{sigma_q, z_from_initial_data(q0, p0, sigma_q)};
}

CoherentStateSpec CoherentStateSpec::from_quantum_number(complex z, double sigma_q) {
  require_sigma(sigma_q);
  return CoherentStateSpec{sigma_q, z};
}

complex z_from_initial_data(double q0, double p0, double sigma_q) {
  require_sigma(sigma_q);
  return complex(q0 / (2.0 * sigma_q), sigma_q * p0);
}

std::pair<double, double> initial_data_from_z(complex z, double sigma_q) {
  require_sigma(sigma_q);
  return {2.0 * sigma_q * z.real(), z.imag() / sigma_q};
}

complex quantum_number_at(const ModeState& m, double q, double p) {
  return m.f * q + I * m.g * p + m.phi_shift;
}

TrajectoryPoint mean_trajectory(const ModeTrajectory& m, const CoherentStateSpec& spec,
                                double tau) {
  require_family(m, spec);
  return point_from(m.at(tau), spec.z);
}

PhaseRecord phase_integral(const ModeTrajectory& m, const CoherentStateSpec& spec, double tau) {
  require_family(m, spec);
  const PhaseMoments pm = m.phase_moments(tau);
  return PhaseRecord{tau, complex(pm.re, im_phase_of(pm, spec.z))};
}

double reference_phase(const CoherentStateSpec& spec) { return -spec.z.real() * spec.z.imag(); }

FamilySlice::FamilySlice(const ModeTrajectory& m, double sigma_q, double tau)
    : sigma_q_(sigma_q), modes_(), moments_(), log_norm_(0.0) {
  require_family(m, CoherentStateSpec{sigma_q, complex{}});
  modes_ = m.at(tau);
  moments_ = m.phase_moments(tau);
  log_norm_ = -0.5 * std::log(std::sqrt(2.0 * std::numbers::pi) * std::abs(modes_.g));
}

TrajectoryPoint FamilySlice::point(complex z) const { return point_from(modes_, z); }

double FamilySlice::im_phase(complex z) const { return im_phase_of(moments_, z); }

GaussianExponent FamilySlice::exponent(complex z, const EvaluationOptions& options) const {
  const TrajectoryPoint pt = point_from(modes_, z);
  double phase = 0.0;
  if (options.include_phase)
    phase = im_phase_of(moments_, z) + reference_phase(CoherentStateSpec{sigma_q_, z});
  return GaussianExponent{modes_.f / modes_.g, pt.q, pt.p, complex(log_norm_, phase)};
}

GaussianExponent cs_exponent(const ModeTrajectory& m, const CoherentStateSpec& spec, double tau,
                             const EvaluationOptions& options) {
  return FamilySlice(m, spec.sigma_q, tau).exponent(spec.z, options);
}

std::vector<double> default_grid(const ModeTrajectory& m, const CoherentStateSpec& spec,
                                 double tau, std::size_t points, double half_width) {
  if (points < 2) throw DomainError("grid needs at least two points");
  const ModeState s = m.at(tau);
  const TrajectoryPoint pt = point_from(s, spec.z);
  const double w = half_width * std::abs(s.g);
  std::vector<double> grid(points);
  for (std::size_t j = 0; j < points; ++j)
    grid[j] = pt.q - w + 2.0 * w * static_cast<double>(j) / static_cast<double>(points - 1);
  return grid;
}

std::vector<complex> evaluate_cs(const ModeTrajectory& m, const CoherentStateSpec& spec,
                                 double tau, std::span<const double> q_grid,
                                 const EvaluationOptions& options) {
  const GaussianExponent e = cs_exponent(m, spec, tau, options);
  std::vector<complex> psi(q_grid.size());
  for (std::size_t j = 0; j < q_grid.size(); ++j) psi[j] = e(q_grid[j]);
  return psi;
}

std::vector<complex> evaluate_cs_ho_closed_form(double omega, double sigma_q, complex z,
                                                double tau, std::span<const double> q_grid) {
  if (!(omega > 0.0)) throw DomainError("closed-form oscillator state needs omega > 0");
  require_sigma(sigma_q);
  const ModePair mp = oscillator_modes(omega, sigma_q, tau);

  // Follow arg g from tau = 0; steps keep each increment well below pi.
  const int steps = 1 + static_cast<int>(std::ceil(8.0 * std::abs(omega * tau) / std::numbers::pi));
  double arg = 0.0;
  complex prev = oscillator_modes(omega, sigma_q, 0.0).g;
  for (int k = 1; k <= steps; ++k) {
    const complex cur = oscillator_modes(omega, sigma_q, tau * k / steps).g;
    arg += std::arg(cur / prev);
    prev = cur;
  }
  const complex inv_sqrt_g =
      std::exp(complex(-0.5 * std::log(std::abs(mp.g)), -0.5 * arg));
  const complex prefactor = std::pow(std::sqrt(2.0 * std::numbers::pi), -0.5) * inv_sqrt_g;

  const complex w = mp.f / mp.g;
  const complex centre = z / mp.f;
  const complex constant = std::conj(mp.f) / mp.f * z * z * 0.5 - 0.5 * std::norm(z);
  std::vector<complex> psi(q_grid.size());
  for (std::size_t j = 0; j < q_grid.size(); ++j) {
    const complex d = q_grid[j] - centre;
    psi[j] = prefactor * std::exp(-0.5 * w * d * d + constant);
  }
  return psi;
}

std::vector<double> density(double q_mean, double sigma, std::span<const double> q_grid) {
  require_sigma(sigma);
  const double peak = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma);
  std::vector<double> rho(q_grid.size());
  for (std::size_t j = 0; j < q_grid.size(); ++j) {
    const double d = q_grid[j] - q_mean;
    rho[j] = peak * std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return rho;
}

std::vector<double> density(const ModeTrajectory& m, const CoherentStateSpec& spec, double tau,
                            std::span<const double> q_grid) {
  require_family(m, spec);
  const ModeState s = m.at(tau);
  return density(point_from(s, spec.z).q, std::abs(s.g), q_grid);
}

Deviations deviations(const ModeState& m) {
  const complex sqp = I * (0.5 - m.g * std::conj(m.f));
  return Deviations{std::abs(m.g), std::abs(m.f), sqp.real(), sqp.imag()};
}

UncertaintyProducts uncertainty_products(const ModeState& m) {
  const Deviations d = deviations(m);
  return UncertaintyProducts{
      d.sigma_q * d.sigma_q * d.sigma_p * d.sigma_p - d.sigma_qp * d.sigma_qp,
      d.sigma_q * d.sigma_p};
}

char to_char(HoCase c) {
  switch (c) {
    case HoCase::a: return 'a';
    case HoCase::b: return 'b';
    case HoCase::c: return 'c';
  }
  return '?';
}

HoCaseTable ho_case_classify(double sigma_q, double omega, double tol) {
  require_sigma(sigma_q);
  if (!(omega > 0.0)) throw DomainError("case analysis needs omega > 0");
  const double s = sigma_q, sp = 0.5 / sigma_q;
  const double pi = std::numbers::pi;
  const double ratio = s * std::sqrt(2.0 * omega);

  HoCaseTable t;
  if (std::abs(ratio - 1.0) <= tol) {
    t.kind = HoCase::a;
    t.sigma_q_min = t.sigma_q_max = Extremum{s, 0.0, 0.0};
    t.sigma_p_min = t.sigma_p_max = Extremum{sp, 0.0, 0.0};
    t.product_min = t.product_max = Extremum{0.5, 0.0, 0.0};
    return t;
  }
  const Extremum at_n_pi{0.0, 0.0, pi / omega};                 // n pi / omega
  const Extremum at_odd_half{0.0, pi / (2.0 * omega), pi / omega};  // (2n+1) pi / (2 omega)
  const auto with = [](Extremum e, double v) {
    e.value = v;
    return e;
  };
  const double turned_q = 1.0 / (2.0 * s * omega);  // sigma_q at sin^2 = 1
  const double turned_p = s * omega;                  // sigma_p at sin^2 = 1
  if (ratio < 1.0) {
    t.kind = HoCase::b;
    t.sigma_q_min = with(at_n_pi, s);
    t.sigma_q_max = with(at_odd_half, turned_q);
    t.sigma_p_min = with(at_odd_half, turned_p);
    t.sigma_p_max = with(at_n_pi, sp);
  } else {
    t.kind = HoCase::c;
    t.sigma_q_min = with(at_odd_half, turned_q);
    t.sigma_q_max = with(at_n_pi, s);
    t.sigma_p_min = with(at_n_pi, sp);
    t.sigma_p_max = with(at_odd_half, turned_p);
  }
  // The product returns to 1/2 whenever sin(2 omega tau) = 0.
  t.product_min = Extremum{0.5, 0.0, pi / (2.0 * omega)};
  t.product_max = Extremum{(1.0 + 4.0 * s * s * s * s * omega * omega) / (8.0 * s * s * omega),
                           pi / (4.0 * omega), pi / (2.0 * omega)};
  return t;
}

QuasiharmonicDecomposition quasiharmonic_decompose(double omega, double omega0, double q0,
                                                   double p0, double tau) {
  if (!(omega > 0.0)) throw DomainError("quasiharmonic form needs omega > 0");
  const double ratio = omega0 / omega;
  const double th = std::tanh(omega0 * tau);
  const double w2 = omega * omega + omega0 * omega0;

  QuasiharmonicDecomposition d;
  d.R = std::sqrt(1.0 + ratio * ratio * th * th);
  d.Theta = std::atan(ratio * th);
  const double cos_part = p0 * omega / w2;  // R0 cos(Theta0)
  d.R0 = std::hypot(q0, cos_part);
  if (d.R0 == 0.0) {
    d.q = 0.0;
    return d;
  }
  d.Theta0 = std::atan2(q0 / d.R0, cos_part / d.R0);
  d.q = d.R0 * d.R * std::sin(omega * tau + d.Theta + *d.Theta0);
  return d;
}

StateSnapshot snapshot(const ModeTrajectory& m, const CoherentStateSpec& spec, double tau,
                       std::size_t points, double half_width) {
  StateSnapshot snap;
  snap.tau = tau;
  snap.q_grid = default_grid(m, spec, tau, points, half_width);
  snap.psi = evaluate_cs(m, spec, tau, snap.q_grid);
  snap.rho.resize(snap.psi.size());
  for (std::size_t j = 0; j < snap.psi.size(); ++j) snap.rho[j] = std::norm(snap.psi[j]);
  const ModeState s = m.at(tau);
  snap.deviations = deviations(s);
  snap.point = point_from(s, spec.z);
  snap.phase = phase_integral(m, spec, tau);
  return snap;
}

SeriesRow series_row(const ModeTrajectory& m, const CoherentStateSpec& spec, double tau) {
  require_family(m, spec);
  const ModeState s = m.at(tau);
  const TrajectoryPoint pt = point_from(s, spec.z);
  const Deviations d = deviations(s);
  const UncertaintyProducts u = uncertainty_products(s);
  return SeriesRow{tau,       pt.q, pt.p, d.sigma_q, d.sigma_p, d.sigma_qp, u.robertson_schrodinger,
                   u.heisenberg, im_phase_of(m.phase_moments(tau), spec.z)};
}

}  // namespace qcs
