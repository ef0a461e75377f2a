#include "qcs/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "qcs/errors.hpp"

namespace qcs {

namespace {

constexpr complex I{0.0, 1.0};

double uniform_spacing(std::span<const double> grid) {
  if (grid.size() < 5) throw GridError("finite-difference grid needs at least five points");
  const double dq = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  if (!(dq > 0.0)) throw GridError("grid must be strictly increasing");
  for (std::size_t j = 1; j < grid.size(); ++j)
    if (std::abs(grid[j] - grid[j - 1] - dq) > 1e-9 * dq)
      throw GridError("finite-difference grid must be uniform");
  return dq;
}

std::vector<double> uniform(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j)
    g[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n - 1);
  return g;
}

std::vector<double> samples_on(double a, double b, std::size_t n) {
  if (n < 2) return {a};
  return uniform(a, b, n);
}

// 2x2 real sample of the standard normal restricted to |d| <= radius.
complex truncated_normal(std::mt19937_64& rng, std::normal_distribution<double>& n01,
                         double radius) {
  for (;;) {
    const complex d(n01(rng), n01(rng));
    if (std::abs(d) <= radius) return d;
  }
}

struct BlockSums {
  std::vector<complex> sum;
  std::vector<double> sum_sq;
};

}  // namespace

VerificationReport make_report(std::string check, std::string scenario, double residual,
                               double tolerance, nlohmann::json metadata) {
  VerificationReport r;
  r.check = std::move(check);
  r.scenario = std::move(scenario);
  r.residual = residual;
  r.tolerance = tolerance;
  r.passed = residual <= tolerance;
  r.metadata = std::move(metadata);
  return r;
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["check"] = r.check;
  j["scenario"] = r.scenario;
  j["residual"] = std::isfinite(r.residual) ? nlohmann::json(r.residual) : nlohmann::json();
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed;
  j["metadata"] = r.metadata;
  return j;
}

nlohmann::json to_json(std::span<const VerificationReport> reports) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : reports) a.push_back(to_json(r));
  return a;
}

double schrodinger_residual_on(const ModeTrajectory& m, const CoherentStateSpec& spec, double tau,
                               std::span<const double> q_grid, double h_tau,
                               bool include_phase) {
  if (!(h_tau > 0.0)) throw DomainError("h_tau must be positive");
  if (tau - h_tau < 0.0 || tau + h_tau > m.tau_max())
    throw RangeError("Schrodinger probe tau must lie at least h_tau inside the solved interval");
  const double dq = uniform_spacing(q_grid);
  const EvaluationOptions opt{include_phase};
  const auto before = evaluate_cs(m, spec, tau - h_tau, q_grid, opt);
  const auto now = evaluate_cs(m, spec, tau, q_grid, opt);
  const auto after = evaluate_cs(m, spec, tau + h_tau, q_grid, opt);
  const CoefficientValues k = m.coefficients().at(tau);

  double peak = 0.0, worst = 0.0;
  for (const complex v : now) peak = std::max(peak, std::abs(v));
  for (std::size_t j = 2; j + 2 < q_grid.size(); ++j) {
    const double q = q_grid[j];
    const complex d1 = (-now[j + 2] + 8.0 * now[j + 1] - 8.0 * now[j - 1] + now[j - 2]) / (12.0 * dq);
    const complex d2 = (-now[j + 2] + 16.0 * now[j + 1] - 30.0 * now[j] + 16.0 * now[j - 1] -
                        now[j - 2]) /
                       (12.0 * dq * dq);
    // (qp + pq) Phi = -i (2 q Phi' + Phi)
    const complex h_phi = -0.5 * d2 + k.alpha * q * q * now[j] -
                          I * k.beta * (2.0 * q * d1 + now[j]) + k.rho * q * now[j] -
                          I * k.nu * d1 + k.eps * now[j];
    const complex dt = (after[j] - before[j]) / (2.0 * h_tau);
    worst = std::max(worst, std::abs(I * dt - h_phi));
  }
  return worst / peak;
}

SchrodingerResult schrodinger_residual(const ModeTrajectory& m, const CoherentStateSpec& spec,
                                       double tau, const SchrodingerOptions& options) {
  if (options.points < 5) throw GridError("Schrodinger grid needs at least five points");
  SchrodingerResult r;
  r.points = options.points;
  r.h_tau = options.h_tau;
  const auto coarse = default_grid(m, spec, tau, options.points, options.half_width);
  r.residual = schrodinger_residual_on(m, spec, tau, coarse, options.h_tau, options.include_phase);
  r.refined_residual = r.residual;
  if (!options.refine) return r;

  const auto fine = default_grid(m, spec, tau, 2 * options.points - 1, options.half_width);
  r.refined_residual =
      schrodinger_residual_on(m, spec, tau, fine, 0.5 * options.h_tau, options.include_phase);
  r.ratio = r.refined_residual > 0.0 ? r.residual / r.refined_residual
                                     : std::numeric_limits<double>::infinity();
  if (r.residual <= options.floor) return r;
  if (r.ratio >= 0.9) return r;
  std::ostringstream os;
  os.precision(3);
  os << "Schrodinger residual grows under refinement at tau = " << tau
     << ": " << r.residual << " -> " << r.refined_residual << " (ratio " << r.ratio
     << "); dominated by rounding in the stencils";
  throw DiagnosticError(os.str());
}

double phase_defect(const ModeTrajectory& m, const CoherentStateSpec& spec, double tau) {
  const ModeState s = m.at(tau);
  const TrajectoryPoint pt = mean_trajectory(m, spec, tau);
  const CoefficientValues k = m.coefficients().at(tau);
  const complex w = s.f / s.g;
  return k.alpha * pt.q * pt.q - 0.5 * (pt.p * pt.p + w.real()) - k.nu * pt.p - k.eps;
}

double tail_mass(double q_mean, double sigma, double lo, double hi) {
  const double s = std::sqrt(2.0) * sigma;
  return 0.5 * std::erfc((q_mean - lo) / s) + 0.5 * std::erfc((hi - q_mean) / s);
}

OverlapResult overlap(const ModeTrajectory& m, double sigma_q, complex z1, complex z2, double tau,
                      std::span<const double> q_grid) {
  const FamilySlice slice(m, sigma_q, tau);
  const double width = std::abs(slice.modes().g);
  const GaussianExponent e1 = slice.exponent(z1), e2 = slice.exponent(z2);

  std::vector<double> own;
  if (q_grid.empty()) {
    const double lo = std::min(e1.Q, e2.Q) - 12.0 * width;
    const double hi = std::max(e1.Q, e2.Q) + 12.0 * width;
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / (width / 24.0))) + 1;
    own = uniform(lo, hi, n);
    q_grid = own;
  }
  if (q_grid.size() < 2) throw GridError("overlap grid needs at least two points");
  for (const double Q : {e1.Q, e2.Q}) {
    const double tail = tail_mass(Q, width, q_grid.front(), q_grid.back());
    if (tail > 1e-10) {
      std::ostringstream os;
      os << "overlap grid [" << q_grid.front() << ", " << q_grid.back()
         << "] misses mass " << tail << " of the packet at q = " << Q;
      throw GridError(os.str());
    }
  }

  complex acc = 0.0;
  for (std::size_t j = 0; j + 1 < q_grid.size(); ++j) {
    const double a = q_grid[j], b = q_grid[j + 1];
    acc += 0.5 * (b - a) *
           (std::conj(e1(a)) * e2(a) + std::conj(e1(b)) * e2(b));
  }
  OverlapResult r;
  r.numerical = acc;
  r.analytic = std::exp(std::conj(z1) * z2 - 0.5 * (std::norm(z1) + std::norm(z2)));
  r.difference = std::abs(r.numerical - r.analytic);
  r.points = q_grid.size();
  return r;
}

TestFunction coherent_test_function(const FamilySlice& slice, complex z0, std::size_t points,
                                    double half_width) {
  if (points < 3) throw GridError("test function grid needs at least three points");
  const GaussianExponent e = slice.exponent(z0);
  const double w = half_width * std::abs(slice.modes().g);
  TestFunction t;
  t.grid = uniform(e.Q - w, e.Q + w, points);
  t.values.resize(points);
  for (std::size_t j = 0; j < points; ++j) t.values[j] = e(t.grid[j]);
  t.center = z0;
  return t;
}

TestFunction displaced_gaussian(const FamilySlice& slice, double q0, double p0, std::size_t points,
                                double half_width) {
  if (points < 3) throw GridError("test function grid needs at least three points");
  const double s = std::abs(slice.modes().g);
  const double amp = std::pow(2.0 * std::numbers::pi * s * s, -0.25);
  TestFunction t;
  t.grid = uniform(q0 - half_width * s, q0 + half_width * s, points);
  t.values.resize(points);
  for (std::size_t j = 0; j < points; ++j) {
    const double d = t.grid[j] - q0;
    t.values[j] = amp * std::exp(complex(-d * d / (4.0 * s * s), p0 * t.grid[j]));
  }
  t.center = quantum_number_at(slice.modes(), q0, p0);
  return t;
}

CompletenessResult completeness_apply(const ModeTrajectory& m, double sigma_q, double tau,
                                      const TestFunction& psi, const SamplerConfig& config) {
  if (config.samples < 2) throw DomainError("completeness needs at least two samples");
  if (!(config.radius > 0.0)) throw DomainError("sampler radius must be positive");
  if (config.block == 0) throw DomainError("sampler block size must be positive");
  if (psi.grid.size() != psi.values.size() || psi.grid.size() < 3)
    throw GridError("test function grid and values must match and hold three or more points");
  const double dq = uniform_spacing(psi.grid);
  const FamilySlice slice(m, sigma_q, tau);

  // Probe points: where |psi| is at least 5% of its peak, evenly thinned.
  double peak = 0.0;
  for (const complex v : psi.values) peak = std::max(peak, std::abs(v));
  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < psi.values.size(); ++j)
    if (std::abs(psi.values[j]) >= 0.05 * peak) support.push_back(j);
  std::vector<std::size_t> probe_idx;
  const std::size_t want = std::max<std::size_t>(1, std::min(config.probes, support.size()));
  for (std::size_t k = 0; k < want; ++k) {
    const std::size_t pos =
        want == 1 ? support.size() / 2 : k * (support.size() - 1) / (want - 1);
    probe_idx.push_back(support[pos]);
  }
  const std::size_t np = probe_idx.size();
  std::vector<double> probe_q(np);
  for (std::size_t k = 0; k < np; ++k) probe_q[k] = psi.grid[probe_idx[k]];

  const double norm_density =
      1.0 / (2.0 * std::numbers::pi * (1.0 - std::exp(-0.5 * config.radius * config.radius)));
  const std::size_t blocks = (config.samples + config.block - 1) / config.block;
  std::vector<BlockSums> sums(blocks);

  const auto run_block = [&](std::size_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                      static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> n01;
    const std::size_t begin = b * config.block;
    const std::size_t count = std::min(config.block, config.samples - begin);
    BlockSums out{std::vector<complex>(np), std::vector<double>(np)};
    const double d2 = dq * dq;
    for (std::size_t i = 0; i < count; ++i) {
      const complex d = truncated_normal(rng, n01, config.radius);
      const GaussianExponent e = slice.exponent(psi.center + d);
      // Phi_z on the psi grid by the exponent recurrence.
      const double x0 = psi.grid.front() - e.Q;
      complex phi = e(psi.grid.front());
      complex step = std::exp(I * e.P * dq - 0.5 * e.w * (2.0 * x0 * dq + d2));
      const complex chirp = std::exp(-e.w * d2);
      complex ov = 0.5 * std::conj(phi) * psi.values.front();
      for (std::size_t j = 1; j < psi.grid.size(); ++j) {
        phi *= step;
        step *= chirp;
        ov += std::conj(phi) * psi.values[j];
      }
      ov -= 0.5 * std::conj(phi) * psi.values.back();
      ov *= dq;
      const double weight = norm_density * std::exp(-0.5 * std::norm(d));
      const complex scale = ov / weight;
      for (std::size_t k = 0; k < np; ++k) {
        const complex x = e(probe_q[k]) * scale;
        out.sum[k] += x;
        out.sum_sq[k] += std::norm(x);
      }
    }
    sums[b] = std::move(out);
  };

  unsigned workers = config.workers ? config.workers : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t b; (b = next.fetch_add(1)) < blocks;) {
          try {
            run_block(b);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
            return;
          }
        }
      });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<complex> total(np);
  std::vector<double> total_sq(np);
  for (const auto& s : sums)
    for (std::size_t k = 0; k < np; ++k) {
      total[k] += s.sum[k];
      total_sq[k] += s.sum_sq[k];
    }

  const double n = static_cast<double>(config.samples);
  CompletenessResult r;
  r.probe_q = probe_q;
  r.samples = config.samples;
  r.blocks = blocks;
  r.seed = config.seed;
  r.radius = config.radius;
  double ref_peak = 0.0, err = 0.0, stat = 0.0;
  for (std::size_t k = 0; k < np; ++k) {
    const complex mean = total[k] / n;
    r.estimate.push_back(mean);
    r.reference.push_back(std::numbers::pi * psi.values[probe_idx[k]]);
    ref_peak = std::max(ref_peak, std::abs(r.reference.back()));
    err = std::max(err, std::abs(mean - r.reference.back()));
    const double var = std::max(0.0, total_sq[k] / n - std::norm(mean));
    stat = std::max(stat, std::sqrt(var / n));
  }
  r.relative_error = err / ref_peak;
  r.statistical_error = stat / ref_peak;
  if (r.statistical_error > config.tolerance) {
    const double factor = r.statistical_error / config.tolerance;
    const auto suggested = static_cast<std::size_t>(std::ceil(1.5 * n * factor * factor));
    std::ostringstream os;
    os.precision(3);
    os << "completeness statistical error " << r.statistical_error << " exceeds tolerance "
       << config.tolerance << " at " << config.samples << " samples; try about " << suggested;
    throw UndersamplingError(os.str(), suggested);
  }
  return r;
}

double norm_check(std::span<const double> q_grid, std::span<const double> rho) {
  if (q_grid.size() != rho.size()) throw GridError("grid and density sizes differ");
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < q_grid.size(); ++j)
    acc += 0.5 * (q_grid[j + 1] - q_grid[j]) * (rho[j] + rho[j + 1]);
  return std::abs(acc - 1.0);
}

double norm_check(const StateSnapshot& snap) { return norm_check(snap.q_grid, snap.rho); }

double delta_residual(const ModeTrajectory& m, std::size_t samples) {
  double worst = 0.0;
  for (const double tau : samples_on(0.0, m.tau_max(), samples))
    worst = std::max(worst, std::abs(delta_invariant(m.at(tau)) - 1.0));
  return worst;
}

double robertson_schrodinger_residual(const ModeTrajectory& m, std::size_t samples) {
  double worst = 0.0;
  for (const double tau : samples_on(0.0, m.tau_max(), samples))
    worst = std::max(worst,
                     std::abs(uncertainty_products(m.at(tau)).robertson_schrodinger - 0.25));
  return worst;
}

double hamilton_residual(const ModeTrajectory& m, const CoherentStateSpec& spec,
                         std::size_t samples, double h) {
  if (!(h > 0.0) || 2.0 * h >= m.tau_max()) throw DomainError("bad difference step");
  double worst = 0.0;
  for (const double tau : samples_on(h, m.tau_max() - h, samples)) {
    const TrajectoryPoint a = mean_trajectory(m, spec, tau - h);
    const TrajectoryPoint b = mean_trajectory(m, spec, tau + h);
    const TrajectoryPoint c = mean_trajectory(m, spec, tau);
    const CoefficientValues k = m.coefficients().at(tau);
    const double qdot = (b.q - a.q) / (2.0 * h);
    const double pdot = (b.p - a.p) / (2.0 * h);
    worst = std::max(worst, std::abs(qdot - (c.p + 2.0 * k.beta * c.q + k.nu)));
    worst = std::max(worst, std::abs(pdot + (2.0 * k.alpha * c.q + 2.0 * k.beta * c.p + k.rho)));
  }
  return worst;
}

std::string_view to_string(SolvableProfile::Kind kind) {
  switch (kind) {
    case SolvableProfile::Kind::free_particle: return "free_particle";
    case SolvableProfile::Kind::oscillator: return "oscillator";
    case SolvableProfile::Kind::sech2: return "sech2";
  }
  return "unknown";
}

std::optional<SolvableProfile> detect_profile(const CoefficientSet& c) {
  if (!c.beta().is_zero() || !c.rho().is_zero() || !c.nu().is_zero() || !c.eps().is_zero())
    return std::nullopt;
  using K = SolvableProfile::Kind;
  const auto& repr = c.alpha().repr();
  if (const auto* k = std::get_if<CoefficientFunction::Constant>(&repr)) {
    if (k->value == 0.0) return SolvableProfile{K::free_particle, 0.0, 0.0};
    if (k->value > 0.0) return SolvableProfile{K::oscillator, std::sqrt(2.0 * k->value), 0.0};
    return std::nullopt;
  }
  if (const auto* s = std::get_if<CoefficientFunction::Sech2>(&repr)) {
    if (!(s->omega > 0.0)) return std::nullopt;
    if (s->omega0 == 0.0) return SolvableProfile{K::oscillator, s->omega, 0.0};
    return SolvableProfile{K::sech2, s->omega, s->omega0};
  }
  return std::nullopt;
}

double closed_form_tolerance(SolvableProfile::Kind kind) {
  switch (kind) {
    case SolvableProfile::Kind::free_particle: return 1e-12;
    case SolvableProfile::Kind::oscillator: return 1e-10;
    case SolvableProfile::Kind::sech2: return 1e-8;
  }
  return 1e-8;
}

std::vector<VerificationReport> closed_form_agreement(const ModeTrajectory& m,
                                                      const std::string& scenario,
                                                      std::optional<double> tolerance,
                                                      std::size_t samples) {
  const auto profile = detect_profile(m.coefficients());
  if (!profile)
    throw DomainError("closed-form agreement needs a free-particle, oscillator or sech2 profile");
  using K = SolvableProfile::Kind;
  const complex A = m.initial().c1, B = m.initial().c2;
  const bool coherent = m.initial().convention == Convention::coherent;
  const double sigma = m.initial().sigma_q();
  const auto taus = samples_on(0.0, m.tau_max(), samples);

  const auto closed = [&](double tau) -> ModePair {
    switch (profile->kind) {
      case K::free_particle: return free_particle_modes(A, B, tau);
      case K::oscillator:
        return coherent ? oscillator_modes(profile->omega, sigma, tau)
                        : sech2_modes(profile->omega, 0.0, A, B, tau);
      case K::sech2: return sech2_modes(profile->omega, profile->omega0, A, B, tau);
    }
    return {};
  };

  double dev = 0.0;
  for (const double tau : taus) {
    const ModeState s = m.at(tau);
    const ModePair c = closed(tau);
    dev = std::max({dev, std::abs(s.g - c.g), std::abs(s.f - c.f)});
  }

  // Limits of the sech^2 solution against the fixed-frequency and free forms.
  const double omega = profile->kind == K::free_particle ? 1.0 : profile->omega;
  const double small = 1e-6;
  double lim_osc = 0.0, lim_free = 0.0;
  for (const double tau : taus) {
    const ModePair s = sech2_modes(omega, small, A, B, tau);
    const double co = std::cos(omega * tau), si = std::sin(omega * tau);
    const complex g = B * co + I * A * si / omega;
    const complex f = A * co + I * B * omega * si;
    lim_osc = std::max({lim_osc, std::abs(s.g - g), std::abs(s.f - f)});
    const ModePair t = sech2_modes(small, small, A, B, tau);
    const ModePair fp = free_particle_modes(A, B, tau);
    lim_free = std::max({lim_free, std::abs(t.g - fp.g), std::abs(t.f - fp.f)});
  }

  nlohmann::json meta = {{"profile", std::string(to_string(profile->kind))},
                         {"omega", profile->omega},
                         {"omega0", profile->omega0},
                         {"samples", taus.size()},
                         {"tau_max", m.tau_max()},
                         {"solver_tol", m.tolerance()}};
  std::vector<VerificationReport> out;
  out.push_back(make_report("closed-form", scenario, dev,
                            tolerance.value_or(closed_form_tolerance(profile->kind)), meta));
  meta["limit_parameter"] = small;
  out.push_back(make_report("closed-form-limit-oscillator", scenario, lim_osc,
                            tolerance.value_or(1e-5), meta));
  out.push_back(make_report("closed-form-limit-free", scenario, lim_free,
                            tolerance.value_or(1e-5), meta));
  return out;
}

}  // namespace qcs
