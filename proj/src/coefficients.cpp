#include "qcs/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qcs/errors.hpp"

namespace qcs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sech2_of(double x) {
  const double c = std::cosh(x);
  return 1.0 / (c * c);
}

std::string describe(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// CubicSpline

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw DomainError("tabulated data needs at least two (x, y) pairs of equal length");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i]))
      throw EvaluationError("tabulated sample " + std::to_string(i) + " is not finite");
    if (i > 0 && !(x_[i] > x_[i - 1]))
      throw DomainError("tabulated grid is not strictly increasing at index " +
                        std::to_string(i));
  }
  // Natural end conditions; tridiagonal solve for the interior moments.
  m_.assign(n, 0.0);
  if (n == 2) return;
  std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  // Thomas algorithm over rows 1..n-2 (sub-diagonal of row i is h_{i-1}).
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double lower = x_[i] - x_[i - 1];
    const double w = lower / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
    if (i == 1) break;
  }
}

std::size_t CubicSpline::segment(double x) const {
  const double span = x_.back() - x_.front();
  const double slack = 1e-12 * std::max(1.0, std::abs(span));
  if (x < x_.front() - slack || x > x_.back() + slack || std::isnan(x))
    throw RangeError("tabulated function evaluated at " + describe(x) +
                     " outside [" + describe(x_.front()) + ", " +
                     describe(x_.back()) + "]");
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double CubicSpline::operator()(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h;
  const double b = (x - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h;
  const double b = (x - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h +
         (-(3.0 * a * a - 1.0) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
}

// ---------------------------------------------------------------------------
// Potential

Potential Potential::polynomial(std::vector<double> coefficients) {
  for (double c : coefficients)
    if (!std::isfinite(c)) throw EvaluationError("polynomial potential coefficient is not finite");
  return Potential(Polynomial{std::move(coefficients)});
}

Potential Potential::sech2(double amplitude, double width) {
  if (!std::isfinite(amplitude) || !std::isfinite(width))
    throw EvaluationError("sech2 potential parameters must be finite");
  return Potential(Sech2{amplitude, width});
}

Potential Potential::tabulated(std::vector<double> q, std::vector<double> v) {
  return Potential(Tabulated{std::make_shared<const CubicSpline>(std::move(q), std::move(v))});
}

double Potential::operator()(double q) const {
  return std::visit(
      overloaded{
          [q](const Polynomial& p) {
            double acc = 0.0;
            for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it)
              acc = acc * q + *it;
            return acc;
          },
          [q](const Sech2& s) { return s.amplitude * sech2_of(s.width * q); },
          [q](const Tabulated& t) { return (*t.spline)(q); },
      },
      repr_);
}

double Potential::derivative(double q) const {
  return std::visit(
      overloaded{
          [q](const Polynomial& p) {
            double acc = 0.0;
            const std::size_t n = p.coefficients.size();
            for (std::size_t k = n; k-- > 1;) acc = acc * q + static_cast<double>(k) * p.coefficients[k];
            return acc;
          },
          [q](const Sech2& s) {
            return -2.0 * s.amplitude * s.width * sech2_of(s.width * q) * std::tanh(s.width * q);
          },
          [q](const Tabulated& t) { return t.spline->derivative(q); },
      },
      repr_);
}

// ---------------------------------------------------------------------------
// CoefficientFunction

std::string_view to_string(CoefficientKind kind) {
  switch (kind) {
    case CoefficientKind::constant: return "constant";
    case CoefficientKind::harmonic: return "harmonic";
    case CoefficientKind::sech2: return "sech2";
    case CoefficientKind::tabulated: return "tabulated";
    case CoefficientKind::stationary: return "stationary";
  }
  return "unknown";
}

CoefficientFunction CoefficientFunction::constant(double value) {
  if (!std::isfinite(value)) throw EvaluationError("constant coefficient is not finite");
  return CoefficientFunction(Constant{value});
}

CoefficientFunction CoefficientFunction::harmonic(double offset, double amplitude,
                                                  double frequency, double phase) {
  if (!std::isfinite(offset) || !std::isfinite(amplitude) || !std::isfinite(frequency) ||
      !std::isfinite(phase))
    throw EvaluationError("harmonic coefficient parameters must be finite");
  return CoefficientFunction(Harmonic{offset, amplitude, frequency, phase});
}

CoefficientFunction CoefficientFunction::sech2(double omega, double omega0) {
  if (!std::isfinite(omega) || !std::isfinite(omega0))
    throw EvaluationError("sech2 coefficient parameters must be finite");
  return CoefficientFunction(Sech2{omega, omega0});
}

CoefficientFunction CoefficientFunction::tabulated(std::vector<double> tau,
                                                   std::vector<double> values) {
  return CoefficientFunction(
      Tabulated{std::make_shared<const CubicSpline>(std::move(tau), std::move(values))});
}

CoefficientFunction CoefficientFunction::stationary(Potential potential, double energy) {
  if (!std::isfinite(energy)) throw EvaluationError("stationary energy is not finite");
  return CoefficientFunction(Stationary{std::move(potential), energy});
}

double CoefficientFunction::operator()(double tau) const {
  return std::visit(
      overloaded{
          [](const Constant& c) { return c.value; },
          [tau](const Harmonic& h) {
            return h.offset + h.amplitude * std::cos(h.frequency * tau + h.phase);
          },
          [tau](const Sech2& s) {
            return 0.5 * (s.omega * s.omega + 2.0 * s.omega0 * s.omega0 * sech2_of(s.omega0 * tau));
          },
          [tau](const Tabulated& t) { return (*t.spline)(tau); },
          [tau](const Stationary& s) { return 0.5 * (s.potential(tau) - s.energy); },
      },
      repr_);
}

double CoefficientFunction::derivative(double tau) const {
  return std::visit(
      overloaded{
          [](const Constant&) { return 0.0; },
          [tau](const Harmonic& h) {
            return -h.amplitude * h.frequency * std::sin(h.frequency * tau + h.phase);
          },
          [tau](const Sech2& s) {
            const double x = s.omega0 * tau;
            return -2.0 * s.omega0 * s.omega0 * s.omega0 * sech2_of(x) * std::tanh(x);
          },
          [tau](const Tabulated& t) {
            const CubicSpline& sp = *t.spline;
            const auto knots = sp.knots();
            auto it = std::upper_bound(knots.begin(), knots.end(), tau);
            std::size_t i = it == knots.begin() ? 0 : static_cast<std::size_t>(it - knots.begin()) - 1;
            i = std::min(i, knots.size() - 2);
            const double h = knots[i + 1] - knots[i];
            const bool left_ok = tau - h >= sp.front();
            const bool right_ok = tau + h <= sp.back();
            if (left_ok && right_ok) return (sp(tau + h) - sp(tau - h)) / (2.0 * h);
            if (right_ok) return (sp(tau + h) - sp(tau)) / h;
            if (left_ok) return (sp(tau) - sp(tau - h)) / h;
            return sp.derivative(tau);
          },
          [tau](const Stationary& s) { return 0.5 * s.potential.derivative(tau); },
      },
      repr_);
}

CoefficientKind CoefficientFunction::kind() const {
  return std::visit(overloaded{
                        [](const Constant&) { return CoefficientKind::constant; },
                        [](const Harmonic&) { return CoefficientKind::harmonic; },
                        [](const Sech2&) { return CoefficientKind::sech2; },
                        [](const Tabulated&) { return CoefficientKind::tabulated; },
                        [](const Stationary&) { return CoefficientKind::stationary; },
                    },
                    repr_);
}

bool CoefficientFunction::is_zero() const {
  if (const auto* c = std::get_if<Constant>(&repr_)) return c->value == 0.0;
  if (const auto* h = std::get_if<Harmonic>(&repr_)) return h->offset == 0.0 && h->amplitude == 0.0;
  return false;
}

double CoefficientFunction::domain_begin() const {
  if (const auto* t = std::get_if<Tabulated>(&repr_)) return t->spline->front();
  return -std::numeric_limits<double>::infinity();
}

double CoefficientFunction::domain_end() const {
  if (const auto* t = std::get_if<Tabulated>(&repr_)) return t->spline->back();
  return std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// CoefficientSet

CoefficientSet::CoefficientSet(CoefficientFunction alpha, CoefficientFunction beta,
                               CoefficientFunction rho, CoefficientFunction nu,
                               CoefficientFunction eps, double tau_max)
    : alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      rho_(std::move(rho)),
      nu_(std::move(nu)),
      eps_(std::move(eps)),
      tau_max_(tau_max) {
  if (!(tau_max_ > 0.0)) throw DomainError("tau_max must be positive");
  const double slack = 1e-12 * (std::isfinite(tau_max_) ? std::max(1.0, tau_max_) : 1.0);
  const std::pair<const char*, const CoefficientFunction*> all[] = {
      {"alpha", &alpha_}, {"beta", &beta_}, {"rho", &rho_}, {"nu", &nu_}, {"eps", &eps_}};
  for (const auto& [name, fn] : all) {
    if (fn->domain_begin() > slack || fn->domain_end() < tau_max_ - slack)
      throw DomainError(std::string("tabulated coefficient ") + name + " does not cover [0, " +
                        describe(tau_max_) + "]");
  }
}

CoefficientSet CoefficientSet::free_particle(double tau_max) {
  return CoefficientSet({}, {}, {}, {}, {}, tau_max);
}

CoefficientSet CoefficientSet::oscillator(double omega, double tau_max) {
  return CoefficientSet(CoefficientFunction::constant(0.5 * omega * omega), {}, {}, {}, {},
                        tau_max);
}

CoefficientSet CoefficientSet::sech2(double omega, double omega0, double tau_max) {
  return CoefficientSet(CoefficientFunction::sech2(omega, omega0), {}, {}, {}, {}, tau_max);
}

CoefficientSet CoefficientSet::with_tau_max(double tau_max) const {
  return CoefficientSet(alpha_, beta_, rho_, nu_, eps_, tau_max);
}

void CoefficientSet::check_range(double tau) const {
  const double slack = 1e-12 * (std::isfinite(tau_max_) ? std::max(1.0, tau_max_) : 1.0);
  if (!(tau >= -slack && tau <= tau_max_ + slack))
    throw RangeError("tau = " + describe(tau) + " outside scenario interval [0, " +
                     describe(tau_max_) + "]");
}

CoefficientValues CoefficientSet::at(double tau) const {
  check_range(tau);
  CoefficientValues v{alpha_(tau), beta_(tau), rho_(tau), nu_(tau), eps_(tau)};
  if (!std::isfinite(v.alpha) || !std::isfinite(v.beta) || !std::isfinite(v.rho) ||
      !std::isfinite(v.nu) || !std::isfinite(v.eps))
    throw EvaluationError("non-finite coefficient at tau = " + describe(tau));
  return v;
}

double CoefficientSet::beta_derivative(double tau) const {
  check_range(tau);
  const double d = beta_.derivative(tau);
  if (!std::isfinite(d)) throw EvaluationError("non-finite beta derivative at tau = " + describe(tau));
  return d;
}

double effective_frequency(const CoefficientSet& c, double tau) {
  const CoefficientValues v = c.at(tau);
  return 2.0 * v.alpha - 4.0 * v.beta * v.beta - 2.0 * c.beta_derivative(tau);
}

CoefficientSet from_stationary_potential(Potential potential, double energy, double tau_max) {
  return CoefficientSet(CoefficientFunction::stationary(std::move(potential), energy), {}, {},
                        {}, {}, tau_max);
}

// ---------------------------------------------------------------------------
// Nondimensionalization

namespace {

double integrate_rate(const std::function<double(double)>& rate, double a, double b) {
  if (a == b) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  // Integrate over [0, 1]: the error estimate has an absolute floor that does not
  // shrink with the interval.
  const double w = b - a;
  const auto unit = [&](double u) { return rate(a + w * u); };
  double error = 0.0;
  const double value = w * gauss_kronrod<double, 31>::integrate(unit, 0.0, 1.0, 15, 1e-13, &error);
  if (!std::isfinite(value))
    throw EvaluationError("time-map quadrature is not finite on [" + describe(a) + ", " +
                          describe(b) + "]");
  return value;
}

}  // namespace

TimeMap::TimeMap(std::function<double(double)> r1, double scale, std::vector<double> t_knots,
                 std::vector<double> tau_knots)
    : r1_(std::move(r1)), scale_(scale), t_(std::move(t_knots)), tau_(std::move(tau_knots)) {}

double TimeMap::tau_of_t(double t) const {
  if (!(t >= t_.front() && t <= t_.back()))
    throw RangeError("t = " + describe(t) + " outside [0, " + describe(t_.back()) + "]");
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  i = std::min(i, t_.size() - 1);
  return tau_[i] + integrate_rate([this](double s) { return rate(s); }, t_[i], t);
}

double TimeMap::t_of_tau(double tau) const {
  const double slack = 1e-13 * std::max(1.0, tau_.back());
  if (!(tau >= -slack && tau <= tau_.back() + slack))
    throw RangeError("tau = " + describe(tau) + " outside [0, " + describe(tau_.back()) + "]");
  auto it = std::upper_bound(tau_.begin(), tau_.end(), tau);
  std::size_t i = it == tau_.begin() ? 0 : static_cast<std::size_t>(it - tau_.begin()) - 1;
  i = std::min(i, tau_.size() - 2);
  // Safeguarded Newton inside the bracketing knot interval; tau(t) is strictly increasing.
  double lo = t_[i], hi = t_[i + 1];
  double t = lo + (hi - lo) * (tau - tau_[i]) / (tau_[i + 1] - tau_[i]);
  for (int iter = 0; iter < 100; ++iter) {
    const double residual =
        tau_[i] + integrate_rate([this](double s) { return rate(s); }, t_[i], t) - tau;
    if (residual > 0) hi = t; else lo = t;
    const double step = residual / rate(t);
    double next = t - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-15 * std::max(1.0, std::abs(t))) return next;
    t = next;
  }
  return t;
}

NondimensionalSystem nondimensionalize(const DimensionalSystem& sys, double t_max,
                                       std::size_t n_samples) {
  if (n_samples < 2) throw DomainError("nondimensionalize needs n_samples >= 2");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("t_max must be positive and finite");
  if (!(sys.length > 0.0) || !(sys.hbar > 0.0))
    throw DomainError("length and hbar scales must be positive");
  if (!sys.r1) throw DomainError("r1 is required");

  const auto zero = [](double) { return 0.0; };
  const std::function<double(double)> r[6] = {sys.r1,
                                              sys.r2 ? sys.r2 : zero,
                                              sys.r3 ? sys.r3 : zero,
                                              sys.r4 ? sys.r4 : zero,
                                              sys.r5 ? sys.r5 : zero,
                                              sys.r6 ? sys.r6 : zero};
  const double l = sys.length, hb = sys.hbar;
  const double scale = 2.0 * hb / (l * l);

  std::vector<double> t(n_samples), tau(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i)
    t[i] = t_max * static_cast<double>(i) / static_cast<double>(n_samples - 1);

  const auto r1 = sys.r1;
  const auto checked_rate = [&](double s) {
    const double v = r1(s);
    if (!std::isfinite(v)) throw EvaluationError("r1 is not finite at t = " + describe(s));
    if (!(v > 0.0)) throw DomainError("r1 must be positive; r1(" + describe(s) + ") = " + describe(v));
    return scale * v;
  };

  std::vector<double> alpha(n_samples), beta(n_samples), rho(n_samples), nu(n_samples),
      eps(n_samples);
  tau[0] = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    double rv[6];
    for (int s = 0; s < 6; ++s) {
      rv[s] = r[s](t[i]);
      if (!std::isfinite(rv[s]))
        throw EvaluationError("r" + std::to_string(s + 1) + " is not finite at t = " + describe(t[i]));
    }
    if (!(rv[0] > 0.0))
      throw DomainError("r1 must be positive; r1(" + describe(t[i]) + ") = " + describe(rv[0]));
    if (i > 0) tau[i] = tau[i - 1] + integrate_rate(checked_rate, t[i - 1], t[i]);
    alpha[i] = l * l * l * l / (2.0 * hb * hb) * rv[1] / rv[0];
    beta[i] = l * l / (2.0 * hb) * rv[2] / rv[0];
    rho[i] = l * l * l / (2.0 * hb * hb) * rv[3] / rv[0];
    nu[i] = l / (2.0 * hb) * rv[4] / rv[0];
    eps[i] = l * l / (2.0 * hb * hb) * rv[5] / rv[0];
  }
  for (std::size_t i = 1; i < n_samples; ++i)
    if (!(tau[i] > tau[i - 1]))
      throw DomainError("tau(t) is not strictly increasing near t = " + describe(t[i]));

  const double tau_max = tau.back();
  CoefficientSet coefficients(CoefficientFunction::tabulated(tau, alpha),
                              CoefficientFunction::tabulated(tau, beta),
                              CoefficientFunction::tabulated(tau, rho),
                              CoefficientFunction::tabulated(tau, nu),
                              CoefficientFunction::tabulated(tau, eps), tau_max);
  return NondimensionalSystem{std::move(coefficients),
                              TimeMap(r1, scale, std::move(t), std::move(tau))};
}

}  // namespace qcs
