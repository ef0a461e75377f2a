#pragma once

// Independent oracles and random generators shared by the unit tests. None
// of this calls into the integrator or the closed forms under test.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "qcs/coefficients.hpp"

namespace oracle {

using complex = std::complex<double>;

/// Romberg extrapolation of the trapezoid rule on [a, b].
inline double romberg(const std::function<double(double)>& f, double a, double b,
                      int levels = 18, double rel_tol = 1e-13) {
  std::vector<double> prev(1), cur;
  double h = b - a;
  prev[0] = 0.5 * h * (f(a) + f(b));
  for (int k = 1; k < levels; ++k) {
    h *= 0.5;
    double mid = 0.0;
    const long n = 1L << (k - 1);
    for (long i = 0; i < n; ++i) mid += f(a + (2 * i + 1) * h);
    cur.assign(k + 1, 0.0);
    cur[0] = 0.5 * prev[0] + h * mid;
    double scale = 1.0;
    for (int j = 1; j <= k; ++j) {
      scale *= 4.0;
      cur[j] = cur[j - 1] + (cur[j - 1] - prev[j - 1]) / (scale - 1.0);
    }
    if (k > 4 && std::abs(cur[k] - prev[k - 1]) <= rel_tol * std::abs(cur[k])) return cur[k];
    prev.swap(cur);
  }
  return prev.back();
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

struct Modes {
  complex f, g, phi;
};

/// Classical fixed-step RK4 on the complex mode system, written directly in
/// complex arithmetic. Returns the state at each multiple of tau_max / out.
inline std::vector<Modes> rk4_modes(const qcs::CoefficientSet& c, complex f0, complex g0,
                                    double tau_max, int steps, int out) {
  const complex I(0.0, 1.0);
  const auto rhs = [&](double tau, const Modes& y) {
    const auto k = c.at(tau);
    return Modes{-2.0 * k.beta * y.f + 2.0 * I * k.alpha * y.g, I * y.f + 2.0 * k.beta * y.g,
                 -k.nu * y.f + I * k.rho * y.g};
  };
  const auto axpy = [](const Modes& y, double h, const Modes& d) {
    return Modes{y.f + h * d.f, y.g + h * d.g, y.phi + h * d.phi};
  };
  std::vector<Modes> res{{f0, g0, 0.0}};
  Modes y = res[0];
  const double h = tau_max / steps;
  const int stride = steps / out;
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    const Modes k1 = rhs(t, y);
    const Modes k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const Modes k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const Modes k4 = rhs(t + h, axpy(y, h, k3));
    y = Modes{y.f + h / 6.0 * (k1.f + 2.0 * k2.f + 2.0 * k3.f + k4.f),
              y.g + h / 6.0 * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g),
              y.phi + h / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi)};
    if ((i + 1) % stride == 0) res.push_back(y);
  }
  return res;
}

/// Centred second difference.
template <class F>
auto second_difference(F&& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

/// Golden-section maximization of a unimodal f on [a, b].
inline double argmax(const std::function<double(double)>& f, double a, double b) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 200 && b - a > 1e-13; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace oracle

namespace gen {

/// Deterministic source for the property tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng_); }
  std::complex<double> disc(double radius) {
    for (;;) {
      const std::complex<double> z(uniform(-radius, radius), uniform(-radius, radius));
      if (std::abs(z) <= radius) return z;
    }
  }

 private:
  std::mt19937_64 eng_;
};

/// Coefficient set with bounded, smooth, generally nonzero entries and a
/// positive effective frequency.
inline qcs::CoefficientSet quadratic_system(Rng& r, double tau_max) {
  using qcs::CoefficientFunction;
  const double beta = r.uniform(-0.2, 0.2);
  const double alpha0 = r.uniform(0.3, 1.5) + 2.0 * beta * beta;
  return qcs::CoefficientSet(
      CoefficientFunction::harmonic(alpha0, r.uniform(0.0, 0.2), r.uniform(0.2, 2.0),
                                    r.uniform(0.0, 6.28)),
      CoefficientFunction::constant(beta),
      CoefficientFunction::harmonic(0.0, r.uniform(-0.5, 0.5), r.uniform(0.1, 1.5)),
      CoefficientFunction::constant(r.uniform(-0.5, 0.5)),
      CoefficientFunction::constant(r.uniform(-1.0, 1.0)), tau_max);
}

}  // namespace gen
