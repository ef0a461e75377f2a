#include "qcs/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "qcs/errors.hpp"

namespace qcs::ode {

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// Error coefficients: b - b_hat.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

void DenseSolution::set_initial(std::span<const double> y0) { y0_.assign(y0.begin(), y0.end()); }

void DenseSolution::append_step(double t_new, std::span<const double> coefficients) {
  t_.push_back(t_new);
  coeff_.insert(coeff_.end(), coefficients.begin(), coefficients.end());
}

std::vector<double> DenseSolution::knot_value(std::size_t i) const {
  if (i == 0) return y0_;
  // y(t_i) = r1 + r2 of step i-1.
  std::vector<double> buf(dim_);
  const double* r = coeff_.data() + (i - 1) * 5 * dim_;
  for (std::size_t k = 0; k < dim_; ++k) buf[k] = r[k] + r[dim_ + k];
  return buf;
}

void DenseSolution::evaluate(double t, std::span<double> out) const {
  const double span = t_.back() - t_.front();
  const double slack = 1e-12 * std::max(1.0, std::abs(span));
  if (!(t >= t_.front() - slack && t <= t_.back() + slack))
    throw RangeError("dense output requested at t = " + std::to_string(t) + " outside [" +
                     std::to_string(t_.front()) + ", " + std::to_string(t_.back()) + "]");
  if (t_.size() == 1) {
    std::copy(y0_.begin(), y0_.end(), out.begin());
    return;
  }
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  i = std::min(i, t_.size() - 2);
  const double h = t_[i + 1] - t_[i];
  const double theta = (t - t_[i]) / h;
  const double theta1 = 1.0 - theta;
  const double* r = coeff_.data() + i * 5 * dim_;
  for (std::size_t k = 0; k < dim_; ++k) {
    out[k] = r[k] +
             theta * (r[dim_ + k] +
                      theta1 * (r[2 * dim_ + k] + theta * (r[3 * dim_ + k] + theta1 * r[4 * dim_ + k])));
  }
}

std::vector<double> DenseSolution::operator()(double t) const {
  std::vector<double> out(dim_);
  evaluate(t, out);
  return out;
}

DenseSolution dopri5(const Rhs& rhs, std::span<const double> y0, double t0, double t1,
                     const Options& opt) {
  const std::size_t n = y0.size();
  if (!(t1 > t0)) throw DomainError("dopri5 needs t1 > t0");
  DenseSolution sol(n, t0);
  sol.set_initial(y0);

  std::vector<double> y(y0.begin(), y0.end()), ynew(n), ytmp(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), cont(5 * n);

  const double min_step = opt.min_step > 0.0 ? opt.min_step : 1e-14 * (t1 - t0);
  const auto norm = [&](std::span<const double> err, std::span<const double> ya,
                        std::span<const double> yb) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(ya[k]), std::abs(yb[k]));
      const double q = err[k] / sc;
      acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(n));
  };

  double t = t0;
  rhs(t, y, k1);

  double h = opt.initial_step;
  if (h <= 0.0) {
    // Hairer's starting-step heuristic.
    std::vector<double> zeros(n, 0.0);
    const double d0 = norm(y, y, zeros);
    const double d1n = norm(k1, y, zeros);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, t1 - t0);
    for (std::size_t k = 0; k < n; ++k) ytmp[k] = y[k] + h0 * k1[k];
    rhs(t + h0, ytmp, k2);
    for (std::size_t k = 0; k < n; ++k) k2[k] -= k1[k];
    const double d2 = norm(k2, y, zeros) / h0;
    const double dm = std::max(d1n, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min(100.0 * h0, h1);
  }
  h = std::min(h, t1 - t0);

  constexpr double safety = 0.9, fac_min = 0.2, fac_max = 10.0, beta = 0.04;
  double err_old = 1e-4;
  bool rejected = false;
  std::size_t steps = 0;

  while (t < t1) {
    if (++steps > opt.max_steps)
      throw IntegrationError("maximum number of steps exceeded", t);
    bool last = false;
    if (t + h >= t1 || t + 1.01 * h >= t1) {
      h = t1 - t;
      last = true;
    }
    if (h < min_step) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "step size underflow (h = %.3g at t = %.6g)", h, t);
      throw IntegrationError(std::string(buf) + "; coefficients may be singular", t);
    }

    for (std::size_t k = 0; k < n; ++k) ytmp[k] = y[k] + h * a21 * k1[k];
    rhs(t + c2 * h, ytmp, k2);
    for (std::size_t k = 0; k < n; ++k) ytmp[k] = y[k] + h * (a31 * k1[k] + a32 * k2[k]);
    rhs(t + c3 * h, ytmp, k3);
    for (std::size_t k = 0; k < n; ++k)
      ytmp[k] = y[k] + h * (a41 * k1[k] + a42 * k2[k] + a43 * k3[k]);
    rhs(t + c4 * h, ytmp, k4);
    for (std::size_t k = 0; k < n; ++k)
      ytmp[k] = y[k] + h * (a51 * k1[k] + a52 * k2[k] + a53 * k3[k] + a54 * k4[k]);
    rhs(t + c5 * h, ytmp, k5);
    for (std::size_t k = 0; k < n; ++k)
      ytmp[k] = y[k] + h * (a61 * k1[k] + a62 * k2[k] + a63 * k3[k] + a64 * k4[k] + a65 * k5[k]);
    const double t_new = last ? t1 : t + h;
    rhs(t_new, ytmp, k6);
    for (std::size_t k = 0; k < n; ++k)
      ynew[k] = y[k] + h * (a71 * k1[k] + a73 * k3[k] + a74 * k4[k] + a75 * k5[k] + a76 * k6[k]);
    rhs(t_new, ynew, k7);

    for (std::size_t k = 0; k < n; ++k)
      ytmp[k] = h * (e1 * k1[k] + e3 * k3[k] + e4 * k4[k] + e5 * k5[k] + e6 * k6[k] + e7 * k7[k]);
    const double err = norm(ytmp, y, ynew);
    if (!std::isfinite(err))
      throw IntegrationError("non-finite state encountered", t);

    if (err <= 1.0) {
      for (std::size_t k = 0; k < n; ++k) {
        const double dy = ynew[k] - y[k];
        const double bspl = h * k1[k] - dy;
        cont[k] = y[k];
        cont[n + k] = dy;
        cont[2 * n + k] = bspl;
        cont[3 * n + k] = dy - h * k7[k] - bspl;
        cont[4 * n + k] =
            h * (d1 * k1[k] + d3 * k3[k] + d4 * k4[k] + d5 * k5[k] + d6 * k6[k] + d7 * k7[k]);
      }
      sol.append_step(t_new, cont);
      t = t_new;
      y.swap(ynew);
      k1.swap(k7);

      // PI step-size control.
      double fac = safety * std::pow(err, -0.2 + 0.75 * beta) * std::pow(err_old, beta);
      if (err == 0.0) fac = fac_max;
      fac = std::clamp(fac, fac_min, fac_max);
      if (rejected) fac = std::min(fac, 1.0);
      err_old = std::max(err, 1e-4);
      rejected = false;
      h *= fac;
    } else {
      h *= std::max(fac_min, safety * std::pow(err, -0.2));
      rejected = true;
    }
  }
  return sol;
}

}  // namespace qcs::ode
