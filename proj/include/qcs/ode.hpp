#pragma once

// Dormand-Prince 5(4) with the order-4 continuous extension, for small
// non-stiff real systems. The complex mode equations are integrated as
// interleaved real components.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qcs::ode {

using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double initial_step = 0.0;  // 0: pick automatically
  double min_step = 0.0;      // 0: 1e-14 * |t1 - t0|
  std::size_t max_steps = 2'000'000;
};

/// Piecewise continuous extension over the accepted steps. Each step stores
/// the five Hairer coefficient vectors, so evaluation is a Horner sum.
class DenseSolution {
 public:
  DenseSolution() = default;
  DenseSolution(std::size_t dimension, double t0) : dim_(dimension), t_{t0} {}

  std::size_t dimension() const { return dim_; }
  double t_begin() const { return t_.front(); }
  double t_end() const { return t_.back(); }
  std::size_t steps() const { return t_.size() - 1; }
  /// Accepted step boundaries, including both ends.
  std::span<const double> knots() const { return t_; }

  void evaluate(double t, std::span<double> out) const;
  std::vector<double> operator()(double t) const;

  /// Exact stored value at knot i (the step end point, no interpolation).
  std::vector<double> knot_value(std::size_t i) const;

  void append_step(double t_new, std::span<const double> coefficients);
  void set_initial(std::span<const double> y0);

 private:
  std::size_t dim_ = 0;
  std::vector<double> t_;
  std::vector<double> coeff_;  // per step: 5 * dim
  std::vector<double> y0_;
};

/// Integrates y' = rhs(t, y) from t0 to t1 > t0. Throws IntegrationError on
/// step-size underflow, non-finite state, or step-count exhaustion.
DenseSolution dopri5(const Rhs& rhs, std::span<const double> y0, double t0, double t1,
                     const Options& options);

}  // namespace qcs::ode
