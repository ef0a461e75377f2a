#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "qcs/coefficients.hpp"
#include "qcs/errors.hpp"
#include "support.hpp"

using namespace qcs;

TEST_CASE("cubic spline reproduces knots and linear data") {
  const CubicSpline s({0.0, 0.5, 1.5, 3.0}, {1.0, -2.0, 0.25, 4.0});
  CHECK(s(0.0) == 1.0);
  CHECK(s(0.5) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(s(1.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(s(3.0) == doctest::Approx(4.0).epsilon(1e-15));

  const CubicSpline line({0.0, 1.0, 2.0, 4.0}, {1.0, 3.0, 5.0, 9.0});
  for (double x = 0.0; x <= 4.0; x += 0.125) {
    CHECK(line(x) == doctest::Approx(1.0 + 2.0 * x).epsilon(1e-14));
    CHECK(line.derivative(x) == doctest::Approx(2.0).epsilon(1e-13));
  }
}

TEST_CASE("cubic spline rejects bad grids and out-of-range queries") {
  CHECK_THROWS_AS(CubicSpline({0.0}, {1.0}), DomainError);
  CHECK_THROWS_AS(CubicSpline({0.0, 1.0, 1.0}, {1.0, 2.0, 3.0}), DomainError);
  CHECK_THROWS_AS(CubicSpline({0.0, 1.0}, {1.0, NAN}), EvaluationError);
  const CubicSpline s({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
  CHECK_THROWS_AS(s(2.1), RangeError);
  CHECK_THROWS_AS(s(-0.1), RangeError);
}

TEST_CASE("closed-form coefficient kinds and derivatives") {
  const auto c = CoefficientFunction::constant(0.7);
  CHECK(c(3.0) == 0.7);
  CHECK(c.derivative(3.0) == 0.0);
  CHECK(c.kind() == CoefficientKind::constant);
  CHECK_FALSE(c.is_zero());
  CHECK(CoefficientFunction::constant(0.0).is_zero());

  const auto h = CoefficientFunction::harmonic(0.5, 0.2, 1.3, 0.4);
  CHECK(h(2.0) == doctest::Approx(0.5 + 0.2 * std::cos(1.3 * 2.0 + 0.4)));
  const double d = 1e-5;
  for (double tau : {0.0, 0.7, 3.1})
    CHECK(h.derivative(tau) == doctest::Approx((h(tau + d) - h(tau - d)) / (2 * d)).epsilon(1e-8));

  const double w = 1.0, w0 = std::sqrt(0.5);
  const auto s = CoefficientFunction::sech2(w, w0);
  CHECK(s(0.0) == doctest::Approx(1.0));  // omega^2(0) / 2 = 1
  for (double tau : {0.0, 0.3, 2.0, 6.0})
    CHECK(s.derivative(tau) == doctest::Approx((s(tau + d) - s(tau - d)) / (2 * d)).epsilon(1e-8));
  CHECK(to_string(s.kind()) == "sech2");
}

TEST_CASE("tabulated beta derivative is the centred knot-spacing difference") {
  // Quadratic data: a centred difference on the knots is exact, the
  // one-sided end formula is first order.
  std::vector<double> tau, v;
  for (int i = 0; i <= 20; ++i) {
    tau.push_back(0.25 * i);
    v.push_back(0.1 * tau.back() * tau.back() - tau.back());
  }
  const auto f = CoefficientFunction::tabulated(tau, v);
  CHECK(f.kind() == CoefficientKind::tabulated);
  CHECK(f.domain_begin() == 0.0);
  CHECK(f.domain_end() == 5.0);
  for (int i = 1; i < 20; ++i)
    CHECK(f.derivative(tau[i]) == doctest::Approx(0.2 * tau[i] - 1.0).epsilon(1e-12));
  CHECK(f.derivative(0.0) == doctest::Approx((v[1] - v[0]) / 0.25).epsilon(1e-12));
  CHECK(f.derivative(5.0) == doctest::Approx((v[20] - v[19]) / 0.25).epsilon(1e-12));
}

TEST_CASE("effective frequency examples") {
  const double w = 1.7;
  const auto osc = CoefficientSet::oscillator(w, 10.0);
  CHECK(effective_frequency(osc, 0.0) == doctest::Approx(w * w).epsilon(1e-15));
  CHECK(effective_frequency(CoefficientSet::free_particle(5.0), 2.0) == 0.0);
  const double b = 0.3;
  const CoefficientSet constb({}, CoefficientFunction::constant(b), {}, {}, {}, 4.0);
  CHECK(effective_frequency(constb, 1.0) == doctest::Approx(-4.0 * b * b));
  const auto sech = CoefficientSet::sech2(1.0, std::sqrt(0.5), 10.0);
  CHECK(effective_frequency(sech, 0.0) == 2.0);
  CHECK_THROWS_AS(effective_frequency(osc, 10.5), RangeError);
  CHECK_THROWS_AS(effective_frequency(osc, -0.1), RangeError);
}

TEST_CASE("property: fixed-frequency profile gives omega^2 = 2 alpha exactly") {
  gen::Rng r(17);
  for (int k = 0; k < 200; ++k) {
    const double w = r.uniform(0.01, 20.0), tau = r.uniform(0.0, 50.0);
    const auto c = CoefficientSet::oscillator(w, 50.0);
    CHECK(effective_frequency(c, tau) == 2.0 * c.at(tau).alpha);
  }
}

TEST_CASE("effective frequency with time-dependent beta uses beta'") {
  const auto beta = CoefficientFunction::harmonic(0.1, 0.2, 0.9);
  const CoefficientSet c(CoefficientFunction::constant(0.8), beta, {}, {}, {}, 10.0);
  for (double tau : {0.0, 1.0, 4.5}) {
    const double b = beta(tau), bd = -0.2 * 0.9 * std::sin(0.9 * tau);
    CHECK(effective_frequency(c, tau) == doctest::Approx(1.6 - 4 * b * b - 2 * bd).epsilon(1e-14));
  }
}

TEST_CASE("stationary potential identification") {
  const auto flat = from_stationary_potential(Potential::polynomial({2.5}), 2.5, 10.0);
  CHECK(effective_frequency(flat, 3.0) == 0.0);

  const auto quad = from_stationary_potential(Potential::polynomial({0.0, 0.0, 1.0}), 0.0, 10.0);
  for (double tau : {0.0, 1.5, 7.0})
    CHECK(effective_frequency(quad, tau) == doctest::Approx(tau * tau).epsilon(1e-15));

  // V = 2 omega0^2 sech^2(omega0 q) at E = -omega^2 reproduces the sech^2 frequency.
  const double w = 1.0, w0 = std::sqrt(0.5);
  const auto st =
      from_stationary_potential(Potential::sech2(2.0 * w0 * w0, w0), -w * w, 10.0);
  for (double tau = 0.0; tau <= 10.0; tau += 0.25) {
    const double ch = std::cosh(w0 * tau);
    CHECK(std::abs(effective_frequency(st, tau) - (w * w + 2 * w0 * w0 / (ch * ch))) <= 1e-12);
  }
  CHECK(st.alpha().kind() == CoefficientKind::stationary);
  CHECK(st.beta().is_zero());
}

TEST_CASE("property: stationary identification equals V - E pointwise") {
  gen::Rng r(5);
  for (int k = 0; k < 50; ++k) {
    std::vector<double> coeffs;
    for (int j = 0, n = r.integer(1, 4); j < n; ++j) coeffs.push_back(r.uniform(-1.0, 1.0));
    const double e = r.uniform(-2.0, 2.0);
    const auto pot = Potential::polynomial(coeffs);
    const auto c = from_stationary_potential(pot, e, 3.0);
    for (int j = 0; j < 10; ++j) {
      const double tau = r.uniform(0.0, 3.0);
      CHECK(std::abs(effective_frequency(c, tau) - (pot(tau) - e)) <= 1e-12);
    }
  }
}

TEST_CASE("tabulated potential follows its spline") {
  std::vector<double> q, v;
  for (int i = 0; i <= 40; ++i) {
    q.push_back(0.25 * i);
    v.push_back(std::sin(q.back()));
  }
  const auto c = from_stationary_potential(Potential::tabulated(q, v), -1.0, 10.0);
  CHECK(effective_frequency(c, 2.0) == doctest::Approx(std::sin(2.0) + 1.0).epsilon(1e-11));
  CHECK(effective_frequency(c, 2.1) == doctest::Approx(std::sin(2.1) + 1.0).epsilon(1e-3));
}

TEST_CASE("coefficient set validation") {
  const auto short_table = CoefficientFunction::tabulated({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0});
  CHECK_THROWS_AS(CoefficientSet(short_table, {}, {}, {}, {}, 3.0), DomainError);
  CHECK_NOTHROW(CoefficientSet(short_table, {}, {}, {}, {}, 2.0));
  const auto late = CoefficientFunction::tabulated({0.5, 1.0, 2.0}, {1.0, 1.0, 1.0});
  CHECK_THROWS_AS(CoefficientSet(late, {}, {}, {}, {}, 2.0), DomainError);
  CHECK_THROWS_AS(CoefficientFunction::constant(INFINITY), EvaluationError);
  CHECK_THROWS_AS(CoefficientSet::free_particle(-1.0), DomainError);

  const auto c = CoefficientSet::oscillator(1.0, 4.0);
  CHECK_THROWS_AS(c.at(4.5), RangeError);
  CHECK(c.with_tau_max(8.0).tau_max() == 8.0);
  CHECK_THROWS_AS(CoefficientSet(short_table, {}, {}, {}, {}, 2.0).with_tau_max(5.0), DomainError);
}

TEST_CASE("nondimensionalize: constant r1 and a constant ratio") {
  DimensionalSystem sys;
  sys.r1 = [](double) { return 1.0; };
  const auto nd = nondimensionalize(sys, 3.0, 31);
  for (double t : {0.0, 0.7, 3.0}) CHECK(nd.time_map.tau_of_t(t) == doctest::Approx(2.0 * t).epsilon(1e-14));
  for (double tau : {0.0, 2.0, 6.0}) {
    const auto v = nd.coefficients.at(tau);
    CHECK(v.alpha == 0.0);
    CHECK(v.beta == 0.0);
    CHECK(v.rho == 0.0);
    CHECK(v.nu == 0.0);
    CHECK(v.eps == 0.0);
  }

  DimensionalSystem ratio;
  const double k = 0.8;
  ratio.r1 = [](double t) { return 1.0 + 0.5 * std::sin(t); };
  ratio.r2 = [&](double t) { return k * (1.0 + 0.5 * std::sin(t)); };
  const auto nr = nondimensionalize(ratio, 5.0, 101);
  for (double tau = 0.0; tau <= nr.coefficients.tau_max(); tau += 0.37)
    CHECK(nr.coefficients.at(tau).alpha == doctest::Approx(k / 2.0).epsilon(1e-12));
}

TEST_CASE("nondimensionalize: scales enter every coefficient") {
  DimensionalSystem sys;
  sys.length = 2.0;
  sys.hbar = 0.5;
  sys.r1 = [](double) { return 3.0; };
  sys.r2 = [](double) { return 1.0; };
  sys.r3 = [](double) { return 2.0; };
  sys.r4 = [](double) { return -1.0; };
  sys.r5 = [](double) { return 0.5; };
  sys.r6 = [](double) { return 4.0; };
  const auto nd = nondimensionalize(sys, 1.0, 11);
  const double l = 2.0, hb = 0.5, r1 = 3.0;
  CHECK(nd.time_map.tau_max() == doctest::Approx(2 * hb / (l * l) * r1).epsilon(1e-14));
  const auto v = nd.coefficients.at(0.2);
  CHECK(v.alpha == doctest::Approx(std::pow(l, 4) / (2 * hb * hb) * 1.0 / r1));
  CHECK(v.beta == doctest::Approx(l * l / (2 * hb) * 2.0 / r1));
  CHECK(v.rho == doctest::Approx(std::pow(l, 3) / (2 * hb * hb) * -1.0 / r1));
  CHECK(v.nu == doctest::Approx(l / (2 * hb) * 0.5 / r1));
  CHECK(v.eps == doctest::Approx(l * l / (2 * hb * hb) * 4.0 / r1));
}

TEST_CASE("nondimensionalize: tabulated ramp matches a Romberg oracle") {
  // Piecewise-linear ramp with a kink inside a sampling interval.
  const auto ramp = [](double t) { return t < 1.3 ? 1.0 + t : 2.3 + 3.0 * (t - 1.3); };
  DimensionalSystem sys;
  sys.r1 = ramp;
  const auto nd = nondimensionalize(sys, 4.0, 9);
  for (double t : {0.0, 0.4, 1.3, 2.2, 3.9, 4.0}) {
    const double exact = t <= 1.3 ? 2.0 * oracle::romberg(ramp, 0.0, t)
                                  : 2.0 * (oracle::romberg(ramp, 0.0, 1.3) +
                                           oracle::romberg(ramp, 1.3, t));
    const double got = nd.time_map.tau_of_t(t);
    if (exact == 0.0)
      CHECK(got == 0.0);
    else
      CHECK(std::abs(got - exact) <= 1e-10 * exact);
  }
}

TEST_CASE("property: time map is strictly increasing and round-trips") {
  gen::Rng r(99);
  for (int k = 0; k < 10; ++k) {
    const double a = r.uniform(0.2, 2.0), b = r.uniform(0.0, 0.9) * a, w = r.uniform(0.5, 3.0);
    DimensionalSystem sys;
    sys.r1 = [=](double t) { return a + b * std::cos(w * t); };
    sys.length = r.uniform(0.5, 2.0);
    const auto nd = nondimensionalize(sys, 6.0, 25);
    double prev = -1.0;
    for (double t = 0.0; t <= 6.0; t += 0.05) {
      const double tau = nd.time_map.tau_of_t(t);
      CHECK(tau > prev);
      prev = tau;
      const double back = nd.time_map.t_of_tau(tau);
      CHECK(std::abs(back - t) <= 1e-9 * std::max(t, 1e-3));
    }
  }
}

TEST_CASE("nondimensionalize errors") {
  DimensionalSystem bad;
  bad.r1 = [](double t) { return 1.0 - t; };
  try {
    nondimensionalize(bad, 2.0, 5);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("r1") != std::string::npos);
    CHECK(std::string(e.what()).find("r1(1)") != std::string::npos);
  }

  DimensionalSystem nan_coeff;
  nan_coeff.r1 = [](double) { return 1.0; };
  nan_coeff.r3 = [](double t) { return t > 0.5 ? NAN : 0.0; };
  CHECK_THROWS_AS(nondimensionalize(nan_coeff, 1.0, 5), EvaluationError);

  DimensionalSystem ok;
  ok.r1 = [](double) { return 1.0; };
  CHECK_THROWS_AS(nondimensionalize(ok, 1.0, 1), DomainError);
  CHECK_THROWS_AS(nondimensionalize(ok, 0.0, 5), DomainError);
  const auto nd = nondimensionalize(ok, 1.0, 5);
  CHECK_THROWS_AS(nd.time_map.tau_of_t(1.5), RangeError);
  CHECK_THROWS_AS(nd.time_map.t_of_tau(-0.5), RangeError);
}
