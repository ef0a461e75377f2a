// One line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "qcs/verify.hpp"

using namespace qcs;

namespace {

constexpr double kTauMax = 10.0;
const double kOmega0 = std::sqrt(0.5);

struct Line {
  bool passed;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Line()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Line l;
  try {
    l = body();
  } catch (const std::exception& e) {
    l = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!l.passed) ++failures;
  std::printf("%s %2d %-28s %s [%.2f s]\n", l.passed ? "PASS" : "FAIL", id, name, l.detail.c_str(), secs);
  std::fflush(stdout);
}

template <class... A>
std::string fmt(const char* f, A... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ModeTrajectory solve(const CoefficientSet& c, double sigma) {
  return solve_modes(c, InitialData::coherent(sigma), kTauMax, 1e-12);
}

struct Named {
  const char* name;
  CoefficientSet c;
  double sigma;
};

std::vector<Named> solvable() {
  return {{"free", CoefficientSet::free_particle(kTauMax), 1.0},
          {"oscillator", CoefficientSet::oscillator(1.0, kTauMax), 0.5},
          {"sech2", CoefficientSet::sech2(1.0, kOmega0, kTauMax), 1.0}};
}

CoefficientSet synthetic() {
  return CoefficientSet(CoefficientFunction::harmonic(0.5, 0.1, 1.3), CoefficientFunction::constant(0.1),
                        CoefficientFunction::harmonic(0.0, 0.2, 0.7, 0.4),
                        CoefficientFunction::constant(-0.15), CoefficientFunction::constant(0.3), kTauMax);
}

std::vector<double> taus(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = kTauMax * static_cast<double>(i) / static_cast<double>(n - 1);
  return t;
}

}  // namespace

int main() {
  report(1, "delta-conservation", [] {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double s : {0.5, 1.0, 2.0}) worst = std::max(worst, delta_residual(solve(CoefficientSet::sech2(1.0, kOmega0, kTauMax), s), 1000));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return Line{worst <= 1e-8 && secs < 1.0, fmt("max|2Re(g*f)-1| = %.3g (tol 1e-8), runtime %.3g s (< 1 s)", worst, secs)};
  });

  report(2, "closed-form-agreement", [] {
    double worst = 0.0;
    std::string parts;
    for (const auto& n : solvable()) {
      const auto m = solve(n.c, n.sigma);
      double dev = 0.0;
      for (double tau : taus(1001)) {
        const auto s = m.at(tau);
        ModePair p;
        if (std::string(n.name) == "free") p = free_particle_modes(0.5 / n.sigma, n.sigma, tau);
        else if (std::string(n.name) == "oscillator") p = oscillator_modes(1.0, n.sigma, tau);
        else p = sech2_modes(1.0, kOmega0, 0.5 / n.sigma, n.sigma, tau);
        dev = std::max({dev, std::abs(s.g - p.g), std::abs(s.f - p.f)});
      }
      worst = std::max(worst, dev);
      parts += fmt(" %s=%.2g", n.name, dev);
    }
    return Line{worst <= 1e-8, fmt("max-norm deviation %.3g (tol 1e-8):", worst) + parts};
  });

  report(3, "robertson-schrodinger", [] {
    double worst = 0.0;
    for (const auto& n : solvable()) worst = std::max(worst, robertson_schrodinger_residual(solve(n.c, n.sigma), 1000));
    return Line{worst <= 1e-10, fmt("max|RS - 1/4| = %.3g (tol 1e-10)", worst)};
  });

  report(4, "oscillator-case-analysis", [] {
    const double w = 1.0, pi = std::numbers::pi;
    const double sa = 1.0 / std::sqrt(2.0);
    bool kinds = ho_case_classify(sa, w).kind == HoCase::a && ho_case_classify(0.5, w).kind == HoCase::b &&
                 ho_case_classify(1.0, w).kind == HoCase::c;

    const auto ma = solve(CoefficientSet::oscillator(w, kTauMax), sa);
    double drift = 0.0;
    for (double tau : taus(1001)) drift = std::max(drift, std::abs(deviations(ma.at(tau)).sigma_q - sa));

    double worst = 0.0;
    bool locations = true;
    for (double s : {0.5, 1.0}) {
      const auto t = ho_case_classify(s, w);
      const auto m = solve(CoefficientSet::oscillator(w, kTauMax), s);
      const auto sq = [&](double tau) { return deviations(m.at(tau)).sigma_q; };
      const auto sp = [&](double tau) { return deviations(m.at(tau)).sigma_p; };
      const auto pr = [&](double tau) { return uncertainty_products(m.at(tau)).heisenberg; };
      for (int n = 0; n < 3; ++n) {
        locations = locations &&
                    std::abs(t.sigma_q_min.location(n) - (s < sa ? n * pi / w : (2 * n + 1) * pi / (2 * w))) < 1e-15 &&
                    std::abs(t.sigma_q_max.location(n) - (s < sa ? (2 * n + 1) * pi / (2 * w) : n * pi / w)) < 1e-15;
        worst = std::max({worst, std::abs(sq(t.sigma_q_min.location(n)) - t.sigma_q_min.value),
                          std::abs(sq(t.sigma_q_max.location(n)) - t.sigma_q_max.value),
                          std::abs(sp(t.sigma_p_min.location(n)) - t.sigma_p_min.value),
                          std::abs(sp(t.sigma_p_max.location(n)) - t.sigma_p_max.value),
                          std::abs(pr(t.product_max.location(n)) - t.product_max.value)});
      }
      const double bound = (1 + 4 * std::pow(s, 4) * w * w) / (8 * s * s * w);
      worst = std::max(worst, std::abs(t.product_max.value - bound));
      double scan = 0.0;
      for (double tau : taus(4001)) scan = std::max(scan, pr(tau));
      if (scan > bound + 1e-8) locations = false;
    }
    return Line{kinds && locations && drift <= 1e-10 && worst <= 1e-8,
                fmt("a/b/c ok, case-a drift %.3g (tol 1e-10), extrema error %.3g (tol 1e-8)", drift, worst) +
                    (kinds ? "" : ", classification wrong") + (locations ? "" : ", locations wrong")};
  });

  report(5, "sech2-frequency-at-zero", [] {
    const double w2 = effective_frequency(CoefficientSet::sech2(1.0, kOmega0, kTauMax), 0.0);
    return Line{w2 == 2.0, fmt("omega^2(0) = %.17g, minus 2 = %.3g (exact)", w2, w2 - 2.0)};
  });

  report(6, "schrodinger-residual", [] {
    double worst = 0.0, mismatch = 0.0, smallest_defect = INFINITY;
    for (const auto& n : solvable()) {
      const auto m = solve(n.c, n.sigma);
      for (complex z : {complex(0.0, 0.0), complex(1.0, 1.0), complex(-0.8, 0.4)}) {
        const CoherentStateSpec spec{n.sigma, z};
        for (double tau : {0.5, 3.0, 7.5}) {
          worst = std::max(worst, schrodinger_residual(m, spec, tau).residual);
          if (z == complex(0.0, 0.0)) continue;
          SchrodingerOptions o;
          o.include_phase = false;
          const double res = schrodinger_residual(m, spec, tau, o).residual;
          const double lam = std::abs(phase_defect(m, spec, tau));
          mismatch = std::max(mismatch, std::abs(res - lam));
          smallest_defect = std::min(smallest_defect, res);
        }
      }
    }
    return Line{worst <= 1e-6 && mismatch <= 1e-4 && smallest_defect > 1e-4,
                fmt("max residual %.3g (tol 1e-6); zeroed phase vs lambda %.3g (tol 1e-4), smallest zeroed %.3g",
                    worst, mismatch, smallest_defect)};
  });

  report(7, "overlap-identity", [] {
    std::vector<complex> zs;
    const double c = 2.0 / std::numbers::sqrt2;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) zs.emplace_back(-c + i * c / 2, -c + j * c / 2);
    double worst = 0.0, drift = 0.0;
    for (const auto& n : solvable()) {
      const auto m = solve(n.c, n.sigma);
      for (const complex z1 : zs)
        for (const complex z2 : zs) {
          complex first;
          for (double tau : {0.0, 1.0, 3.0}) {
            const auto o = overlap(m, n.sigma, z1, z2, tau);
            worst = std::max(worst, o.difference);
            if (tau == 0.0) first = o.numerical;
            drift = std::max(drift, std::abs(o.numerical - first));
          }
        }
    }
    return Line{worst <= 1e-8 && drift <= 1e-8,
                fmt("max |numerical - analytic| %.3g, tau drift %.3g (tol 1e-8, 25x25 z pairs)", worst, drift)};
  });

  report(8, "completeness", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto m = solve(CoefficientSet::sech2(1.0, kOmega0, kTauMax), 1.0);
    const FamilySlice slice(m, 1.0, 1.0);
    SamplerConfig cfg;
    cfg.samples = 1'000'000;
    cfg.seed = 20261014;
    cfg.workers = 1;
    const auto a = completeness_apply(m, 1.0, 1.0, coherent_test_function(slice, 0.0), cfg);
    const auto b = completeness_apply(m, 1.0, 1.0, displaced_gaussian(slice, 1.0), cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double worst = std::max(a.relative_error, b.relative_error);
    return Line{worst <= 2e-2 && secs < 60.0,
                fmt("relative error %.3g (tol 2e-2) at 1e6 samples, one core %.3g s (< 60 s)", worst, secs)};
  });

  report(9, "quasiharmonic-decomposition", [] {
    const double w = 1.0, w0 = kOmega0;
    const auto m = solve(CoefficientSet::sech2(w, w0, kTauMax), 1.0);
    const auto spec = CoherentStateSpec::from_initial_data(1.0, 0.0, 1.0);
    const double r_sup = std::sqrt(w * w + w0 * w0) / w, th_sup = std::atan(w0 / w);
    double worst = 0.0;
    bool bounds = true;
    for (double tau : taus(1001)) {
      const auto d = quasiharmonic_decompose(w, w0, 1.0, 0.0, tau);
      worst = std::max(worst, std::abs(d.q - mean_trajectory(m, spec, tau).q));
      bounds = bounds && d.R >= 1.0 && d.R < r_sup && std::abs(d.Theta) < th_sup;
    }
    return Line{worst <= 1e-8 && bounds,
                fmt("max |q_R - q| %.3g (tol 1e-8), R and Theta bounds %s", worst, bounds ? "hold" : "violated")};
  });

  report(10, "hamilton-equations", [] {
    auto sets = solvable();
    sets.push_back({"synthetic", synthetic(), 0.8});
    double worst = 0.0;
    for (const auto& n : sets) {
      const auto m = solve(n.c, n.sigma);
      for (complex z : {complex(0.0, 0.0), complex(1.0, 1.0), complex(-1.5, 0.5)})
        worst = std::max(worst, hamilton_residual(m, CoherentStateSpec{n.sigma, z}));
    }
    return Line{worst <= 1e-6, fmt("max residual %.3g (tol 1e-6), including nonzero beta, nu, rho", worst)};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
