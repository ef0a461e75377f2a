#include "qcs/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

namespace qcs::cli {

namespace {

using nlohmann::json;

const char* kModesHeader = "tau,re_f,im_f,re_g,im_g,re_phi_shift,im_phi_shift,delta\n";
const char* kSeriesHeader = "tau,q,p,sigma_q,sigma_p,sigma_qp,rs,heisenberg,im_phi\n";
const char* kSnapshotHeader = "q,re_psi,im_psi,rho\n";

std::vector<double> uniform(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k)
    v[k] = n == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
  return v;
}

void row(std::string& out, std::initializer_list<double> values) {
  bool first = true;
  for (const double v : values) {
    if (!first) out += ',';
    out += format_double(v);
    first = false;
  }
  out += '\n';
}

json z_json(complex z) { return json::array({z.real(), z.imag()}); }

std::string state_suffix(std::size_t k) { return k == 0 ? "" : "_" + std::to_string(k); }

VerificationReport failed_report(const std::string& check, const Scenario& s, double tol,
                                 json meta, const std::exception& e) {
  meta["error"] = e.what();
  return make_report(check, s.id, std::numeric_limits<double>::infinity(), tol, std::move(meta));
}

void delta_suite(const Scenario& s, const ModeTrajectory& m, std::vector<VerificationReport>& out) {
  const json meta = {{"samples", s.tau_samples}, {"tau_max", s.tau_max},
                     {"solver_tol", s.tolerances.solver}};
  out.push_back(make_report("delta", s.id, delta_residual(m, s.tau_samples), s.tolerances.delta, meta));
  out.push_back(make_report("robertson-schrodinger", s.id,
                            robertson_schrodinger_residual(m, s.tau_samples),
                            s.tolerances.robertson_schrodinger, meta));
}

void schrodinger_suite(const Scenario& s, const ModeTrajectory& m,
                       std::vector<VerificationReport>& out) {
  SchrodingerOptions opt;
  opt.h_tau = s.schrodinger.h_tau;
  opt.points = s.schrodinger.points;
  opt.half_width = s.schrodinger.half_width;
  for (std::size_t k = 0; k < s.states.size(); ++k) {
    const CoherentStateSpec spec{s.sigma_q, s.states[k]};
    json meta = {{"state", k}, {"z", z_json(spec.z)}, {"points", opt.points},
                 {"h_tau", opt.h_tau}, {"half_width", opt.half_width}};
    try {
      double worst = 0.0;
      json probes = json::array();
      for (const double tau : s.schrodinger.probes) {
        const SchrodingerResult r = schrodinger_residual(m, spec, tau, opt);
        worst = std::max(worst, r.residual);
        probes.push_back({{"tau", tau}, {"residual", r.residual},
                          {"refined_residual", r.refined_residual}, {"ratio", r.ratio}});
      }
      meta["probes"] = probes;
      out.push_back(make_report("schrodinger", s.id, worst, s.tolerances.schrodinger, meta));
    } catch (const Error& e) {
      out.push_back(failed_report("schrodinger", s, s.tolerances.schrodinger, meta, e));
    }
    if (!s.schrodinger.zeroed_phase) continue;

    SchrodingerOptions zeroed = opt;
    zeroed.include_phase = false;
    json zmeta = meta;
    zmeta.erase("probes");
    try {
      double worst = 0.0;
      json probes = json::array();
      for (const double tau : s.schrodinger.probes) {
        const SchrodingerResult r = schrodinger_residual(m, spec, tau, zeroed);
        const double lambda = std::abs(phase_defect(m, spec, tau));
        worst = std::max(worst, std::abs(r.residual - lambda));
        probes.push_back({{"tau", tau}, {"residual", r.residual}, {"lambda", lambda}});
      }
      zmeta["probes"] = probes;
      out.push_back(
          make_report("schrodinger-zeroed-phase", s.id, worst, s.tolerances.zeroed_phase, zmeta));
    } catch (const Error& e) {
      out.push_back(failed_report("schrodinger-zeroed-phase", s, s.tolerances.zeroed_phase, zmeta, e));
    }
  }
}

void overlap_suite(const Scenario& s, const ModeTrajectory& m,
                   std::vector<VerificationReport>& out) {
  const double edge = s.overlap.z_max / std::numbers::sqrt2;
  const auto axis = uniform(-edge, edge, s.overlap.z_points);
  std::vector<complex> zs;
  for (const double x : axis)
    for (const double y : axis) zs.emplace_back(x, y);

  json meta = {{"z_points", s.overlap.z_points}, {"z_max", s.overlap.z_max},
               {"taus", s.overlap.taus}, {"pairs", zs.size() * zs.size()}};
  try {
    double worst = 0.0, drift = 0.0;
    std::vector<complex> first;
    for (std::size_t t = 0; t < s.overlap.taus.size(); ++t) {
      std::size_t idx = 0;
      for (const complex z1 : zs)
        for (const complex z2 : zs) {
          const OverlapResult r = overlap(m, s.sigma_q, z1, z2, s.overlap.taus[t]);
          worst = std::max(worst, r.difference);
          if (t == 0)
            first.push_back(r.numerical);
          else
            drift = std::max(drift, std::abs(r.numerical - first[idx]));
          ++idx;
        }
    }
    out.push_back(make_report("overlap", s.id, worst, s.tolerances.overlap, meta));
    out.push_back(make_report("overlap-tau-invariance", s.id, drift, s.tolerances.overlap, meta));
  } catch (const Error& e) {
    out.push_back(failed_report("overlap", s, s.tolerances.overlap, meta, e));
  }
}

void completeness_suite(const Scenario& s, const ModeTrajectory& m,
                        std::vector<VerificationReport>& out) {
  const double tau = *s.completeness.tau;
  SamplerConfig cfg;
  cfg.samples = s.completeness.samples;
  cfg.radius = s.completeness.radius;
  cfg.seed = s.seed;
  cfg.workers = s.completeness.workers;
  cfg.tolerance = s.tolerances.completeness;
  const FamilySlice slice(m, s.sigma_q, tau);
  for (const CompletenessTest& t : s.completeness.tests) {
    json meta = {{"tau", tau}, {"samples", cfg.samples}, {"seed", cfg.seed},
                 {"radius", cfg.radius}, {"block", cfg.block}};
    if (t.kind == CompletenessTest::Kind::coherent) {
      meta["test_function"] = "coherent";
      meta["z"] = z_json(t.z);
    } else {
      meta["test_function"] = "gaussian";
      meta["q0"] = t.q0;
      meta["p0"] = t.p0;
    }
    try {
      const TestFunction psi = t.kind == CompletenessTest::Kind::coherent
                                   ? coherent_test_function(slice, t.z)
                                   : displaced_gaussian(slice, t.q0, t.p0);
      const CompletenessResult r = completeness_apply(m, s.sigma_q, tau, psi, cfg);
      meta["statistical_error"] = r.statistical_error;
      meta["probes"] = r.probe_q.size();
      out.push_back(make_report("completeness", s.id, r.relative_error, cfg.tolerance, meta));
    } catch (const UndersamplingError& e) {
      meta["suggested_samples"] = e.suggested_samples();
      out.push_back(failed_report("completeness", s, cfg.tolerance, meta, e));
    } catch (const Error& e) {
      out.push_back(failed_report("completeness", s, cfg.tolerance, meta, e));
    }
  }
}

std::vector<double> norm_taus(const Scenario& s) {
  if (!s.snapshots.empty()) return s.snapshots;
  return {0.0, 0.5 * s.tau_max, s.tau_max};
}

void norm_suite(const Scenario& s, const ModeTrajectory& m, std::vector<VerificationReport>& out) {
  const auto taus = norm_taus(s);
  for (std::size_t k = 0; k < s.states.size(); ++k) {
    const CoherentStateSpec spec{s.sigma_q, s.states[k]};
    double worst = 0.0;
    for (const double tau : taus)
      worst = std::max(worst, norm_check(snapshot(m, spec, tau, s.grid_points, s.grid_half_width)));
    out.push_back(make_report("norm", s.id, worst, s.tolerances.norm,
                              {{"state", k}, {"z", z_json(spec.z)}, {"taus", taus},
                               {"points", s.grid_points}, {"half_width", s.grid_half_width}}));
  }
}

void hamilton_suite(const Scenario& s, const ModeTrajectory& m,
                    std::vector<VerificationReport>& out) {
  for (std::size_t k = 0; k < s.states.size(); ++k) {
    const CoherentStateSpec spec{s.sigma_q, s.states[k]};
    out.push_back(make_report("hamilton", s.id, hamilton_residual(m, spec), s.tolerances.hamilton,
                              {{"state", k}, {"z", z_json(spec.z)}, {"samples", 400},
                               {"h", 1e-4}}));
  }
}

std::string modes_csv(const Scenario& s, const ModeTrajectory& m) {
  std::string out = kModesHeader;
  for (const double tau : uniform(0.0, s.tau_max, s.tau_samples)) {
    const ModeState st = m.at(tau);
    row(out, {tau, st.f.real(), st.f.imag(), st.g.real(), st.g.imag(), st.phi_shift.real(),
              st.phi_shift.imag(), delta_invariant(st)});
  }
  return out;
}

std::string frequency_csv(const Scenario& s) {
  std::string out = "tau,omega2\n";
  for (const double tau : uniform(0.0, s.tau_max, s.tau_samples))
    row(out, {tau, effective_frequency(s.coefficients, tau)});
  return out;
}

std::string series_csv(const Scenario& s, const ModeTrajectory& m, complex z) {
  std::string out = kSeriesHeader;
  const CoherentStateSpec spec{s.sigma_q, z};
  for (const double tau : uniform(0.0, s.tau_max, s.tau_samples)) {
    const SeriesRow r = series_row(m, spec, tau);
    row(out, {r.tau, r.q, r.p, r.sigma_q, r.sigma_p, r.sigma_qp, r.rs, r.heisenberg, r.im_phase});
  }
  return out;
}

std::string snapshot_csv(const StateSnapshot& snap) {
  std::string out = kSnapshotHeader;
  for (std::size_t j = 0; j < snap.q_grid.size(); ++j)
    row(out, {snap.q_grid[j], snap.psi[j].real(), snap.psi[j].imag(), snap.rho[j]});
  return out;
}

void print_report(std::ostream& log, const VerificationReport& r) {
  char buf[256];
  std::string where;
  if (r.metadata.contains("state")) where = " state " + std::to_string(r.metadata["state"].get<int>());
  if (r.metadata.contains("test_function"))
    where = " " + r.metadata["test_function"].get<std::string>();
  std::snprintf(buf, sizeof buf, "%s %-28s residual=%.3e tolerance=%.1e%s",
                r.passed ? "PASS" : "FAIL", r.check.c_str(), r.residual, r.tolerance,
                where.c_str());
  log << buf;
  if (r.metadata.contains("error")) log << " (" << r.metadata["error"].get<std::string>() << ")";
  log << '\n';
}

std::vector<std::string> split(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    std::string item(text.substr(start, end - start));
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    parts.push_back(item);
    start = end + 1;
  }
  return parts;
}

}  // namespace

bool RunResult::passed() const {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; });
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + tmp.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (const std::string& item : split(text)) {
    if (item.empty()) throw UsageError("empty item in number list '" + std::string(text) + "'");
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size() || !std::isfinite(v))
      throw UsageError("'" + item + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

std::vector<CheckSuite> parse_suite_list(std::span<const std::string> names) {
  std::vector<CheckSuite> out;
  for (const std::string& name : names)
    for (const std::string& item : split(name)) {
      const auto s = parse_suite(item);
      if (!s)
        throw UsageError("unknown check suite '" + item +
                         "' (delta, schrodinger, overlap, completeness, norm, closed-form, hamilton)");
      if (std::find(out.begin(), out.end(), *s) == out.end()) out.push_back(*s);
    }
  return out;
}

void apply_overrides(Scenario& s, const RunOptions& options) {
  if (options.seed) s.seed = *options.seed;
  if (options.snapshots) {
    for (const double tau : *options.snapshots)
      if (tau < 0.0 || tau > s.tau_max)
        throw ScenarioError("--snapshots: tau " + format_double(tau) + " lies outside [0, " +
                                format_double(s.tau_max) + "]",
                            "snapshots", 0, 0);
    s.snapshots = *options.snapshots;
  }
  if (options.checks) {
    if (!has_closed_form(s) &&
        std::find(options.checks->begin(), options.checks->end(), CheckSuite::closed_form) !=
            options.checks->end())
      throw ScenarioError("--check: closed-form needs a free-particle, oscillator or sech2 profile",
                          "checks", 0, 0);
    s.checks = *options.checks;
  }
  if (options.tolerance) {
    const double t = *options.tolerance;
    if (!(t > 0.0) || !std::isfinite(t))
      throw ScenarioError("--tol must be positive", "tolerances", 0, 0);
    Tolerances& k = s.tolerances;
    k.delta = k.robertson_schrodinger = k.schrodinger = k.zeroed_phase = k.overlap =
        k.completeness = k.norm = k.hamilton = t;
    k.closed_form = t;
  }
}

std::vector<VerificationReport> run_checks(const Scenario& s, const ModeTrajectory& modes,
                                           std::span<const CheckSuite> suites) {
  std::vector<VerificationReport> out;
  for (const CheckSuite suite : suites) {
    switch (suite) {
      case CheckSuite::delta: delta_suite(s, modes, out); break;
      case CheckSuite::schrodinger: schrodinger_suite(s, modes, out); break;
      case CheckSuite::overlap: overlap_suite(s, modes, out); break;
      case CheckSuite::completeness: completeness_suite(s, modes, out); break;
      case CheckSuite::norm: norm_suite(s, modes, out); break;
      case CheckSuite::closed_form: {
        auto r = closed_form_agreement(modes, s.id, s.tolerances.closed_form, s.tau_samples);
        out.insert(out.end(), r.begin(), r.end());
        break;
      }
      case CheckSuite::hamilton: hamilton_suite(s, modes, out); break;
    }
  }
  return out;
}

RunResult run_scenario(const Scenario& s, const RunOptions& options, std::ostream& log) {
  RunResult result;
  result.directory = options.out_dir / s.id;
  std::filesystem::create_directories(result.directory);

  const ModeTrajectory modes =
      solve_modes(s.coefficients, InitialData::coherent(s.sigma_q), s.tau_max, s.tolerances.solver);

  json files = json::array();
  const auto emit = [&](const std::string& name, std::string_view content) {
    write_atomic(result.directory / name, content);
    files.push_back(name);
  };

  json summary = {{"schema", kScenarioSchema}, {"id", s.id}, {"description", s.description},
                  {"sigma_q", s.sigma_q}, {"tau_max", s.tau_max}, {"tau_samples", s.tau_samples},
                  {"seed", s.seed},
                  {"solver", {{"tol", s.tolerances.solver}, {"steps", modes.knots().size() - 1}}}};
  json states = json::array();
  for (const complex z : s.states) {
    const CoherentStateSpec spec{s.sigma_q, z};
    states.push_back({{"z", z_json(z)}, {"q0", spec.q0()}, {"p0", spec.p0()}});
  }
  summary["states"] = states;

  if (const auto profile = detect_profile(s.coefficients)) {
    summary["profile"] = std::string(to_string(profile->kind));
    if (profile->kind == SolvableProfile::Kind::oscillator) {
      const HoCaseTable t = ho_case_classify(s.sigma_q, profile->omega);
      const std::string c(1, to_char(t.kind));
      summary["ho_case"] = c;
      log << "oscillator case " << c << " (sigma_q sqrt(2 omega) = "
          << format_double(s.sigma_q * std::sqrt(2.0 * profile->omega)) << ")\n";
    }
  } else {
    summary["profile"] = nullptr;
  }

  if (options.write_series) {
    emit("modes.csv", modes_csv(s, modes));
    emit("frequency.csv", frequency_csv(s));
    for (std::size_t k = 0; k < s.states.size(); ++k)
      emit("series" + state_suffix(k) + ".csv", series_csv(s, modes, s.states[k]));
    for (const double tau : s.snapshots)
      for (std::size_t k = 0; k < s.states.size(); ++k) {
        const StateSnapshot snap = snapshot(modes, CoherentStateSpec{s.sigma_q, s.states[k]}, tau,
                                            s.grid_points, s.grid_half_width);
        emit("snapshot_" + format_double(tau) + state_suffix(k) + ".csv", snapshot_csv(snap));
      }
  }

  result.reports = run_checks(s, modes, s.checks);
  for (const auto& r : result.reports) print_report(log, r);
  emit("reports.json", to_json(result.reports).dump(2) + "\n");

  const auto failed = std::count_if(result.reports.begin(), result.reports.end(),
                                    [](const auto& r) { return !r.passed; });
  json checks = json::array();
  for (const CheckSuite c : s.checks) checks.push_back(std::string(to_string(c)));
  summary["checks"] = checks;
  summary["reports"] = {{"total", result.reports.size()}, {"failed", failed}};
  files.push_back("summary.json");
  summary["files"] = files;
  write_atomic(result.directory / "summary.json", summary.dump(2) + "\n");
  result.summary = summary;
  return result;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherent states of time-dependent quadratic Hamiltonians", "qcs"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", snapshots, checks;
  double tol = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> positional;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output root; files land in <out>/<scenario id>/");
    sub->add_option("--tol", tol, "Replace every verification tolerance");
    sub->add_option("--seed", seed, "Monte-Carlo seed");
    sub->add_option("--snapshots", snapshots, "Comma-separated snapshot taus");
    sub->add_option("--check", checks, "Comma-separated check suites");
  };
  CLI::App* run = app.add_subcommand("run", "Solve a scenario and write series, snapshots, reports");
  run->add_option("--scenario", scenario_path, "Scenario file")->required();
  common(run);
  CLI::App* check = app.add_subcommand("check", "Run verification suites; exit 1 on any failure");
  check->add_option("--scenario", scenario_path, "Scenario file");
  check->add_option("args", positional, "[scenario] [suite ...]");
  common(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  CLI::App* active = run->parsed() ? run : check;
  RunOptions options;
  Scenario scenario;
  try {
    if (active == check && scenario_path.empty()) {
      if (positional.empty()) throw UsageError("check needs a scenario path");
      scenario_path = positional.front();
      positional.erase(positional.begin());
    }
    options.out_dir = out_dir;
    if (active->count("--tol")) options.tolerance = tol;
    if (active->count("--seed")) options.seed = seed;
    if (active->count("--snapshots")) options.snapshots = parse_number_list(snapshots);
    std::vector<std::string> names = positional;
    if (active->count("--check")) names.push_back(checks);
    if (!names.empty()) options.checks = parse_suite_list(names);
    if (active == check) options.write_series = false;

    scenario = load_scenario(scenario_path);
    apply_overrides(scenario, options);
  } catch (const Error& e) {
    err << "qcs: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const RunResult r = run_scenario(scenario, options, out);
    out << scenario.id << ": " << r.reports.size() << " reports, "
        << std::count_if(r.reports.begin(), r.reports.end(), [](const auto& x) { return !x.passed; })
        << " failed; outputs in " << r.directory.string() << '\n';
    return r.passed() ? kExitSuccess : kExitCheckFailure;
  } catch (const std::exception& e) {
    err << "qcs: scenario '" << scenario.id << "': " << e.what() << '\n';
    return kExitCheckFailure;
  }
}

}  // namespace qcs::cli
