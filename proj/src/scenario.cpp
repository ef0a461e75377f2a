#include "qcs/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qcs/verify.hpp"

namespace qcs {

namespace {

using nlohmann::json;

constexpr std::array<CheckSuite, 7> kSuites = {
    CheckSuite::delta,        CheckSuite::schrodinger, CheckSuite::overlap,
    CheckSuite::completeness, CheckSuite::norm,        CheckSuite::closed_form,
    CheckSuite::hamilton};

std::string escape_token(std::string_view k) {
  std::string r;
  for (const char c : k) {
    if (c == '~')
      r += "~0";
    else if (c == '/')
      r += "~1";
    else
      r += c;
  }
  return r;
}

// Location bookkeeping: JSON pointer for lookup, dotted name for messages.
struct Path {
  std::string ptr;
  std::string name;

  Path key(std::string_view k) const {
    return Path{ptr + "/" + escape_token(k), name.empty() ? std::string(k) : name + "." + std::string(k)};
  }
  Path at(std::size_t i) const {
    return Path{ptr + "/" + std::to_string(i), name + "[" + std::to_string(i) + "]"};
  }
};

class Scanner {
 public:
  explicit Scanner(std::string_view s) : s_(s) {}

  std::vector<std::pair<std::string, std::size_t>> run() {
    value("");
    return std::move(out_);
  }

 private:
  bool more() const { return i_ < s_.size(); }
  char peek() const { return more() ? s_[i_] : '\0'; }

  void ws() {
    while (more() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\n' || s_[i_] == '\r')) ++i_;
  }

  std::string string() {
    std::string r;
    ++i_;
    while (more() && s_[i_] != '"') {
      if (s_[i_] == '\\' && i_ + 1 < s_.size()) {
        const char c = s_[i_ + 1];
        i_ += 2;
        switch (c) {
          case 'n': r += '\n'; break;
          case 't': r += '\t'; break;
          case 'r': r += '\r'; break;
          case 'b': r += '\b'; break;
          case 'f': r += '\f'; break;
          case 'u':
            r += "\\u";
            r += s_.substr(i_, 4);
            i_ += 4;
            break;
          default: r += c;
        }
      } else {
        r += s_[i_++];
      }
    }
    ++i_;
    return r;
  }

  void value(const std::string& ptr) {
    ws();
    const char c = peek();
    if (c == '{') {
      ++i_;
      ws();
      if (peek() == '}') {
        ++i_;
        return;
      }
      while (more()) {
        ws();
        const std::size_t at = i_;
        const std::string child = ptr + "/" + escape_token(string());
        out_.emplace_back(child, at);
        ws();
        ++i_;  // ':'
        value(child);
        ws();
        if (peek() == ',') {
          ++i_;
          continue;
        }
        ++i_;  // '}'
        return;
      }
    } else if (c == '[') {
      ++i_;
      ws();
      if (peek() == ']') {
        ++i_;
        return;
      }
      for (std::size_t k = 0; more(); ++k) {
        ws();
        const std::string child = ptr + "/" + std::to_string(k);
        out_.emplace_back(child, i_);
        value(child);
        ws();
        if (peek() == ',') {
          ++i_;
          continue;
        }
        ++i_;  // ']'
        return;
      }
    } else if (c == '"') {
      string();
    } else {
      while (more() && std::string_view(",]} \t\r\n").find(s_[i_]) == std::string_view::npos) ++i_;
    }
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::vector<std::pair<std::string, std::size_t>> out_;
};

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < offset; ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

class Reader {
 public:
  Reader(std::string_view text, std::string origin)
      : text_(text), origin_(std::move(origin)), locations_(json_locations(text)) {}

  [[noreturn]] void fail(const Path& p, const std::string& msg) const {
    // Exact pointer, else the closest enclosing one that exists in the text.
    std::string probe = p.ptr;
    std::optional<std::size_t> offset;
    while (!offset) {
      for (const auto& [ptr, at] : locations_)
        if (ptr == probe) {
          offset = at;
          break;
        }
      if (offset || probe.empty()) break;
      probe.erase(probe.rfind('/'));
    }
    std::ostringstream os;
    std::size_t line = 0, col = 0;
    os << origin_;
    if (offset) {
      std::tie(line, col) = line_col(text_, *offset);
      os << ":" << line << ":" << col;
    }
    const std::string field = p.name.empty() ? "<root>" : p.name;
    os << ": field '" << field << "': " << msg;
    throw ScenarioError(os.str(), field, line, col);
  }

  const json& object(const json& v, const Path& p) const {
    if (!v.is_object()) fail(p, "must be an object");
    return v;
  }

  void only(const json& obj, const Path& p, std::initializer_list<std::string_view> keys) const {
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
        fail(p.key(it.key()), "unknown field");
  }

  const json* member(const json& obj, std::string_view key) const {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  const json& required(const json& obj, const Path& p, std::string_view key) const {
    const json* v = member(obj, key);
    if (!v) fail(p.key(key), "is required");
    return *v;
  }

  double number(const json& v, const Path& p) const {
    if (!v.is_number()) fail(p, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(p, "must be finite");
    return x;
  }

  double number(const json& obj, const Path& p, std::string_view key, double fallback) const {
    const json* v = member(obj, key);
    return v ? number(*v, p.key(key)) : fallback;
  }

  double positive(const json& obj, const Path& p, std::string_view key, double fallback) const {
    const double x = number(obj, p, key, fallback);
    if (!(x > 0.0)) fail(p.key(key), "must be positive");
    return x;
  }

  std::uint64_t unsigned_integer(const json& v, const Path& p) const {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
      if (v.get<std::int64_t>() < 0) fail(p, "must be a nonnegative integer");
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    fail(p, "must be a nonnegative integer");
  }

  std::size_t count(const json& obj, const Path& p, std::string_view key, std::size_t fallback,
                    std::size_t minimum) const {
    const json* v = member(obj, key);
    if (!v) return fallback;
    const std::uint64_t n = unsigned_integer(*v, p.key(key));
    if (n < minimum) fail(p.key(key), "must be at least " + std::to_string(minimum));
    return static_cast<std::size_t>(n);
  }

  std::string text(const json& v, const Path& p) const {
    if (!v.is_string()) fail(p, "must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& v, const Path& p) const {
    if (!v.is_array()) fail(p, "must be an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number(v[k], p.at(k)));
    return out;
  }

  std::vector<double> increasing(const json& v, const Path& p, std::size_t minimum) const {
    auto xs = numbers(v, p);
    if (xs.size() < minimum) fail(p, "needs at least " + std::to_string(minimum) + " samples");
    for (std::size_t k = 1; k < xs.size(); ++k)
      if (!(xs[k] > xs[k - 1])) fail(p.at(k), "samples must be strictly increasing");
    return xs;
  }

  complex complex_pair(const json& v, const Path& p) const {
    if (!v.is_array() || v.size() != 2) fail(p, "must be a [re, im] pair");
    return {number(v[0], p.at(0)), number(v[1], p.at(1))};
  }

 private:
  std::string_view text_;
  std::string origin_;
  std::vector<std::pair<std::string, std::size_t>> locations_;
};

Potential parse_potential(const Reader& r, const json& v, const Path& p, double tau_max) {
  r.object(v, p);
  const std::string kind = r.text(r.required(v, p, "kind"), p.key("kind"));
  if (kind == "polynomial") {
    r.only(v, p, {"kind", "coefficients"});
    auto c = r.numbers(r.required(v, p, "coefficients"), p.key("coefficients"));
    if (c.empty()) r.fail(p.key("coefficients"), "needs at least one coefficient");
    return Potential::polynomial(std::move(c));
  }
  if (kind == "sech2") {
    r.only(v, p, {"kind", "amplitude", "width"});
    return Potential::sech2(r.number(r.required(v, p, "amplitude"), p.key("amplitude")),
                            r.number(r.required(v, p, "width"), p.key("width")));
  }
  if (kind == "tabulated") {
    r.only(v, p, {"kind", "q", "values"});
    auto q = r.increasing(r.required(v, p, "q"), p.key("q"), 2);
    auto vals = r.numbers(r.required(v, p, "values"), p.key("values"));
    if (vals.size() != q.size()) r.fail(p.key("values"), "must have as many entries as q");
    if (q.front() > 0.0 || q.back() < tau_max)
      r.fail(p.key("q"), "tabulated potential must cover [0, tau_max]");
    return Potential::tabulated(std::move(q), std::move(vals));
  }
  r.fail(p.key("kind"), "unknown potential kind '" + kind + "' (polynomial, sech2, tabulated)");
}

CoefficientFunction parse_coefficient(const Reader& r, const json& v, const Path& p,
                                      double tau_max) {
  if (v.is_number()) return CoefficientFunction::constant(r.number(v, p));
  r.object(v, p);
  const std::string kind = r.text(r.required(v, p, "kind"), p.key("kind"));
  if (kind == "constant") {
    r.only(v, p, {"kind", "value"});
    return CoefficientFunction::constant(r.number(r.required(v, p, "value"), p.key("value")));
  }
  if (kind == "harmonic") {
    r.only(v, p, {"kind", "offset", "amplitude", "frequency", "phase"});
    return CoefficientFunction::harmonic(
        r.number(v, p, "offset", 0.0), r.number(r.required(v, p, "amplitude"), p.key("amplitude")),
        r.number(r.required(v, p, "frequency"), p.key("frequency")), r.number(v, p, "phase", 0.0));
  }
  if (kind == "sech2") {
    r.only(v, p, {"kind", "omega", "omega0"});
    const double omega = r.positive(v, p, "omega", 0.0);
    const double omega0 = r.number(r.required(v, p, "omega0"), p.key("omega0"));
    if (omega0 < 0.0) r.fail(p.key("omega0"), "must be nonnegative");
    return CoefficientFunction::sech2(omega, omega0);
  }
  if (kind == "tabulated") {
    r.only(v, p, {"kind", "tau", "values"});
    auto tau = r.increasing(r.required(v, p, "tau"), p.key("tau"), 2);
    auto vals = r.numbers(r.required(v, p, "values"), p.key("values"));
    if (vals.size() != tau.size()) r.fail(p.key("values"), "must have as many entries as tau");
    if (tau.front() > 0.0 || tau.back() < tau_max)
      r.fail(p.key("tau"), "tabulated samples must cover [0, tau_max]");
    return CoefficientFunction::tabulated(std::move(tau), std::move(vals));
  }
  if (kind == "stationary") {
    r.only(v, p, {"kind", "potential", "energy"});
    Potential pot = parse_potential(r, r.required(v, p, "potential"), p.key("potential"), tau_max);
    return CoefficientFunction::stationary(
        std::move(pot), r.number(r.required(v, p, "energy"), p.key("energy")));
  }
  r.fail(p.key("kind"),
         "unknown coefficient kind '" + kind + "' (constant, harmonic, sech2, tabulated, stationary)");
}

void require_in(const Reader& r, const Path& p, double tau, double lo, double hi,
                const std::string& what) {
  if (tau < lo || tau > hi) {
    std::ostringstream os;
    os << what << " " << tau << " lies outside [" << lo << ", " << hi << "]";
    r.fail(p, os.str());
  }
}

}  // namespace

std::string_view to_string(CheckSuite s) {
  switch (s) {
    case CheckSuite::delta: return "delta";
    case CheckSuite::schrodinger: return "schrodinger";
    case CheckSuite::overlap: return "overlap";
    case CheckSuite::completeness: return "completeness";
    case CheckSuite::norm: return "norm";
    case CheckSuite::closed_form: return "closed-form";
    case CheckSuite::hamilton: return "hamilton";
  }
  return "unknown";
}

std::optional<CheckSuite> parse_suite(std::string_view name) {
  for (const CheckSuite s : kSuites)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

std::span<const CheckSuite> all_suites() { return kSuites; }

bool is_filesystem_safe(std::string_view id) {
  if (id.empty() || id == "." || id == "..") return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.';
  });
}

std::vector<std::pair<std::string, std::size_t>> json_locations(std::string_view text) {
  return Scanner(text).run();
}

bool has_closed_form(const Scenario& s) { return detect_profile(s.coefficients).has_value(); }

Scenario parse_scenario(std::string_view text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, col] = line_col(text, offset);
    std::string detail = e.what();
    if (const auto k = detail.find(": "); k != std::string::npos) detail = detail.substr(k + 2);
    std::ostringstream os;
    os << origin << ":" << line << ":" << col << ": parse error: " << detail;
    throw ScenarioError(os.str(), "", line, col);
  }

  const Reader r(text, origin);
  const Path root;
  r.object(doc, root);
  r.only(doc, root,
         {"schema", "id", "description", "coefficients", "sigma_q", "states", "tau_max",
          "tau_samples", "grid", "tolerances", "seed", "snapshots", "checks", "schrodinger",
          "overlap", "completeness"});

  Scenario s;
  {
    const Path p = root.key("schema");
    const json& v = r.required(doc, root, "schema");
    if (!v.is_number_integer() || v.get<std::int64_t>() != kScenarioSchema)
      r.fail(p, "unsupported schema version (expected " + std::to_string(kScenarioSchema) + ")");
  }
  s.id = r.text(r.required(doc, root, "id"), root.key("id"));
  if (!is_filesystem_safe(s.id))
    r.fail(root.key("id"), "must be nonempty and use only letters, digits, '_', '-', '.'");
  if (const json* v = r.member(doc, "description"))
    s.description = r.text(*v, root.key("description"));

  s.tau_max = r.positive(doc, root, "tau_max", s.tau_max);
  s.tau_samples = r.count(doc, root, "tau_samples", s.tau_samples, 2);
  s.sigma_q = r.positive(doc, root, "sigma_q", s.sigma_q);

  {
    const Path p = root.key("coefficients");
    const json& c = r.object(r.required(doc, root, "coefficients"), p);
    r.only(c, p, {"alpha", "beta", "rho", "nu", "eps"});
    const auto get = [&](std::string_view k) {
      const json* v = r.member(c, k);
      return v ? parse_coefficient(r, *v, p.key(k), s.tau_max) : CoefficientFunction::constant(0.0);
    };
    CoefficientFunction alpha = get("alpha"), beta = get("beta"), rho = get("rho"), nu = get("nu"),
                        eps = get("eps");
    try {
      s.coefficients = CoefficientSet(alpha, beta, rho, nu, eps, s.tau_max);
      for (const double tau : {0.0, 0.5 * s.tau_max, s.tau_max}) (void)s.coefficients.at(tau);
    } catch (const Error& e) {
      r.fail(p, e.what());
    }
  }

  if (const json* v = r.member(doc, "states")) {
    const Path p = root.key("states");
    if (!v->is_array() || v->empty()) r.fail(p, "must be a nonempty array");
    for (std::size_t k = 0; k < v->size(); ++k) {
      const Path e = p.at(k);
      const json& st = r.object((*v)[k], e);
      if (st.contains("z")) {
        r.only(st, e, {"z"});
        s.states.push_back(r.complex_pair(st["z"], e.key("z")));
      } else {
        r.only(st, e, {"q0", "p0"});
        const double q0 = r.number(r.required(st, e, "q0"), e.key("q0"));
        const double p0 = r.number(r.required(st, e, "p0"), e.key("p0"));
        s.states.push_back(z_from_initial_data(q0, p0, s.sigma_q));
      }
    }
  } else {
    s.states.push_back(complex{});
  }

  if (const json* v = r.member(doc, "grid")) {
    const Path p = root.key("grid");
    r.object(*v, p);
    r.only(*v, p, {"points", "half_width"});
    s.grid_points = r.count(*v, p, "points", s.grid_points, 5);
    s.grid_half_width = r.positive(*v, p, "half_width", s.grid_half_width);
  }

  if (const json* v = r.member(doc, "tolerances")) {
    const Path p = root.key("tolerances");
    r.object(*v, p);
    r.only(*v, p,
           {"solver", "delta", "robertson_schrodinger", "schrodinger", "zeroed_phase", "overlap",
            "completeness", "norm", "hamilton", "closed_form"});
    Tolerances& t = s.tolerances;
    t.solver = r.positive(*v, p, "solver", t.solver);
    if (t.solver < 1e-14 || t.solver > 1e-6) r.fail(p.key("solver"), "must lie in [1e-14, 1e-6]");
    t.delta = r.positive(*v, p, "delta", t.delta);
    t.robertson_schrodinger = r.positive(*v, p, "robertson_schrodinger", t.robertson_schrodinger);
    t.schrodinger = r.positive(*v, p, "schrodinger", t.schrodinger);
    t.zeroed_phase = r.positive(*v, p, "zeroed_phase", t.zeroed_phase);
    t.overlap = r.positive(*v, p, "overlap", t.overlap);
    t.completeness = r.positive(*v, p, "completeness", t.completeness);
    t.norm = r.positive(*v, p, "norm", t.norm);
    t.hamilton = r.positive(*v, p, "hamilton", t.hamilton);
    if (v->contains("closed_form")) t.closed_form = r.positive(*v, p, "closed_form", 0.0);
  }

  if (const json* v = r.member(doc, "seed")) s.seed = r.unsigned_integer(*v, root.key("seed"));

  if (const json* v = r.member(doc, "snapshots")) {
    const Path p = root.key("snapshots");
    s.snapshots = r.numbers(*v, p);
    for (std::size_t k = 0; k < s.snapshots.size(); ++k)
      require_in(r, p.at(k), s.snapshots[k], 0.0, s.tau_max, "snapshot tau");
  }

  if (const json* v = r.member(doc, "checks")) {
    const Path p = root.key("checks");
    if (!v->is_array()) r.fail(p, "must be an array of check names");
    for (std::size_t k = 0; k < v->size(); ++k) {
      const std::string name = r.text((*v)[k], p.at(k));
      const auto suite = parse_suite(name);
      if (!suite)
        r.fail(p.at(k), "unknown check '" + name +
                            "' (delta, schrodinger, overlap, completeness, norm, closed-form, hamilton)");
      if (*suite == CheckSuite::closed_form && !has_closed_form(s))
        r.fail(p.at(k), "closed-form needs a free-particle, oscillator or sech2 profile");
      if (std::find(s.checks.begin(), s.checks.end(), *suite) == s.checks.end())
        s.checks.push_back(*suite);
    }
  } else {
    s.checks = {CheckSuite::delta, CheckSuite::norm, CheckSuite::hamilton};
    if (has_closed_form(s)) s.checks.push_back(CheckSuite::closed_form);
  }

  const double h_default = s.schrodinger.h_tau;
  if (const json* v = r.member(doc, "schrodinger")) {
    const Path p = root.key("schrodinger");
    r.object(*v, p);
    r.only(*v, p, {"probes", "h_tau", "points", "half_width", "zeroed_phase"});
    s.schrodinger.h_tau = r.positive(*v, p, "h_tau", h_default);
    s.schrodinger.points = r.count(*v, p, "points", s.schrodinger.points, 5);
    s.schrodinger.half_width = r.positive(*v, p, "half_width", s.schrodinger.half_width);
    if (const json* z = r.member(*v, "zeroed_phase")) {
      if (!z->is_boolean()) r.fail(p.key("zeroed_phase"), "must be true or false");
      s.schrodinger.zeroed_phase = z->get<bool>();
    }
    if (const json* pr = r.member(*v, "probes")) {
      s.schrodinger.probes = r.numbers(*pr, p.key("probes"));
      for (std::size_t k = 0; k < s.schrodinger.probes.size(); ++k)
        require_in(r, p.key("probes").at(k), s.schrodinger.probes[k], s.schrodinger.h_tau,
                   s.tau_max - s.schrodinger.h_tau, "probe tau");
    }
  }
  if (s.schrodinger.probes.empty()) s.schrodinger.probes = {0.5 * s.tau_max};
  if (2.0 * s.schrodinger.h_tau >= s.tau_max)
    r.fail(root.key("schrodinger").key("h_tau"), "must be below tau_max / 2");

  if (const json* v = r.member(doc, "overlap")) {
    const Path p = root.key("overlap");
    r.object(*v, p);
    r.only(*v, p, {"taus", "z_points", "z_max"});
    s.overlap.z_points = r.count(*v, p, "z_points", s.overlap.z_points, 1);
    s.overlap.z_max = r.number(*v, p, "z_max", s.overlap.z_max);
    if (s.overlap.z_max < 0.0) r.fail(p.key("z_max"), "must be nonnegative");
    if (const json* t = r.member(*v, "taus")) {
      s.overlap.taus = r.numbers(*t, p.key("taus"));
      if (s.overlap.taus.empty()) r.fail(p.key("taus"), "needs at least one tau");
      for (std::size_t k = 0; k < s.overlap.taus.size(); ++k)
        require_in(r, p.key("taus").at(k), s.overlap.taus[k], 0.0, s.tau_max, "overlap tau");
    } else {
      std::erase_if(s.overlap.taus, [&](double t) { return t > s.tau_max; });
    }
  } else {
    std::erase_if(s.overlap.taus, [&](double t) { return t > s.tau_max; });
  }

  if (const json* v = r.member(doc, "completeness")) {
    const Path p = root.key("completeness");
    r.object(*v, p);
    r.only(*v, p, {"samples", "radius", "tau", "workers", "tests"});
    CompletenessSettings& c = s.completeness;
    c.samples = r.count(*v, p, "samples", c.samples, 2);
    c.radius = r.positive(*v, p, "radius", c.radius);
    c.workers = static_cast<unsigned>(r.count(*v, p, "workers", c.workers, 0));
    if (v->contains("tau")) {
      c.tau = r.number((*v)["tau"], p.key("tau"));
      require_in(r, p.key("tau"), *c.tau, 0.0, s.tau_max, "completeness tau");
    }
    if (const json* t = r.member(*v, "tests")) {
      const Path tp = p.key("tests");
      if (!t->is_array() || t->empty()) r.fail(tp, "must be a nonempty array");
      for (std::size_t k = 0; k < t->size(); ++k) {
        const Path e = tp.at(k);
        const json& tv = r.object((*t)[k], e);
        const std::string kind = r.text(r.required(tv, e, "kind"), e.key("kind"));
        CompletenessTest test;
        if (kind == "coherent") {
          r.only(tv, e, {"kind", "z"});
          test.kind = CompletenessTest::Kind::coherent;
          if (tv.contains("z")) test.z = r.complex_pair(tv["z"], e.key("z"));
        } else if (kind == "gaussian") {
          r.only(tv, e, {"kind", "q0", "p0"});
          test.kind = CompletenessTest::Kind::gaussian;
          test.q0 = r.number(tv, e, "q0", 0.0);
          test.p0 = r.number(tv, e, "p0", 0.0);
        } else {
          r.fail(e.key("kind"), "unknown test function kind '" + kind + "' (coherent, gaussian)");
        }
        c.tests.push_back(test);
      }
    }
  }
  if (!s.completeness.tau) s.completeness.tau = std::min(1.0, s.tau_max);
  if (s.completeness.tests.empty()) {
    CompletenessTest a;
    CompletenessTest b;
    b.kind = CompletenessTest::Kind::gaussian;
    b.q0 = 1.0;
    s.completeness.tests = {a, b};
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path.string() + ": cannot open scenario file", "", 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

}  // namespace qcs
