#include "bipoisson/workbench/config.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "bipoisson/forms.hpp"
#include "bipoisson/workbench/registry.hpp"

namespace bipoisson::workbench {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

int integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

CMatrix complex_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a nonempty array of rows");
  const std::size_t n = j.size();
  CMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::string row_field = field + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != n) fail(row_field, "expected " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) {
      const std::string entry = row_field + "[" + std::to_string(c) + "]";
      const json& e = j[r][c];
      if (!e.is_array() || e.size() != 2) fail(entry, "expected a [re, im] pair");
      m(r, c) = {number(e[0], entry + "[0]"), number(e[1], entry + "[1]")};
    }
  }
  return m;
}

AlgebraSpec parse_algebra(const json& j) {
  if (!j.is_object()) fail("algebra", "expected an object");
  AlgebraSpec spec;
  if (j.contains("custom")) {
    if (j.size() != 1) fail("algebra", "'custom' cannot be combined with other keys");
    const json& list = j["custom"];
    if (!list.is_array() || list.empty()) fail("algebra.custom", "expected a nonempty list of basis matrices");
    spec.family = "custom";
    for (std::size_t i = 0; i < list.size(); ++i) {
      spec.matrices.push_back(complex_matrix(list[i], "algebra.custom[" + std::to_string(i) + "]"));
      if (spec.matrices.back().rows() != spec.matrices.front().rows()) {
        fail("algebra.custom[" + std::to_string(i) + "]", "matrix size differs from the first basis matrix");
      }
    }
    return spec;
  }
  for (const auto& [key, _] : j.items()) {
    if (key != "family" && key != "n") fail("algebra." + key, "unknown key");
  }
  if (!j.contains("family") || !j["family"].is_string()) fail("algebra.family", "expected \"su\" or \"so\"");
  spec.family = j["family"].get<std::string>();
  if (!j.contains("n")) fail("algebra.n", "missing");
  spec.n = integer(j["n"], "algebra.n");
  if (spec.family == "su") {
    if (spec.n < 2 || spec.n > 4) fail("algebra.n", "su(n) is supported for 2 <= n <= 4");
  } else if (spec.family == "so") {
    if (spec.n < 3 || spec.n > 5) fail("algebra.n", "so(n) is supported for 3 <= n <= 5");
  } else {
    fail("algebra.family", "expected \"su\" or \"so\", got \"" + spec.family + "\"");
  }
  return spec;
}

SeedElementSpec parse_seed_element(const json& j) {
  if (!j.is_object() || j.size() != 1) fail("seed_element", "expected exactly one of diag_spectrum, coeffs");
  SeedElementSpec spec;
  if (j.contains("diag_spectrum")) {
    spec.diag_spectrum = numbers(j["diag_spectrum"], "seed_element.diag_spectrum");
    if (spec.diag_spectrum.empty()) fail("seed_element.diag_spectrum", "must be nonempty");
  } else if (j.contains("coeffs")) {
    spec.coeffs = numbers(j["coeffs"], "seed_element.coeffs");
    if (spec.coeffs.empty()) fail("seed_element.coeffs", "must be nonempty");
  } else {
    fail("seed_element", "expected diag_spectrum or coeffs");
  }
  return spec;
}

void validate_tolerances(const std::map<std::string, double>& tolerances) {
  for (const auto& [name, tol] : tolerances) {
    if (!find_check(name)) fail("tolerances." + name, "unknown check");
    if (!(tol >= 0.0) || !std::isfinite(tol)) fail("tolerances." + name, "must be finite and >= 0");
  }
}

}  // namespace

WorkbenchConfig parse_config(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte);
    std::ostringstream msg;
    msg << source << ":" << line << ":" << col << ": JSON parse error: " << e.what();
    throw ConfigError(msg.str());
  }
  if (!j.is_object()) throw ConfigError(source + ": top level must be an object");

  static const std::set<std::string> known = {"name",   "algebra",        "seed_element", "samples",
                                              "fd_step", "points",        "slice_inputs", "slice_max_iter",
                                              "tolerances", "t_samples",  "seed",         "checks"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) fail(key, "unknown key");
  }

  WorkbenchConfig c;
  if (j.contains("name")) {
    if (!j["name"].is_string()) fail("name", "expected a string");
    c.name = j["name"].get<std::string>();
  }
  if (!j.contains("algebra")) fail("algebra", "missing");
  c.algebra = parse_algebra(j["algebra"]);
  if (!j.contains("seed_element")) fail("seed_element", "missing");
  c.seed_element = parse_seed_element(j["seed_element"]);

  if (j.contains("samples")) c.samples = integer(j["samples"], "samples");
  if (c.samples < 8) fail("samples", "must be at least 8");
  if (j.contains("fd_step")) c.fd_step = number(j["fd_step"], "fd_step");
  if (!(c.fd_step >= kMinFdStep && c.fd_step <= kMaxFdStep)) fail("fd_step", "must lie in [1e-6, 1e-3]");
  if (j.contains("points")) c.points = integer(j["points"], "points");
  if (c.points < 1 || c.points > 1000) fail("points", "must lie in [1, 1000]");
  if (j.contains("slice_inputs")) c.slice_inputs = integer(j["slice_inputs"], "slice_inputs");
  if (c.slice_inputs < 1) fail("slice_inputs", "must be positive");
  if (j.contains("slice_max_iter")) c.slice_max_iter = integer(j["slice_max_iter"], "slice_max_iter");
  if (c.slice_max_iter < 1) fail("slice_max_iter", "must be positive");

  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) fail("tolerances", "expected an object of check name to number");
    for (const auto& [name, value] : j["tolerances"].items()) {
      c.tolerances[name] = number(value, "tolerances." + name);
    }
    validate_tolerances(c.tolerances);
  }
  if (j.contains("t_samples")) {
    const json& ts = j["t_samples"];
    if (!ts.is_array() || ts.empty()) fail("t_samples", "expected a nonempty list of [t1, t2] pairs");
    c.t_samples.clear();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::string field = "t_samples[" + std::to_string(i) + "]";
      const auto pair = numbers(ts[i], field);
      if (pair.size() != 2) fail(field, "expected [t1, t2]");
      if (pair[0] == 0.0 && pair[1] == 0.0) fail(field, "(0, 0) is not a pencil parameter");
      c.t_samples.emplace_back(pair[0], pair[1]);
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("checks")) {
    const json& ch = j["checks"];
    if (ch.is_string()) {
      select_checks(c, {ch.get<std::string>()});
    } else if (ch.is_array()) {
      std::vector<std::string> names;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (!ch[i].is_string()) fail("checks[" + std::to_string(i) + "]", "expected a check name");
        names.push_back(ch[i].get<std::string>());
      }
      select_checks(c, names);
    } else {
      fail("checks", "expected \"all\" or a list of check names");
    }
  }

  // fail early on seeds that do not define an orbit in the algebra
  const AlgebraPtr alg = build_algebra(c);
  build_seed_element(c, *alg);
  return c;
}

WorkbenchConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

void select_checks(WorkbenchConfig& config, const std::vector<std::string>& names) {
  config.checks.clear();
  if (names.size() == 1 && names.front() == "all") return;
  if (names.empty()) fail("checks", "empty selection");
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!find_check(n)) fail("checks", "unknown check '" + n + "'");
    if (seen.insert(n).second) config.checks.push_back(n);
  }
}

AlgebraPtr build_algebra(const WorkbenchConfig& config) {
  const AlgebraSpec& a = config.algebra;
  try {
    if (a.family == "su") return std::make_shared<const LieAlgebra>(LieAlgebra::special_unitary(a.n));
    if (a.family == "so") return std::make_shared<const LieAlgebra>(LieAlgebra::special_orthogonal(a.n));
    return std::make_shared<const LieAlgebra>(LieAlgebra::from_matrices(config.name.empty() ? "custom" : config.name,
                                                                         a.matrices));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail("algebra", e.what());
  }
}

Element build_seed_element(const WorkbenchConfig& config, const LieAlgebra& alg) {
  const SeedElementSpec& s = config.seed_element;
  Element a;
  if (s.from_spectrum()) {
    const int n = alg.matrix_dim();
    const std::string field = "seed_element.diag_spectrum";
    CMatrix m = CMatrix::Zero(n, n);
    if (config.algebra.family == "so") {
      if (static_cast<int>(s.diag_spectrum.size()) > n / 2) {
        fail(field, "so(" + std::to_string(n) + ") has at most " + std::to_string(n / 2) + " rotation planes");
      }
      for (std::size_t i = 0; i < s.diag_spectrum.size(); ++i) {
        m(2 * i + 1, 2 * i) = s.diag_spectrum[i];
        m(2 * i, 2 * i + 1) = -s.diag_spectrum[i];
      }
    } else {
      if (static_cast<int>(s.diag_spectrum.size()) != n) fail(field, "expected " + std::to_string(n) + " entries");
      const double mean = std::accumulate(s.diag_spectrum.begin(), s.diag_spectrum.end(), 0.0) / n;
      for (int i = 0; i < n; ++i) m(i, i) = {0.0, s.diag_spectrum[i] - mean};
    }
    if (alg.span_residual(m) > 1e-10) fail(field, "the resulting matrix is not in the algebra");
    a = alg.from_matrix(m);
  } else {
    if (static_cast<int>(s.coeffs.size()) != alg.dim()) {
      fail("seed_element.coeffs", "expected " + std::to_string(alg.dim()) + " coefficients");
    }
    a = Eigen::Map<const Vector>(s.coeffs.data(), static_cast<Eigen::Index>(s.coeffs.size()));
  }
  if (!(a.norm() > 1e-12)) fail("seed_element", "the seed element is zero (degenerate orbit)");
  return a;
}

nlohmann::ordered_json config_to_json(const WorkbenchConfig& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  if (c.algebra.family == "custom") {
    nlohmann::ordered_json mats = nlohmann::ordered_json::array();
    for (const CMatrix& m : c.algebra.matrices) {
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index col = 0; col < m.cols(); ++col) row.push_back({m(r, col).real(), m(r, col).imag()});
        rows.push_back(row);
      }
      mats.push_back(rows);
    }
    j["algebra"] = {{"custom", mats}};
  } else {
    j["algebra"] = {{"family", c.algebra.family}, {"n", c.algebra.n}};
  }
  if (c.seed_element.from_spectrum()) {
    j["seed_element"] = {{"diag_spectrum", c.seed_element.diag_spectrum}};
  } else {
    j["seed_element"] = {{"coeffs", c.seed_element.coeffs}};
  }
  j["samples"] = c.samples;
  j["fd_step"] = c.fd_step;
  j["points"] = c.points;
  j["slice_inputs"] = c.slice_inputs;
  j["slice_max_iter"] = c.slice_max_iter;
  nlohmann::ordered_json tol = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.tolerances) tol[k] = v;
  j["tolerances"] = tol;
  nlohmann::ordered_json ts = nlohmann::ordered_json::array();
  for (const auto& [t1, t2] : c.t_samples) ts.push_back({t1, t2});
  j["t_samples"] = ts;
  j["seed"] = c.seed;
  if (c.all_checks()) {
    j["checks"] = "all";
  } else {
    j["checks"] = c.checks;
  }
  return j;
}

}  // namespace bipoisson::workbench
