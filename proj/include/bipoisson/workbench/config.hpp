#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bipoisson/error.hpp"
#include "bipoisson/lie_algebra.hpp"

namespace bipoisson::workbench {

/// Invalid or unreadable configuration. The CLI maps it to exit code 2.
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

struct AlgebraSpec {
  std::string family;             // "su", "so" or "custom"
  int n = 0;                      // su(n), so(n)
  std::vector<CMatrix> matrices;  // custom basis
};

struct SeedElementSpec {
  std::vector<double> diag_spectrum;  // su/custom: i*diag (centered); so: plane weights
  std::vector<double> coeffs;         // coefficients in the orthonormal basis
  bool from_spectrum() const { return !diag_spectrum.empty(); }
};

struct WorkbenchConfig {
  std::string name;
  AlgebraSpec algebra;
  SeedElementSpec seed_element;
  int samples = 32;
  double fd_step = 1e-4;
  int points = 10;
  int slice_inputs = 50;
  int slice_max_iter = 200;
  std::map<std::string, double> tolerances;
  std::vector<std::pair<double, double>> t_samples = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {0.3, 0.7}, {1.0, -1.0}};
  std::uint64_t seed = 1;
  std::vector<std::string> checks;  // empty means all

  bool all_checks() const { return checks.empty(); }
};

/// Throws ConfigError with the file position of a parse error or the name
/// of the offending field.
WorkbenchConfig load_config(const std::string& path);
WorkbenchConfig parse_config(const std::string& text, const std::string& source = "<config>");

/// Replaces the enabled check list; "all" selects every check. Unknown names
/// throw ConfigError.
void select_checks(WorkbenchConfig& config, const std::vector<std::string>& names);

/// su(n), so(n) or the custom basis.
AlgebraPtr build_algebra(const WorkbenchConfig& config);
/// The orbit seed a. Throws ConfigError if it is zero or outside the algebra.
Element build_seed_element(const WorkbenchConfig& config, const LieAlgebra& alg);

/// Normalized echo of the configuration, as written into reports.
nlohmann::ordered_json config_to_json(const WorkbenchConfig& config);

}  // namespace bipoisson::workbench
