#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bipoisson/workbench/registry.hpp"

namespace bipoisson::workbench {

inline constexpr const char* kReportSchema = "bipoisson-report/1";

struct CheckRow {
  std::string name;
  std::string anchor;
  std::string stage;
  double residual = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::at_most;
  // positive: pass | fail | error | not-run
  // control:  expected-fail | unexpected-pass | skipped | error | not-run
  std::string status;
  std::vector<std::pair<std::string, double>> info;
  std::string note;

  bool operator==(const CheckRow&) const = default;
};

struct StageError {
  std::string stage;
  std::string message;

  bool operator==(const StageError&) const = default;
};

struct ReductionReport {
  std::string schema = kReportSchema;
  nlohmann::ordered_json config;
  std::string algebra;
  int algebra_dim = 0;
  std::vector<std::pair<std::string, int>> dims;
  std::string reduction;  // trivial | nontrivial | empty when setup did not run
  std::vector<CheckRow> checks;
  std::vector<CheckRow> negative_controls;
  std::vector<std::pair<std::string, double>> timing_ms;  // only with --timing
  std::optional<StageError> stage_error;
  bool pass = false;

  bool operator==(const ReductionReport&) const = default;
};

/// Positive rows pass and every control that ran failed as designed.
bool compute_verdict(const ReductionReport& report);

/// Whether `value` satisfies `tol` under `cmp`. NaN never does.
bool satisfies(double value, double tol, Comparison cmp);

enum class ReportFormat { json, text };
ReportFormat report_format_from_string(const std::string& s);

nlohmann::ordered_json report_to_json(const ReductionReport& report);
/// Throws InputError on schema mismatches.
ReductionReport report_from_json(const nlohmann::ordered_json& j);

/// JSON (2-space indent, trailing newline) or the text table.
std::string render_report(const ReductionReport& report, ReportFormat format);
/// Throws Error on I/O failure.
void emit_report(const ReductionReport& report, const std::string& path, ReportFormat format);
ReductionReport load_report(const std::string& path);

}  // namespace bipoisson::workbench
