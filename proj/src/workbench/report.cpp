#include "bipoisson/workbench/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "bipoisson/error.hpp"

namespace bipoisson::workbench {

namespace {

using ojson = nlohmann::ordered_json;

// JSON has no inf/nan; they travel as strings
ojson encode(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double decode(const ojson& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw InputError("report field '" + field + "': expected a number");
}

const ojson& at(const ojson& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw InputError("report: missing field '" + key + "'");
  return j.at(key);
}

ojson row_to_json(const CheckRow& r) {
  ojson j;
  j["name"] = r.name;
  j["anchor"] = r.anchor;
  j["stage"] = r.stage;
  j["residual"] = encode(r.residual);
  j["tolerance"] = encode(r.tolerance);
  j["comparison"] = to_string(r.comparison);
  j["status"] = r.status;
  ojson info = ojson::object();
  for (const auto& [k, v] : r.info) info[k] = encode(v);
  j["info"] = info;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

CheckRow row_from_json(const ojson& j) {
  CheckRow r;
  r.name = at(j, "name").get<std::string>();
  r.anchor = at(j, "anchor").get<std::string>();
  r.stage = at(j, "stage").get<std::string>();
  r.residual = decode(at(j, "residual"), r.name + ".residual");
  r.tolerance = decode(at(j, "tolerance"), r.name + ".tolerance");
  try {
    r.comparison = comparison_from_string(at(j, "comparison").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("report: ") + e.what());
  }
  r.status = at(j, "status").get<std::string>();
  for (const auto& [k, v] : at(j, "info").items()) r.info.emplace_back(k, decode(v, r.name + ".info." + k));
  if (j.contains("note")) r.note = j.at("note").get<std::string>();
  return r;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(3) << std::scientific << x;
  return s.str();
}

}  // namespace

bool satisfies(double value, double tol, Comparison cmp) {
  if (std::isnan(value)) return false;
  return cmp == Comparison::at_most ? value <= tol : value > tol;
}

bool compute_verdict(const ReductionReport& report) {
  if (report.stage_error) return false;
  for (const auto& r : report.checks) {
    if (r.status != "pass") return false;
  }
  for (const auto& r : report.negative_controls) {
    if (r.status != "expected-fail" && r.status != "skipped") return false;
  }
  return true;
}

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "text") return ReportFormat::text;
  throw InputError("unknown report format '" + s + "' (expected json or text)");
}

nlohmann::ordered_json report_to_json(const ReductionReport& report) {
  ojson j;
  j["schema"] = report.schema;
  j["config"] = report.config;
  j["algebra"] = {{"name", report.algebra}, {"dim", report.algebra_dim}};
  ojson dims = ojson::object();
  for (const auto& [k, v] : report.dims) dims[k] = v;
  j["dims"] = dims;
  j["reduction"] = report.reduction;
  ojson checks = ojson::array();
  for (const auto& r : report.checks) checks.push_back(row_to_json(r));
  j["checks"] = checks;
  ojson controls = ojson::array();
  for (const auto& r : report.negative_controls) controls.push_back(row_to_json(r));
  j["negative_controls"] = controls;
  if (!report.timing_ms.empty()) {
    ojson timing = ojson::object();
    for (const auto& [k, v] : report.timing_ms) timing[k] = v;
    j["timing_ms"] = timing;
  }
  if (report.stage_error) {
    j["stage_error"] = {{"stage", report.stage_error->stage}, {"message", report.stage_error->message}};
  }
  j["verdict"] = report.pass ? "pass" : "fail";
  return j;
}

ReductionReport report_from_json(const nlohmann::ordered_json& j) {
  ReductionReport r;
  try {
    r.schema = at(j, "schema").get<std::string>();
    if (r.schema != kReportSchema) throw InputError("report: unsupported schema '" + r.schema + "'");
    r.config = at(j, "config");
    r.algebra = at(at(j, "algebra"), "name").get<std::string>();
    r.algebra_dim = at(at(j, "algebra"), "dim").get<int>();
    for (const auto& [k, v] : at(j, "dims").items()) r.dims.emplace_back(k, v.get<int>());
    r.reduction = at(j, "reduction").get<std::string>();
    for (const auto& row : at(j, "checks")) r.checks.push_back(row_from_json(row));
    for (const auto& row : at(j, "negative_controls")) r.negative_controls.push_back(row_from_json(row));
    if (j.contains("timing_ms")) {
      for (const auto& [k, v] : j.at("timing_ms").items()) r.timing_ms.emplace_back(k, v.get<double>());
    }
    if (j.contains("stage_error")) {
      const auto& e = j.at("stage_error");
      r.stage_error = StageError{at(e, "stage").get<std::string>(), at(e, "message").get<std::string>()};
    }
    const auto verdict = at(j, "verdict").get<std::string>();
    if (verdict != "pass" && verdict != "fail") throw InputError("report: verdict must be pass or fail");
    r.pass = verdict == "pass";
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  }
  return r;
}

std::string render_report(const ReductionReport& report, ReportFormat format) {
  if (format == ReportFormat::json) return report_to_json(report).dump(2) + "\n";

  std::ostringstream out;
  const std::string name = report.config.contains("name") ? report.config["name"].get<std::string>() : "";
  out << "report " << (name.empty() ? "(unnamed)" : name) << "  algebra " << report.algebra << " (dim "
      << report.algebra_dim << ")";
  if (!report.reduction.empty()) out << "  reduction " << report.reduction;
  out << "\n";
  if (!report.dims.empty()) {
    out << "dims";
    for (const auto& [k, v] : report.dims) out << "  " << k << "=" << v;
    out << "\n";
  }
  const auto table = [&](const char* title, const std::vector<CheckRow>& rows) {
    if (rows.empty()) return;
    out << "\n" << title << "\n";
    out << std::left << std::setw(36) << "check" << std::setw(12) << "residual" << std::setw(3) << ""
        << std::setw(12) << "tolerance" << std::setw(17) << "status"
        << "claim\n";
    for (const auto& r : rows) {
      out << std::left << std::setw(36) << r.name << std::setw(12) << format_number(r.residual) << std::setw(3)
          << to_string(r.comparison) << std::setw(12) << format_number(r.tolerance) << std::setw(17) << r.status
          << r.anchor << "\n";
      if (!r.note.empty()) out << "    note: " << r.note << "\n";
    }
  };
  table("checks", report.checks);
  table("negative controls", report.negative_controls);
  if (!report.timing_ms.empty()) {
    out << "\ntiming (ms)";
    for (const auto& [k, v] : report.timing_ms) out << "  " << k << "=" << std::fixed << std::setprecision(1) << v;
    out << "\n";
  }
  if (report.stage_error) {
    out << "\nstage error in " << report.stage_error->stage << ": " << report.stage_error->message << "\n";
  }
  out << "\nverdict: " << (report.pass ? "PASS" : "FAIL") << "\n";
  return out.str();
}

void emit_report(const ReductionReport& report, const std::string& path, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << render_report(report, format);
  out.flush();
  if (!out) throw Error("failed writing report to '" + path + "'");
}

ReductionReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read report '" + path + "'");
  try {
    return report_from_json(ojson::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("report '" + path + "': " + e.what());
  }
}

}  // namespace bipoisson::workbench
