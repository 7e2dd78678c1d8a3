#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include "bipoisson/workbench/config.hpp"
#include "bipoisson/workbench/pipeline.hpp"
#include "bipoisson/workbench/registry.hpp"
#include "bipoisson/workbench/report.hpp"

using namespace bipoisson;
using namespace bipoisson::workbench;

namespace {

const char* kSu2 = R"({"algebra":{"family":"su","n":2},"seed_element":{"diag_spectrum":[1,-1]}})";

std::string with(const std::string& extra) {
  return R"({"algebra":{"family":"su","n":2},"seed_element":{"diag_spectrum":[1,-1]},)" + extra + "}";
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text, "test.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool mentions(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

const ReductionReport& su2_report() {
  static const ReductionReport r = [] {
    WorkbenchConfig c = parse_config(with(R"("points":4,"slice_inputs":10)"));
    return run_pipeline(c);
  }();
  return r;
}

}  // namespace

TEST_CASE("minimal configuration") {
  const WorkbenchConfig c = parse_config(kSu2);
  CHECK(c.algebra.family == "su");
  CHECK(c.algebra.n == 2);
  CHECK(build_algebra(c)->dim() == 3);
  CHECK(c.all_checks());
  CHECK(c.seed == 1);
  CHECK(c.fd_step == 1e-4);
}

TEST_CASE("spectrum is centered and gives CP^2") {
  const WorkbenchConfig c =
      parse_config(R"({"algebra":{"family":"su","n":3},"seed_element":{"diag_spectrum":[3,0,0]}})");
  const auto alg = build_algebra(c);
  const Element a = build_seed_element(c, *alg);
  const auto spectrum = anti_hermitian_spectrum(alg->to_matrix(a));
  // sorted spectrum of i * a for a = i diag(2, -1, -1)
  CHECK(std::abs(spectrum(0) + 2.0) < 1e-12);
  CHECK(std::abs(spectrum(1) - 1.0) < 1e-12);
  CHECK(std::abs(spectrum(2) - 1.0) < 1e-12);
}

TEST_CASE("so(n) plane weights") {
  const WorkbenchConfig c =
      parse_config(R"({"algebra":{"family":"so","n":4},"seed_element":{"diag_spectrum":[2,1]}})");
  const auto alg = build_algebra(c);
  CHECK(alg->dim() == 6);
  const Element a = build_seed_element(c, *alg);
  CHECK(a.norm() == doctest::Approx(std::sqrt(2.0 * (4.0 + 1.0))));
}

TEST_CASE("configuration errors name the field") {
  CHECK(mentions(config_error(with(R"("fd_step":1e-2)")), "fd_step"));
  CHECK(mentions(config_error(with(R"("samples":4)")), "samples"));
  CHECK(mentions(config_error(with(R"("colour":1)")), "colour"));
  CHECK(mentions(config_error(with(R"("tolerances":{"no_such_check":1e-3})")), "no_such_check"));
  CHECK(mentions(config_error(with(R"("tolerances":{"w1_closed":-1})")), "w1_closed"));
  CHECK(mentions(config_error(with(R"("t_samples":[[0,0]])")), "t_samples"));
  CHECK(mentions(config_error(with(R"("seed":-3)")), "seed"));
  CHECK(mentions(config_error(with(R"("checks":["bogus"])")), "bogus"));
  CHECK(mentions(config_error(R"({"algebra":{"family":"sp","n":2},"seed_element":{"coeffs":[1,0,0]}})"),
                 "algebra.family"));
  CHECK(mentions(config_error(R"({"algebra":{"family":"su","n":7},"seed_element":{"coeffs":[1]}})"), "algebra.n"));
  CHECK(mentions(config_error(R"({"algebra":{"family":"su","n":2},"seed_element":{"coeffs":[1,0]}})"),
                 "seed_element"));
  CHECK(mentions(config_error(R"({"algebra":{"family":"su","n":2},"seed_element":{"coeffs":[0,0,0]}})"),
                 "zero"));
  CHECK(mentions(config_error(R"({"algebra":{"family":"su","n":2}})"), "seed_element"));
  // parse errors carry the position
  CHECK(mentions(config_error("{\n  \"algebra\": ,\n}"), "test.json:2"));
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("custom algebra") {
  const WorkbenchConfig c = parse_config(R"({"algebra":{"custom":[
      [[[0,0],[0,-0.5]],[[0,-0.5],[0,0]]],
      [[[0,0],[-0.5,0]],[[0.5,0],[0,0]]],
      [[[0,-0.5],[0,0]],[[0,0],[0,0.5]]]]},
    "seed_element":{"diag_spectrum":[1,-1]}})");
  CHECK(build_algebra(c)->dim() == 3);
  CHECK(mentions(config_error(R"({"algebra":{"custom":[[[[1,0],[0,0]],[[0,0],[1,0]]]]},
    "seed_element":{"coeffs":[1]}})"),
                 "algebra"));
}

TEST_CASE("check selection") {
  WorkbenchConfig c = parse_config(kSu2);
  select_checks(c, {"w1_closed", "w2_closed", "w1_closed"});
  CHECK(c.checks.size() == 2);
  select_checks(c, {"all"});
  CHECK(c.all_checks());
  CHECK_THROWS_AS(select_checks(c, {}), ConfigError);
  CHECK_THROWS_AS(select_checks(c, {"nope"}), ConfigError);
}

TEST_CASE("registry") {
  std::set<std::string> names;
  int controls = 0;
  for (const auto& c : check_registry()) {
    CHECK(names.insert(c.name).second);
    CHECK(!c.anchor.empty());
    CHECK(find_check(c.name) == &c);
    if (c.kind == CheckKind::negative_control) ++controls;
  }
  CHECK(controls == 4);
  CHECK(find_check("missing") == nullptr);
  CHECK(comparison_from_string(to_string(Comparison::above)) == Comparison::above);
}

TEST_CASE("verdict and comparisons") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(satisfies(1e-6, 1e-5, Comparison::at_most));
  CHECK(!satisfies(1e-4, 1e-5, Comparison::at_most));
  CHECK(satisfies(1.0, 1e-5, Comparison::above));
  CHECK(!satisfies(nan, 1e-5, Comparison::at_most));
  CHECK(!satisfies(nan, 1e-5, Comparison::above));

  ReductionReport r;
  r.checks.push_back({"a", "", "s", 0.0, 1.0, Comparison::at_most, "pass", {}, ""});
  r.negative_controls.push_back({"b", "", "s", 2.0, 1.0, Comparison::at_most, "expected-fail", {}, ""});
  CHECK(compute_verdict(r));
  r.negative_controls.back().status = "skipped";
  CHECK(compute_verdict(r));
  r.negative_controls.back().status = "unexpected-pass";
  CHECK(!compute_verdict(r));
  r.negative_controls.back().status = "expected-fail";
  r.checks.back().status = "fail";
  CHECK(!compute_verdict(r));
  r.checks.back().status = "pass";
  r.stage_error = StageError{"forms", "boom"};
  CHECK(!compute_verdict(r));
}

TEST_CASE("pipeline on the sphere") {
  const ReductionReport& r = su2_report();
  CHECK(r.pass);
  CHECK(exit_code(r) == 0);
  CHECK(r.schema == kReportSchema);
  CHECK(r.reduction == "trivial");
  CHECK(r.algebra_dim == 3);
  CHECK(r.checks.size() + r.negative_controls.size() == check_registry().size());
  for (const auto& row : r.checks) CHECK_MESSAGE(row.status == "pass", row.name);
  for (const auto& row : r.negative_controls)
    CHECK_MESSAGE((row.status == "expected-fail" || row.status == "skipped"), row.name);
  CHECK(r.timing_ms.empty());
}

TEST_CASE("report round trip") {
  ReductionReport r = su2_report();
  r.checks.front().residual = std::numeric_limits<double>::infinity();
  r.checks.back().residual = std::numeric_limits<double>::quiet_NaN();
  const std::string text = render_report(r, ReportFormat::json);
  const ReductionReport back = report_from_json(nlohmann::ordered_json::parse(text));
  CHECK(render_report(back, ReportFormat::json) == text);
  CHECK(std::isinf(back.checks.front().residual));
  CHECK(std::isnan(back.checks.back().residual));

  const auto path = std::filesystem::temp_directory_path() / "bipoisson_roundtrip.json";
  emit_report(su2_report(), path.string(), ReportFormat::json);
  CHECK(render_report(load_report(path.string()), ReportFormat::json) == render_report(su2_report(), ReportFormat::json));
  std::filesystem::remove(path);

  nlohmann::ordered_json bad = report_to_json(su2_report());
  bad["schema"] = "other/9";
  CHECK_THROWS_AS(report_from_json(bad), InputError);
}

TEST_CASE("text report lists every row") {
  const std::string text = render_report(su2_report(), ReportFormat::text);
  for (const auto& c : check_registry()) CHECK_MESSAGE(mentions(text, c.name), c.name);
  CHECK(mentions(text, "verdict"));
  CHECK_THROWS_AS(report_format_from_string("xml"), InputError);
}

TEST_CASE("check subsets and stage errors") {
  WorkbenchConfig c = parse_config(with(R"("points":2)"));
  select_checks(c, {"w1_closed"});
  const ReductionReport r = run_pipeline(c);
  CHECK(r.pass);
  REQUIRE(r.checks.size() == 1);
  CHECK(r.checks.front().name == "w1_closed");
  CHECK(r.negative_controls.empty());

  // a tolerance no residual can meet fails the row, not the run
  WorkbenchConfig strict = parse_config(with(R"("points":2,"tolerances":{"chart_injectivity":1e9})"));
  select_checks(strict, {"chart_injectivity"});
  const ReductionReport f = run_pipeline(strict);
  CHECK(!f.pass);
  CHECK(f.checks.front().status == "fail");
  CHECK(!f.stage_error);
  CHECK(exit_code(f) == 1);
}

TEST_CASE("timing is opt-in") {
  WorkbenchConfig c = parse_config(with(R"("points":2)"));
  select_checks(c, {"structure_identities"});
  PipelineOptions o;
  o.timing = true;
  const ReductionReport r = run_pipeline(c, o);
  CHECK(!r.timing_ms.empty());
}
