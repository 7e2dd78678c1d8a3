#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bipoisson/error.hpp"
#include "bipoisson/workbench/config.hpp"
#include "bipoisson/workbench/pipeline.hpp"
#include "bipoisson/workbench/registry.hpp"
#include "bipoisson/workbench/report.hpp"

namespace wb = bipoisson::workbench;

namespace {

constexpr int kExitConfig = 2;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

void print_registry() {
  std::cout << std::left << std::setw(36) << "check" << std::setw(16) << "stage" << std::setw(10) << "kind"
            << std::setw(13) << "tolerance" << "claim\n";
  for (const auto& c : wb::check_registry()) {
    std::ostringstream tol;
    tol << wb::to_string(c.comparison) << " " << c.tolerance;
    std::cout << std::left << std::setw(36) << c.name << std::setw(16) << c.stage << std::setw(10)
              << (c.kind == wb::CheckKind::positive ? "check" : "control") << std::setw(13) << tol.str()
              << c.anchor << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant bi-Poisson pencils on tangent bundles of adjoint orbits"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "json", checks, execution = "serial";
  std::uint64_t seed = 0;
  bool timing = false;

  auto* verify = app.add_subcommand("verify", "Run the verification pipeline and write a report");
  verify->add_option("--config", config_path, "Configuration file (JSON)")->required();
  auto* seed_opt = verify->add_option("--seed", seed, "Override the master seed");
  verify->add_option("--out", out_path, "Write the report here instead of stdout");
  verify->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
  verify->add_option("--checks", checks, "Comma-separated check names, or 'all'");
  verify->add_flag("--timing", timing, "Add per-stage wall-clock times (breaks byte reproducibility)");
  verify->add_option("--execution", execution, "Sampling loops: serial reference or OpenMP")
      ->check(CLI::IsMember({"serial", "parallel"}));

  app.add_subcommand("list-checks", "Print the check registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (app.got_subcommand("list-checks")) {
    print_registry();
    return 0;
  }

  wb::WorkbenchConfig config;
  try {
    config = wb::load_config(config_path);
    if (*seed_opt) config.seed = seed;
    if (!checks.empty()) wb::select_checks(config, split_list(checks));
  } catch (const bipoisson::InputError& e) {
    std::cerr << "workbench: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    wb::PipelineOptions options;
    options.exec = execution == "parallel" ? bipoisson::Execution::parallel : bipoisson::Execution::serial;
    options.timing = timing;
    const wb::ReductionReport report = wb::run_pipeline(config, options);
    const auto fmt = wb::report_format_from_string(format);
    if (out_path.empty()) {
      std::cout << wb::render_report(report, fmt);
    } else {
      wb::emit_report(report, out_path, fmt);
      std::cout << "verdict: " << (report.pass ? "pass" : "fail") << " (" << out_path << ")\n";
    }
    if (report.stage_error) {
      std::cerr << "workbench: stage '" << report.stage_error->stage << "' failed: " << report.stage_error->message
                << "\n";
    }
    return wb::exit_code(report);
  } catch (const std::exception& e) {
    std::cerr << "workbench: " << e.what() << "\n";
    return 1;
  }
}
