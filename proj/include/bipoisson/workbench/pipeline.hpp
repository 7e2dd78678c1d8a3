#pragma once

#include "bipoisson/parallel.hpp"
#include "bipoisson/workbench/config.hpp"
#include "bipoisson/workbench/report.hpp"

namespace bipoisson::workbench {

struct PipelineOptions {
  Execution exec = Execution::serial;
  bool timing = false;  // wall-clock times make the report non-reproducible
};

/// Runs every stage needed by the enabled checks, in order:
///   lie_core, orbit, isotropy, setup, forms, pencil, degeneracy,
///   complement, adapted_chart, restricted, brackets, freeness,
///   transversality, slice.
/// A stage that throws is recorded in stage_error; its checks are marked
/// "error" and the checks of later stages "not-run".
ReductionReport run_pipeline(const WorkbenchConfig& config, const PipelineOptions& options = {});

/// Exit code for a finished report: 0 pass, 1 otherwise.
inline int exit_code(const ReductionReport& report) { return report.pass ? 0 : 1; }

}  // namespace bipoisson::workbench
