#pragma once

#include "heatlab/config.hpp"
#include "heatlab/report.hpp"
#include "heatlab/verifiers.hpp"

namespace heatlab {

/// Execute the configured suites over the configured spaces, write
/// report.json and one CSV per attached grid sweep into the output
/// directory, and return the report.  Checker exceptions are captured as
/// results with status error.
Report run(const RunConfig& config);

/// Exit-code contract: 0 all pass/hypothesis_not_met/untrusted, 1 any
/// fail or error, 2 reserved for usage errors (handled by the CLI).
int exit_code(const Report& report);

}  // namespace heatlab
