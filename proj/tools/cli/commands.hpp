#pragma once

#include "run_config.hpp"
#include "table.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mwassoc::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numerical = 3 };

Table cmd_levels(const RunConfig& cfg);
Table cmd_scan_microwave(const RunConfig& cfg);
Table cmd_scan_feshbach(const RunConfig& cfg);
Table cmd_scan_raman(const RunConfig& cfg);
Table cmd_scaling(const RunConfig& cfg);

struct CheckResult {
  std::string name;
  bool ok = true;
  std::string detail;
};

/// File formats, C1 stitching, label consistency and grid adequacy, in that order.
std::vector<CheckResult> cmd_validate(const RunConfig& cfg);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mwassoc::cli
