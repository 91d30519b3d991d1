#pragma once

// Command implementations behind the `lame` tool. Exit codes:
//   0 success, 1 a verification check failed, 2 invalid config or arguments,
//   3 the Picard iteration did not contract.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lame/app/config.hpp"
#include "lame/app/suites.hpp"

namespace lame::app {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitInvalid = 2, kExitNoContraction = 3 };

int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& os);
int cmd_verify(const RunConfig& cfg, Suite suite, const std::filesystem::path& report, std::ostream& os,
               std::ostream& err);
int cmd_sweep(const RunConfig& cfg, const std::string& param, const std::vector<double>& values,
              const std::filesystem::path& report, std::ostream& os);

/// Applies one sweep value to a copy of cfg; throws InvalidConfig for an
/// unknown parameter or a value that breaks a module invariant.
RunConfig with_sweep_value(const RunConfig& cfg, const std::string& param, double value);

/// Full command line: parses arguments, loads the config and maps errors to
/// exit codes. Messages go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& os, std::ostream& err);

}  // namespace lame::app
