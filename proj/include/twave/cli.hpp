#pragma once

#include "twave/config.hpp"

#include <iosfwd>

namespace twave {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // mathematical or verification failure
inline constexpr int kExitUsage = 2;    // usage or config error

// Each command writes a JSON report to out and a human-readable summary to
// log, and returns an exit code. Config and usage errors propagate as
// Error(config) or SyntaxError.
int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_cstar(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_classify(const RunConfig& cfg, std::ostream& out, std::ostream& log);
// Also writes profile.csv and reduced.csv into cfg.out.
int cmd_profile(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& log);

// Parses arguments, loads the config, applies flag overrides, dispatches
// and maps exceptions to exit codes.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& log);

} // namespace twave
