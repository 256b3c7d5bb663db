// Executes one configured run: computes the mode's table, writes
// it in the configured format plus a `.meta.json` sidecar, and maps failures to
// exit codes.

#pragma once

#include "stark/config.hpp"

#include <iosfwd>

namespace stark {

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_numerical = 3,  // non-convergence, flagged crosscheck entries, failed columns
    exit_io = 4,
};

// Diagnostics go to log. Never throws.
int run(const RunConfig& config, std::ostream& log);

}  // namespace stark
