#pragma once

#include "sas/error.hpp"

#include <ostream>

namespace sas {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNoConvergence = 3;

/// Exit status for an error code: 2 for bad input, 3 for solver failures.
int exit_code_for(ErrorCode code);

/**
 * Entry point of the `sas` tool: solve, learn, curve, routing and generate.
 * Reports go to `out`; failures are written to `err` as a JSON error block.
 */
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace sas
