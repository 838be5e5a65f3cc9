#pragma once

#include <iosfwd>

namespace sigtrade {

/// Exit codes returned by run().
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitParse = 2,
    kExitValidation = 3,
    kExitBlowup = 4,
};

/// Command-line entry point. Diagnostics go to `err`, file listings to `out`.
/// The output directory is `--out`, else $SIGTRADE_OUTPUT_DIR, else the
/// scenario's `outputs` key.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sigtrade
