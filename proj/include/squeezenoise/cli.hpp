#pragma once

#include <iosfwd>

namespace sqn::cli {

// Process exit codes, stable for scripting.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;      // bad arguments, files or configuration
inline constexpr int kExitDomain = 3;     // frequency outside the damping table
inline constexpr int kExitNumerical = 4;  // fit or solver failure

/// Runs the `squeezenoise` command line. Machine-readable output goes to
/// `out` when no --out file is given; messages go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sqn::cli
