#pragma once

#include <iosfwd>

namespace chessflow::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kGeometryOrData = 2,
    kResonance = 3,
    kArithmetic = 4,
};

/// Full command-line entry point. Artifacts go under --out; messages go to
/// `out` and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chessflow::cli
