#pragma once

namespace scelo::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes are part of the interface: scripts branch on them.
enum ExitCode {
    kOk = 0,
    kUsage = 1,
    kParseFailure = 2,
    kNonConvergence = 3,
    kRangeViolation = 4,
};

int run(int argc, const char* const* argv);

}  // namespace scelo::cli
