#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pfpois::cli {

enum ExitCode : int {
    kExitPass = 0,
    kExitBandFailure = 1,
    kExitUsage = 2,
    kExitCapRefusal = 3,
};

inline constexpr const char* kVersion = "1.0.0";

/// Runs one command line (args excludes the program name). Text output goes to `out`,
/// diagnostics to `err`; files are written under --out when given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace pfpois::cli
