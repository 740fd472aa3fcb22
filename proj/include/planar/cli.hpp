#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace planar::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kInput = 3 };

/// Runs one command line (args excludes the program name). Reports go to
/// out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace planar::cli
