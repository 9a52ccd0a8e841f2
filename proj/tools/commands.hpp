#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hirota::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kBadInput = 2 };

// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hirota::cli
