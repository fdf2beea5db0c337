#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace krein::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kPrecondition = 3,
  kNotFound = 4,
  kVerificationFailed = 5,
};

/// Runs one kreintool command. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace krein::cli
