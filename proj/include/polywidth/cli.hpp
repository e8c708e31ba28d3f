// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polywidth::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInvalidConfig = 2,
  kBudgetExceeded = 3,
  kVerificationFailed = 4,
};

/// Runs one subcommand. `args` excludes the program name; args[0] is the
/// subcommand unless a --config file names it under `command`. Reports go to
/// `out` (or --output), diagnostics and summaries to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polywidth::cli
