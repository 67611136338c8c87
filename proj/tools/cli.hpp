// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace superloc::cli {

// Exit codes beyond the error kinds.
inline constexpr int kExitCheckFailed = 4;

/// Runs the command line (without argv[0]) and returns the exit code.
/// Reports go to `out`, error objects to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace superloc::cli
