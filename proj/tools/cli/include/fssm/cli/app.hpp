// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fssm::cli {

/// Parses `args` (without the program name), prints the resolved config to
/// `err`, runs the command and returns its exit code. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fssm::cli
