// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <ostream>
#include <string>

#include "fssm/core.hpp"

namespace fssm::cli::detail {

// Runs fn(stream) against stdout for "-" and a freshly truncated file
// otherwise.
template <typename Fn>
void with_output(const std::string& path, std::ostream& stdout_stream, Fn fn) {
  if (path == "-") {
    fn(stdout_stream);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  fn(file);
  file.flush();
  if (!file) throw Error(ErrorCode::IoError, "write to " + path + " failed");
}

}  // namespace fssm::cli::detail
