// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0
//
// Self-check suites run by `fssm verify`. Each suite is a property of the
// library that must hold on any correct build; tolerances are fixed here.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fssm/cli/config.hpp"

namespace fssm::cli {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  /// Test hook: scales the foh-exact bbar2 by 1.01 inside the identity suite.
  bool break_identity = false;
  std::size_t workers = 1;
};

/// identity, approx-order, exactness, bounds, improvement, scan-equivalence,
/// gradients, boundary, scan2d.
std::vector<std::string> suite_names();

SuiteResult run_suite(const std::string& name, const VerifyOptions& options);
std::vector<SuiteResult> run_verify(const VerifyOptions& options);

/// Prints one PASS/FAIL line per suite and a summary; exit 0 iff all pass.
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace fssm::cli
