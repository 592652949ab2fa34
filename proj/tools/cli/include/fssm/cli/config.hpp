// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fssm/discretization.hpp"

namespace fssm::cli {

enum class Command { Discretize, Verify, Sweep, Bench, Image2d };
enum class Precision { F64, F32 };

std::string_view to_string(Command command);
std::string_view to_string(Precision precision);
std::optional<Precision> parse_precision(std::string_view token);

/// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // a check did not hold
inline constexpr int kExitUsage = 2;   // bad flags or flag values
inline constexpr int kExitIo = 3;      // unreadable or malformed files

struct RunConfig {
  Command command = Command::Verify;
  std::uint64_t seed = 42;
  Method method = Method::FohExact;
  Precision precision = Precision::F64;
  std::size_t chunk = 4096;
  std::size_t workers = 1;

  // discretize; a and b also set the sweep system
  double delta = 0.1;
  double a = -1.0;
  double b = 1.0;

  // sweep
  std::vector<double> deltas = {0.2, 0.1, 0.05, 0.025};
  std::vector<Method> methods = {Method::Zoh, Method::FohExact};
  std::size_t steps = 200;

  // bench
  std::vector<std::size_t> lengths = {4096, 65536};
  std::size_t state_dim = 16;
  std::size_t channels = 4;
  std::size_t reps = 5;

  // image2d
  std::string in;
  std::size_t embed_channels = 8;

  // verify
  bool break_identity = false;

  /// "-" is stdout.
  std::string out = "-";
};

/// One line, `key=value` pairs, every field relevant to the command.
void print_config(std::ostream& os, const RunConfig& config);

}  // namespace fssm::cli
