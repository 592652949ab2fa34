// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command bodies. Each takes a resolved RunConfig, writes its product to
// config.out (or `out` for "-"), diagnostics to `err`, and returns an exit
// code. fssm::Error escapes; the dispatcher in app.cpp maps it to a code.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fssm/cli/config.hpp"
#include "fssm/cli/pgm.hpp"
#include "fssm/discretization.hpp"

namespace fssm::cli {

int cmd_discretize(const RunConfig& config, std::ostream& out, std::ostream& err);

struct SweepRow {
  double delta = 0.0;
  Method method = Method::Zoh;
  double max_abs_err = 0.0;
  double bound = 0.0;
  /// Slope over this method's rows so far; absent until three points exist.
  std::optional<double> slope_so_far;
};

/// Sine fixture x(t) = sin t (L = 1), c = 1, a and b from the config, one
/// row per (delta, method) with deltas in decreasing order. `bound` is the
/// matching theorem bound at n = steps, the largest over the horizon.
/// Also checks the bound at every step and reports violations through
/// `violations` when given.
std::vector<SweepRow> run_sweep(const RunConfig& config, std::size_t* violations = nullptr);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err);

struct Image2dParams {
  std::uint64_t seed = 42;
  Method method = Method::FohExact;
  std::size_t channels = 8;
  std::size_t state_dim = 4;
  std::size_t chunk = 4096;
  std::size_t workers = 1;
};

struct Image2dResult {
  /// Projected single-channel map before normalisation, H x W row-major.
  std::vector<double> raw;
  GrayImage image;
};

/// Seeded embedding into `channels`, four-direction scan with independent
/// seeded weights, seeded projection back to one channel, then min-max
/// normalisation (a flat map normalises to all zeros).
Image2dResult image2d_transform(const GrayImage& input, const Image2dParams& params);
int cmd_image2d(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace fssm::cli
