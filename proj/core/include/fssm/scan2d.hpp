// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0
//
// Four-direction cross scan over an H x W x D feature map. Each direction
// flattens the grid in its own order, runs the selective scan with its own
// weights, and the per-direction outputs are scattered back and summed.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "fssm/core.hpp"
#include "fssm/discretization.hpp"
#include "fssm/scan.hpp"
#include "fssm/selection.hpp"

namespace fssm {

class FeatureMap {
 public:
  /// Zero-filled map; throws ShapeMismatch if any extent is zero.
  FeatureMap(std::size_t height, std::size_t width, std::size_t channels);
  /// Row-major (i, j, d) data; throws ShapeMismatch or NonFinite.
  static FeatureMap from_flat(std::size_t height, std::size_t width, std::size_t channels,
                              std::vector<double> values);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t channels() const noexcept { return channels_; }
  double operator()(std::size_t i, std::size_t j, std::size_t d) const {
    return values_[(i * width_ + j) * channels_ + d];
  }
  std::span<const double> data() const noexcept { return values_; }

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  FeatureMap(std::size_t height, std::size_t width, std::size_t channels, std::vector<double> values);

  std::size_t height_;
  std::size_t width_;
  std::size_t channels_;
  std::vector<double> values_;
};

enum class Ordering { RowForward, RowBackward, ColForward, ColBackward };

inline constexpr std::array<Ordering, 4> kAllOrderings = {Ordering::RowForward, Ordering::RowBackward,
                                                          Ordering::ColForward, Ordering::ColBackward};

std::string_view to_string(Ordering ordering);

/// cells[p] = i * W + j, the grid cell read at sequence position p.
std::vector<std::size_t> ordering_cells(Ordering ordering, std::size_t height, std::size_t width);

/// T = H * W sequence read from the map in the given order.
Sequence cross_scan(const FeatureMap& map, Ordering ordering);

/// Scatters each output back to grid cells through its ordering and sums
/// the grids in the given order. Throws ShapeMismatch unless every output
/// has T = H * W and the same channel count, and orderings match outputs.
FeatureMap cross_merge(std::span<const Sequence> outputs, std::span<const Ordering> orderings,
                       std::size_t height, std::size_t width);

struct Direction {
  Ordering ordering;
  SelectionWeights weights;
};

/// Usually the four standard orderings; any non-empty subset is allowed.
struct DirectionSet {
  std::vector<Direction> directions;

  /// Four directions sharing one set of weights.
  static DirectionSet shared(const SelectionWeights& weights);
  /// Four directions with independent weights drawn from `rng` in
  /// kAllOrderings order.
  static DirectionSet independent(const Dims& dims, Rng& rng);

  /// Throws ShapeMismatch when empty or channel counts disagree.
  void validate() const;
  std::vector<Ordering> orderings() const;
};

struct Scan2dConfig {
  /// Use scan_parallel with `parallel` instead of scan_sequential.
  bool use_parallel_scan = false;
  ParallelConfig parallel{};
  /// Threads used to run the directions concurrently.
  std::size_t direction_workers = 1;
  ScanOptions options{};
};

FeatureMap scan2d_forward(const FeatureMap& map, const DirectionSet& dirs, Method method,
                          const Scan2dConfig& config = {});

/// (i, j) -> (H-1-i, W-1-j).
FeatureMap rotate180(const FeatureMap& map);

}  // namespace fssm
