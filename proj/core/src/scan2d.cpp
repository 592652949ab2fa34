// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include "fssm/scan2d.hpp"

#include <exception>
#include <optional>

#include "scan_internal.hpp"

namespace fssm {

FeatureMap::FeatureMap(std::size_t height, std::size_t width, std::size_t channels)
    : FeatureMap(height, width, channels, std::vector<double>(height * width * channels, 0.0)) {}

FeatureMap::FeatureMap(std::size_t height, std::size_t width, std::size_t channels, std::vector<double> values)
    : height_(height), width_(width), channels_(channels), values_(std::move(values)) {
  if (height_ == 0 || width_ == 0 || channels_ == 0) {
    throw Error(ErrorCode::ShapeMismatch, "feature map extents must be >= 1");
  }
  if (values_.size() != height_ * width_ * channels_) {
    throw Error(ErrorCode::ShapeMismatch, "flat data does not match H x W x D");
  }
  if (!all_finite<double>(values_)) throw Error(ErrorCode::NonFinite, "feature map contains NaN or Inf");
}

FeatureMap FeatureMap::from_flat(std::size_t height, std::size_t width, std::size_t channels,
                                 std::vector<double> values) {
  return FeatureMap(height, width, channels, std::move(values));
}

std::string_view to_string(Ordering ordering) {
  switch (ordering) {
    case Ordering::RowForward: return "row-forward";
    case Ordering::RowBackward: return "row-backward";
    case Ordering::ColForward: return "col-forward";
    case Ordering::ColBackward: return "col-backward";
  }
  return "unknown";
}

std::vector<std::size_t> ordering_cells(Ordering ordering, std::size_t height, std::size_t width) {
  const std::size_t count = height * width;
  std::vector<std::size_t> cells(count);
  const bool by_column = ordering == Ordering::ColForward || ordering == Ordering::ColBackward;
  const bool reversed = ordering == Ordering::RowBackward || ordering == Ordering::ColBackward;
  for (std::size_t p = 0; p < count; ++p) {
    std::size_t cell = p;
    if (by_column) {
      const std::size_t j = p / height;
      const std::size_t i = p % height;
      cell = i * width + j;
    }
    cells[reversed ? count - 1 - p : p] = cell;
  }
  return cells;
}

Sequence cross_scan(const FeatureMap& map, Ordering ordering) {
  const std::size_t D = map.channels();
  const auto cells = ordering_cells(ordering, map.height(), map.width());
  std::vector<double> flat(cells.size() * D);
  const auto src = map.data();
  for (std::size_t p = 0; p < cells.size(); ++p) {
    std::copy_n(src.begin() + cells[p] * D, D, flat.begin() + p * D);
  }
  return Sequence::from_flat(cells.size(), D, std::move(flat));
}

FeatureMap cross_merge(std::span<const Sequence> outputs, std::span<const Ordering> orderings,
                       std::size_t height, std::size_t width) {
  if (outputs.empty() || outputs.size() != orderings.size()) {
    throw Error(ErrorCode::ShapeMismatch, "need one ordering per output");
  }
  const std::size_t count = height * width;
  const std::size_t D = outputs.front().channels();
  for (const auto& out : outputs) {
    if (out.len() != count || out.channels() != D) {
      throw Error(ErrorCode::ShapeMismatch, "every output must be (H*W) x D");
    }
  }
  std::vector<double> merged(count * D, 0.0);
  for (std::size_t o = 0; o < outputs.size(); ++o) {
    const auto cells = ordering_cells(orderings[o], height, width);
    for (std::size_t p = 0; p < count; ++p) {
      for (std::size_t d = 0; d < D; ++d) merged[cells[p] * D + d] += outputs[o](p, d);
    }
  }
  return FeatureMap::from_flat(height, width, D, std::move(merged));
}

DirectionSet DirectionSet::shared(const SelectionWeights& weights) {
  DirectionSet set;
  for (Ordering o : kAllOrderings) set.directions.push_back({o, weights});
  return set;
}

DirectionSet DirectionSet::independent(const Dims& dims, Rng& rng) {
  DirectionSet set;
  for (Ordering o : kAllOrderings) set.directions.push_back({o, init_weights(dims, rng)});
  return set;
}

void DirectionSet::validate() const {
  if (directions.empty()) throw Error(ErrorCode::ShapeMismatch, "direction set is empty");
  for (const auto& dir : directions) {
    dir.weights.validate();
    if (dir.weights.channels != directions.front().weights.channels) {
      throw Error(ErrorCode::ShapeMismatch, "directions disagree on channel count");
    }
  }
}

std::vector<Ordering> DirectionSet::orderings() const {
  std::vector<Ordering> out;
  for (const auto& dir : directions) out.push_back(dir.ordering);
  return out;
}

FeatureMap scan2d_forward(const FeatureMap& map, const DirectionSet& dirs, Method method,
                          const Scan2dConfig& config) {
  dirs.validate();
  if (map.channels() != dirs.directions.front().weights.channels) {
    throw Error(ErrorCode::ShapeMismatch, "feature map channels do not match direction weights");
  }
  const std::size_t count = dirs.directions.size();
  std::vector<std::optional<Sequence>> outputs(count);
  std::vector<std::exception_ptr> errors(count);
  detail::parallel_for(count, config.direction_workers, [&](std::size_t i) {
    try {
      const auto& dir = dirs.directions[i];
      const Sequence seq = cross_scan(map, dir.ordering);
      outputs[i] = config.use_parallel_scan
                       ? scan_parallel(seq, dir.weights, method, config.parallel, config.options).y
                       : scan_sequential(seq, dir.weights, method, config.options).y;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Sequence> ys;
  ys.reserve(count);
  for (auto& o : outputs) ys.push_back(std::move(*o));
  const auto orders = dirs.orderings();
  return cross_merge(ys, orders, map.height(), map.width());
}

FeatureMap rotate180(const FeatureMap& map) {
  const std::size_t H = map.height();
  const std::size_t W = map.width();
  const std::size_t D = map.channels();
  std::vector<double> out(H * W * D);
  for (std::size_t i = 0; i < H; ++i) {
    for (std::size_t j = 0; j < W; ++j) {
      for (std::size_t d = 0; d < D; ++d) {
        out[((H - 1 - i) * W + (W - 1 - j)) * D + d] = map(i, j, d);
      }
    }
  }
  return FeatureMap::from_flat(H, W, D, std::move(out));
}

}  // namespace fssm
