// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <ostream>

#include "fssm/cli/commands.hpp"
#include "fssm/core.hpp"
#include "fssm/scan2d.hpp"
#include "output.hpp"

namespace fssm::cli {

Image2dResult image2d_transform(const GrayImage& input, const Image2dParams& params) {
  const std::size_t H = input.height;
  const std::size_t W = input.width;
  const std::size_t D = params.channels;
  if (input.pixels.size() != H * W) throw Error(ErrorCode::ShapeMismatch, "pixel count does not match extents");

  Rng root(params.seed);
  Rng embed_rng = root.fork();
  Rng scan_rng = root.fork();
  Rng proj_rng = root.fork();

  std::vector<double> gain(D);
  std::vector<double> offset(D);
  for (std::size_t d = 0; d < D; ++d) {
    gain[d] = embed_rng.uniform(-1.0, 1.0);
    offset[d] = embed_rng.uniform(-1.0, 1.0);
  }
  std::vector<double> lifted(H * W * D);
  for (std::size_t p = 0; p < H * W; ++p) {
    for (std::size_t d = 0; d < D; ++d) lifted[p * D + d] = gain[d] * input.pixels[p] + offset[d];
  }
  const auto map = FeatureMap::from_flat(H, W, D, std::move(lifted));

  const auto dirs = DirectionSet::independent(Dims::make(H * W, D, params.state_dim), scan_rng);
  Scan2dConfig cfg;
  cfg.use_parallel_scan = true;
  cfg.parallel = {params.chunk, 1};
  cfg.direction_workers = params.workers;
  const FeatureMap scanned = scan2d_forward(map, dirs, params.method, cfg);

  const double limit = 1.0 / std::sqrt(static_cast<double>(D));
  std::vector<double> proj(D);
  for (double& p : proj) p = proj_rng.uniform(-limit, limit);

  Image2dResult result;
  result.raw.resize(H * W);
  for (std::size_t i = 0; i < H; ++i) {
    for (std::size_t j = 0; j < W; ++j) {
      double acc = 0.0;
      for (std::size_t d = 0; d < D; ++d) acc += proj[d] * scanned(i, j, d);
      result.raw[i * W + j] = acc;
    }
  }

  const auto [lo, hi] = std::minmax_element(result.raw.begin(), result.raw.end());
  const double range = *hi - *lo;
  result.image = {H, W, std::vector<double>(H * W, 0.0)};
  if (range > 0.0) {
    for (std::size_t p = 0; p < H * W; ++p) result.image.pixels[p] = (result.raw[p] - *lo) / range;
  }
  return result;
}

int cmd_image2d(const RunConfig& config, std::ostream& out, std::ostream&) {
  const GrayImage input = load_pgm(config.in);
  Image2dParams params;
  params.seed = config.seed;
  params.method = config.method;
  params.channels = config.embed_channels;
  params.state_dim = config.state_dim;
  params.chunk = config.chunk;
  params.workers = config.workers;
  const auto result = image2d_transform(input, params);
  detail::with_output(config.out, out, [&](std::ostream& os) { write_pgm(os, result.image); });
  return kExitOk;
}

}  // namespace fssm::cli
