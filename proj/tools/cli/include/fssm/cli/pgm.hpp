// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace fssm::cli {

/// H x W grey levels in [0, 1], row-major.
struct GrayImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> pixels;

  double operator()(std::size_t i, std::size_t j) const { return pixels[i * width + j]; }
  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Binary P5 with maxval 255. Comment lines in the header are skipped.
/// Throws BadMagic, BadHeader (zero extents, maxval != 255, garbage) or
/// IoError (truncated pixel data).
GrayImage read_pgm(std::istream& in);
GrayImage load_pgm(const std::filesystem::path& path);

/// Writes "P5\n<W> <H>\n255\n" and round(clamp(v, 0, 1) * 255) per pixel.
void write_pgm(std::ostream& out, const GrayImage& image);
void save_pgm(const std::filesystem::path& path, const GrayImage& image);

}  // namespace fssm::cli
