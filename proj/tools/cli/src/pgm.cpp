// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include "fssm/cli/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "fssm/core.hpp"

namespace fssm::cli {
namespace {

void skip_space_and_comments(std::istream& in) {
  while (true) {
    const int ch = in.peek();
    if (ch == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (ch != EOF && std::isspace(ch)) {
      in.get();
    } else {
      return;
    }
  }
}

std::size_t read_header_number(std::istream& in, const char* what) {
  skip_space_and_comments(in);
  std::string digits;
  while (std::isdigit(in.peek())) digits.push_back(static_cast<char>(in.get()));
  if (digits.empty() || digits.size() > 9) throw Error(ErrorCode::BadHeader, std::string("bad PGM ") + what);
  return std::stoul(digits);
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (in.gcount() != 2 || magic[0] != 'P' || magic[1] != '5') throw Error(ErrorCode::BadMagic, "not a P5 PGM");
  GrayImage image;
  image.width = read_header_number(in, "width");
  image.height = read_header_number(in, "height");
  const std::size_t maxval = read_header_number(in, "maxval");
  if (image.width == 0 || image.height == 0) throw Error(ErrorCode::BadHeader, "PGM extents must be >= 1");
  if (maxval != 255) throw Error(ErrorCode::BadHeader, "only maxval 255 is supported");
  if (!std::isspace(in.get())) throw Error(ErrorCode::BadHeader, "missing whitespace after PGM header");

  const std::size_t count = image.width * image.height;
  std::string bytes(count, '\0');
  in.read(bytes.data(), static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in.gcount()) != count) throw Error(ErrorCode::IoError, "truncated PGM pixel data");
  image.pixels.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    image.pixels[i] = static_cast<double>(static_cast<unsigned char>(bytes[i])) / 255.0;
  }
  return image;
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_pgm(in);
}

void write_pgm(std::ostream& out, const GrayImage& image) {
  if (image.pixels.size() != image.width * image.height) {
    throw Error(ErrorCode::ShapeMismatch, "pixel count does not match extents");
  }
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  std::string bytes(image.pixels.size(), '\0');
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const double v = std::clamp(image.pixels[i], 0.0, 1.0);
    bytes[i] = static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "PGM write failed");
}

void save_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  write_pgm(out, image);
}

}  // namespace fssm::cli
