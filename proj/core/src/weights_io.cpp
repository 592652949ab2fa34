// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include "fssm/selection.hpp"

namespace fssm {
namespace {

constexpr std::array<char, 8> kMagic = {'F', 'S', 'S', 'M', 'W', '0', '1', '\0'};

template <typename U>
void put_le(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename U>
U get_le(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw Error(ErrorCode::IoError, "weights blob is truncated");
  }
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

void put_reals(std::ostream& out, std::span<const double> values) {
  for (double v : values) put_le(out, std::bit_cast<std::uint64_t>(v));
}

void get_reals(std::istream& in, std::vector<double>& values) {
  for (double& v : values) v = std::bit_cast<double>(get_le<std::uint64_t>(in));
}

}  // namespace

void write_weights(std::ostream& out, const SelectionWeights& weights) {
  weights.validate();
  out.write(kMagic.data(), kMagic.size());
  put_le(out, static_cast<std::uint32_t>(weights.channels));
  put_le(out, static_cast<std::uint32_t>(weights.state_dim));
  put_reals(out, weights.w_delta);
  put_le(out, std::bit_cast<std::uint64_t>(weights.bias_delta));
  put_reals(out, weights.w_b);
  put_reals(out, weights.w_c);
  put_reals(out, weights.a_log);
  put_reals(out, weights.d_skip);
  if (!out) throw Error(ErrorCode::IoError, "failed writing weights blob");
}

SelectionWeights read_weights(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size())) throw Error(ErrorCode::BadMagic, "missing magic");
  if (magic != kMagic) throw Error(ErrorCode::BadMagic, "not an FSSMW01 weights blob");
  const auto D = get_le<std::uint32_t>(in);
  const auto N = get_le<std::uint32_t>(in);
  if (D == 0 || N == 0) throw Error(ErrorCode::BadHeader, "D and N must be >= 1");

  SelectionWeights w = SelectionWeights::zeros(D, N);
  get_reals(in, w.w_delta);
  w.bias_delta = std::bit_cast<double>(get_le<std::uint64_t>(in));
  get_reals(in, w.w_b);
  get_reals(in, w.w_c);
  get_reals(in, w.a_log);
  get_reals(in, w.d_skip);
  w.validate();
  return w;
}

void save_weights(const std::filesystem::path& path, const SelectionWeights& weights) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  write_weights(out, weights);
}

SelectionWeights load_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_weights(in);
}

}  // namespace fssm
