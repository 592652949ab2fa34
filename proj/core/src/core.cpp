// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include "fssm/core.hpp"

#include <utility>

namespace fssm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonPositiveDelta: return "NonPositiveDelta";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

Dims Dims::make(std::size_t seq_len, std::size_t channels, std::size_t state_dim) {
  if (seq_len == 0 || channels == 0 || state_dim == 0) {
    throw Error(ErrorCode::ShapeMismatch, "T, D and N must all be >= 1");
  }
  return Dims{seq_len, channels, state_dim};
}

template <typename Real>
BasicSequence<Real>::BasicSequence(std::size_t len, std::size_t channels)
    : BasicSequence(len, channels, std::vector<Real>(len * channels, Real(0))) {}

template <typename Real>
BasicSequence<Real>::BasicSequence(std::size_t len, std::size_t channels, std::vector<Real> values)
    : len_(len), channels_(channels), values_(std::move(values)) {
  if (len_ == 0 || channels_ == 0) {
    throw Error(ErrorCode::ShapeMismatch, "sequence needs T >= 1 and D >= 1");
  }
  if (values_.size() != len_ * channels_) {
    throw Error(ErrorCode::ShapeMismatch, "flat data does not match T x D");
  }
  if (!all_finite<Real>(values_)) {
    throw Error(ErrorCode::NonFinite, "sequence contains NaN or Inf");
  }
}

template <typename Real>
BasicSequence<Real> BasicSequence<Real>::from_flat(std::size_t len, std::size_t channels,
                                                   std::vector<Real> values) {
  return BasicSequence(len, channels, std::move(values));
}

template <typename Real>
BasicSequence<Real> BasicSequence<Real>::from_rows(const std::vector<std::vector<Real>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw Error(ErrorCode::ShapeMismatch, "sequence needs at least one row and one column");
  }
  const std::size_t width = rows.front().size();
  std::vector<Real> flat;
  flat.reserve(rows.size() * width);
  for (const auto& r : rows) {
    if (r.size() != width) throw Error(ErrorCode::ShapeMismatch, "ragged rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return BasicSequence(rows.size(), width, std::move(flat));
}

template class BasicSequence<double>;
template class BasicSequence<float>;

std::uint64_t Rng::next_u64() noexcept {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::next_real() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

}  // namespace fssm
