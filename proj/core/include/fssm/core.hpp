// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared domain types: dimensions, validated sequences, errors and the
// deterministic splitmix64 generator used throughout the library.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fssm {

enum class ErrorCode {
  NonFinite,
  ShapeMismatch,
  NonPositiveDelta,
  OutOfRange,
  DegenerateFit,
  BadMagic,
  BadHeader,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Sequence length T, model width D and per-channel state size N.
struct Dims {
  std::size_t seq_len = 1;
  std::size_t channels = 1;
  std::size_t state_dim = 1;

  /// Throws ShapeMismatch unless all three are >= 1.
  static Dims make(std::size_t seq_len, std::size_t channels, std::size_t state_dim);
};

/// T x D row-major container of finite reals. Immutable once built.
template <typename Real>
class BasicSequence {
 public:
  using value_type = Real;

  /// Zero-filled T x D sequence.
  BasicSequence(std::size_t len, std::size_t channels);

  /// Takes ownership of row-major data; throws ShapeMismatch or NonFinite.
  static BasicSequence from_flat(std::size_t len, std::size_t channels, std::vector<Real> values);

  /// Throws ShapeMismatch for empty or ragged input and NonFinite for NaN/Inf.
  static BasicSequence from_rows(const std::vector<std::vector<Real>>& rows);

  std::size_t len() const noexcept { return len_; }
  std::size_t channels() const noexcept { return channels_; }

  Real operator()(std::size_t t, std::size_t d) const { return values_[t * channels_ + d]; }
  std::span<const Real> row(std::size_t t) const {
    return {values_.data() + t * channels_, channels_};
  }
  std::span<const Real> data() const noexcept { return values_; }

  /// Element-wise conversion to another precision.
  template <typename Other>
  BasicSequence<Other> cast() const {
    std::vector<Other> out(values_.begin(), values_.end());
    return BasicSequence<Other>::from_flat(len_, channels_, std::move(out));
  }

  friend bool operator==(const BasicSequence&, const BasicSequence&) = default;

 private:
  BasicSequence(std::size_t len, std::size_t channels, std::vector<Real> values);

  std::size_t len_;
  std::size_t channels_;
  std::vector<Real> values_;
};

using Sequence = BasicSequence<double>;
using SequenceF32 = BasicSequence<float>;

extern template class BasicSequence<double>;
extern template class BasicSequence<float>;

template <typename Real>
bool all_finite(std::span<const Real> values) {
  for (Real v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

/// splitmix64 (Steele, Lea & Flood 2014). The state advances by the golden
/// gamma 0x9E3779B97F4A7C15 and each output is the standard mix of the new
/// state. Reals use the top 53 bits, so next_real() is uniform on [0, 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept;
  double next_real() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * next_real(); }

  /// Independent stream seeded from this one; advances this generator once.
  Rng fork() noexcept { return Rng(next_u64()); }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace fssm
