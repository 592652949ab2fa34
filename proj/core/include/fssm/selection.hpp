// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0
//
// Input-dependent (selective) parameters. Each token x_n (a D-vector)
// produces a positive step size delta_n = softplus(<w_delta, x_n> + bias),
// and input/output vectors b_n = W_b x_n, c_n = W_c x_n of length N shared
// by all channels. The state matrix is diagonal per channel with
// a[d][k] = -exp(a_log[d][k]) < 0.

#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "fssm/core.hpp"

namespace fssm {

struct SelectionWeights {
  std::size_t channels = 0;   // D
  std::size_t state_dim = 0;  // N
  std::vector<double> w_delta;  // D
  double bias_delta = 0.0;
  std::vector<double> w_b;     // N x D, row-major
  std::vector<double> w_c;     // N x D, row-major
  std::vector<double> a_log;   // D x N, row-major
  std::vector<double> d_skip;  // D; only read when the skip term is enabled

  /// Zero projections, a_log from init_a, unit skip.
  static SelectionWeights zeros(std::size_t channels, std::size_t state_dim);

  /// Throws ShapeMismatch or NonFinite.
  void validate() const;

  double a(std::size_t d, std::size_t k) const { return -std::exp(a_log[d * state_dim + k]); }
  /// The D x N diagonal state entries, all strictly negative.
  std::vector<double> state_matrix() const;

  friend bool operator==(const SelectionWeights&, const SelectionWeights&) = default;
};

struct StepParams {
  double delta = 0.0;
  std::vector<double> b;  // N
  std::vector<double> c;  // N
};

/// ln(1 + e^z); returns z itself for z > 30.
double softplus(double z);
/// d softplus / dz (the logistic function), 1 on the z > 30 branch.
double softplus_derivative(double z);
/// y + ln(-expm1(-y)) for y > 0, so softplus(inverse_softplus(y)) == y.
double inverse_softplus(double y);

/// Throws ShapeMismatch if x is not a D-vector for these weights.
StepParams project_params(std::span<const double> x, const SelectionWeights& weights);

/// S4D-real initialisation: a_log[d][k] = ln(k + 1), i.e. a = -(1, 2, ..., N).
std::vector<double> init_a(const Dims& dims);

/// Projections uniform in [-1/sqrt(D), 1/sqrt(D)] drawn in the order w_delta,
/// w_b, w_c; then bias_delta = inverse_softplus(u) with u uniform in
/// [1e-3, 1e-1]. a_log from init_a, d_skip = 1.
SelectionWeights init_weights(const Dims& dims, Rng& rng);

/// Little-endian blob: "FSSMW01\0", u32 D, u32 N, then f64 values in the
/// order w_delta, bias_delta, w_b, w_c, a_log, d_skip.
void write_weights(std::ostream& out, const SelectionWeights& weights);
/// Throws BadMagic, BadHeader, IoError (truncated) or NonFinite.
SelectionWeights read_weights(std::istream& in);
void save_weights(const std::filesystem::path& path, const SelectionWeights& weights);
SelectionWeights load_weights(const std::filesystem::path& path);

}  // namespace fssm
