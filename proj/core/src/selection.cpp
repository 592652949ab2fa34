// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include "fssm/selection.hpp"

#include <cmath>
#include <string>

namespace fssm {

SelectionWeights SelectionWeights::zeros(std::size_t channels, std::size_t state_dim) {
  const Dims dims = Dims::make(1, channels, state_dim);
  SelectionWeights w;
  w.channels = channels;
  w.state_dim = state_dim;
  w.w_delta.assign(channels, 0.0);
  w.w_b.assign(state_dim * channels, 0.0);
  w.w_c.assign(state_dim * channels, 0.0);
  w.a_log = init_a(dims);
  w.d_skip.assign(channels, 1.0);
  return w;
}

void SelectionWeights::validate() const {
  const std::size_t D = channels;
  const std::size_t N = state_dim;
  if (D == 0 || N == 0 || w_delta.size() != D || w_b.size() != N * D || w_c.size() != N * D ||
      a_log.size() != D * N || d_skip.size() != D) {
    throw Error(ErrorCode::ShapeMismatch, "selection weights do not match D x N");
  }
  if (!std::isfinite(bias_delta) || !all_finite<double>(w_delta) || !all_finite<double>(w_b) ||
      !all_finite<double>(w_c) || !all_finite<double>(a_log) || !all_finite<double>(d_skip)) {
    throw Error(ErrorCode::NonFinite, "selection weights contain NaN or Inf");
  }
}

std::vector<double> SelectionWeights::state_matrix() const {
  std::vector<double> out(a_log.size());
  for (std::size_t i = 0; i < a_log.size(); ++i) out[i] = -std::exp(a_log[i]);
  return out;
}

double softplus(double z) {
  if (z > 30.0) return z;
  return std::log1p(std::exp(z));
}

double softplus_derivative(double z) {
  if (z > 30.0) return 1.0;
  return 1.0 / (1.0 + std::exp(-z));
}

double inverse_softplus(double y) {
  return y + std::log(-std::expm1(-y));
}

StepParams project_params(std::span<const double> x, const SelectionWeights& weights) {
  const std::size_t D = weights.channels;
  const std::size_t N = weights.state_dim;
  if (x.size() != D) {
    throw Error(ErrorCode::ShapeMismatch,
                "token has " + std::to_string(x.size()) + " channels, weights expect " + std::to_string(D));
  }
  StepParams p;
  double z = weights.bias_delta;
  for (std::size_t d = 0; d < D; ++d) z += weights.w_delta[d] * x[d];
  p.delta = softplus(z);
  p.b.assign(N, 0.0);
  p.c.assign(N, 0.0);
  for (std::size_t k = 0; k < N; ++k) {
    double sb = 0.0;
    double sc = 0.0;
    for (std::size_t d = 0; d < D; ++d) {
      sb += weights.w_b[k * D + d] * x[d];
      sc += weights.w_c[k * D + d] * x[d];
    }
    p.b[k] = sb;
    p.c[k] = sc;
  }
  return p;
}

std::vector<double> init_a(const Dims& dims) {
  std::vector<double> a_log(dims.channels * dims.state_dim);
  for (std::size_t d = 0; d < dims.channels; ++d) {
    for (std::size_t k = 0; k < dims.state_dim; ++k) {
      a_log[d * dims.state_dim + k] = std::log(static_cast<double>(k + 1));
    }
  }
  return a_log;
}

SelectionWeights init_weights(const Dims& dims, Rng& rng) {
  SelectionWeights w = SelectionWeights::zeros(dims.channels, dims.state_dim);
  const double s = 1.0 / std::sqrt(static_cast<double>(dims.channels));
  for (double& v : w.w_delta) v = rng.uniform(-s, s);
  for (double& v : w.w_b) v = rng.uniform(-s, s);
  for (double& v : w.w_c) v = rng.uniform(-s, s);
  w.bias_delta = inverse_softplus(rng.uniform(1e-3, 1e-1));
  return w;
}

}  // namespace fssm
