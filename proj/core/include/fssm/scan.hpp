// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0
//
// The first-order selective scan. Tokens are indexed n = 0..T-1 and states
// h_0..h_T with h_0 = 0. Per channel d and diagonal entry k:
//
//   h_{n+1} = abar_n h_n + bbar1_n x_n[d] + bbar2_n x_{n+1}[d]   (n < T-1)
//   h_T     = abar   h_{T-1} + bbar_zoh x_{T-1}[d]                (last step)
//   y_n[d]  = <c_n, h_{n+1}[d]>
//
// where the factors come from (delta_n, a[d][k], b_n[k]) under the chosen
// method. Zoh never looks ahead; the other three look exactly one token ahead.

#pragma once

#include <cstddef>
#include <vector>

#include "fssm/core.hpp"
#include "fssm/discretization.hpp"
#include "fssm/selection.hpp"

namespace fssm {

struct ScanOptions {
  /// Adds d_skip[d] * x_n[d] to y_n[d].
  bool skip = false;
};

/// Fully resolved scan inputs: the sequence plus per-step (delta, b, c).
/// Built from selection weights, or directly when selection is bypassed.
template <typename Real>
struct BasicScanProblem {
  BasicSequence<Real> x;     // T x D
  std::size_t state_dim = 0; // N
  std::vector<Real> delta;   // T, all > 0
  std::vector<Real> b;       // T x N
  std::vector<Real> c;       // T x N
  std::vector<Real> a;       // D x N diagonal entries
  std::vector<Real> d_skip;  // D, or empty for no skip term

  std::size_t len() const { return x.len(); }
  std::size_t channels() const { return x.channels(); }

  /// Throws ShapeMismatch, NonFinite or NonPositiveDelta.
  void validate() const;
};

using ScanProblem = BasicScanProblem<double>;
using ScanProblemF32 = BasicScanProblem<float>;

/// Runs project_params on every token.
ScanProblem make_problem(const Sequence& x, const SelectionWeights& weights, const ScanOptions& options = {});

/// Time-invariant problem: the same delta, b (N) and c (N) at every step;
/// a is D x N.
ScanProblem make_time_invariant_problem(const Sequence& x, double delta, std::vector<double> a,
                                        const std::vector<double>& b, const std::vector<double>& c);

ScanProblemF32 to_f32(const ScanProblem& problem);

template <typename Real>
struct BasicScanOutput {
  BasicSequence<Real> y;     // T x D
  std::vector<Real> h_final; // D x N
};

using ScanOutput = BasicScanOutput<double>;
using ScanOutputF32 = BasicScanOutput<float>;

/// Reference kernel, a direct transcription of the recurrence above.
template <typename Real>
BasicScanOutput<Real> scan_sequential(const BasicScanProblem<Real>& problem, Method method);

ScanOutput scan_sequential(const Sequence& x, const SelectionWeights& weights, Method method,
                           const ScanOptions& options = {});

/// One recurrence step as the affine map h -> mult * h + offset (elementwise).
struct ScanElement {
  std::vector<double> mult;
  std::vector<double> offset;

  static ScanElement identity(std::size_t n);
  friend bool operator==(const ScanElement&, const ScanElement&) = default;
};

/// Apply `first`, then `second`: (m2 * m1, m2 * b1 + b2). Associative with
/// identity ScanElement::identity(n). Throws ShapeMismatch on length mismatch.
ScanElement compose(const ScanElement& first, const ScanElement& second);

struct ParallelConfig {
  std::size_t chunk = 4096;
  std::size_t workers = 1;
};

/// Chunked scan: each chunk reduces its steps to one ScanElement, a fixed
/// Blelloch tree turns the chunk aggregates into carry-in states, and each
/// chunk then replays its steps from its carry. Results depend on `chunk`
/// only, never on `workers`; chunk >= T reproduces scan_sequential bit for bit.
/// Throws OutOfRange when chunk or workers is zero.
template <typename Real>
BasicScanOutput<Real> scan_parallel(const BasicScanProblem<Real>& problem, Method method,
                                    const ParallelConfig& config);

ScanOutput scan_parallel(const Sequence& x, const SelectionWeights& weights, Method method,
                         const ParallelConfig& config, const ScanOptions& options = {});

/// Reverse-mode derivatives of L = sum_n <grad_y_n, y_n>.
struct ScanGradients {
  Sequence d_x;                   // T x D
  std::vector<double> d_w_delta;  // D
  double d_bias_delta = 0.0;
  std::vector<double> d_w_b;      // N x D
  std::vector<double> d_w_c;      // N x D
  std::vector<double> d_a_log;    // D x N
  std::vector<double> d_d_skip;   // D, zero unless options.skip
};

ScanGradients scan_backward(const Sequence& x, const SelectionWeights& weights, Method method,
                            const Sequence& grad_y, const ScanOptions& options = {});

extern template BasicScanOutput<double> scan_sequential(const BasicScanProblem<double>&, Method);
extern template BasicScanOutput<float> scan_sequential(const BasicScanProblem<float>&, Method);
extern template BasicScanOutput<double> scan_parallel(const BasicScanProblem<double>&, Method,
                                                      const ParallelConfig&);
extern template BasicScanOutput<float> scan_parallel(const BasicScanProblem<float>&, Method,
                                                     const ParallelConfig&);

}  // namespace fssm
