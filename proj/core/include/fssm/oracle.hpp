// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0
//
// Ground truth for the time-invariant system h' = a h + b x(t), y = c h on
// the uniform grid t_n = n * delta, and the machinery for measuring how far
// the discrete recurrences drift from it.
//
// Alignment: the discrete output y_n is read from h_{n+1}, so it is compared
// with the continuous output at t_{n+1}. Every series below has that layout:
// entry n is "after absorbing step n".

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fssm/discretization.hpp"

namespace fssm {

/// Scalar time-invariant system.
struct ContinuousSystem {
  double a = -1.0;
  double b = 1.0;
  double c = 1.0;
  double delta = 0.1;
};

enum class HoldMode { Zoh, Foh };

/// Continuous signal rebuilt from samples x_n taken at t_n = n * delta.
/// Zoh holds x_n on [t_n, t_{n+1}); Foh interpolates linearly between
/// neighbours. Throws OutOfRange for t outside [0, t_{T-1}] and
/// NonPositiveDelta for delta <= 0.
double reconstruct_input(std::span<const double> samples, double delta, HoldMode mode, double t);

/// A continuous input x(t). Signals with jumps also provide the left limit
/// x(t^-), which the reference solver uses at the right end of each interval.
class InputSignal {
 public:
  using Fn = std::function<double(double)>;

  static InputSignal smooth(Fn fn);
  /// Holds samples[n] on [n*delta, (n+1)*delta); defined on [0, T*delta].
  static InputSignal piecewise_constant(std::vector<double> samples, double delta);
  /// Linear between samples; defined on [0, (T-1)*delta].
  static InputSignal piecewise_linear(std::vector<double> samples, double delta);

  double at(double t) const { return value_(t); }
  double left_limit(double t) const { return left_(t); }

 private:
  InputSignal(Fn value, Fn left) : value_(std::move(value)), left_(std::move(left)) {}

  Fn value_;
  Fn left_;
};

inline constexpr std::size_t kDefaultSubsteps = 1024;

/// Reference outputs y(t_1), ..., y(t_steps) from h(0) = 0. Each coarse
/// interval is split into `substeps` pieces and integrated with the exact
/// first-order-hold step, using x(s_j) at the left end and x(s_{j+1}^-) at
/// the right end of each piece. Exact for inputs that are linear on every
/// piece (including jumps at coarse nodes); O(substeps^-2) for smooth x.
/// Throws OutOfRange if substeps == 0, NonPositiveDelta for delta <= 0.
std::vector<double> solve_continuous(const ContinuousSystem& sys, const InputSignal& x, std::size_t steps,
                                     std::size_t substeps = kDefaultSubsteps);

/// Discrete outputs for the same system and grid, from samples x(t_0..t_steps).
/// One extra sample is drawn so the final compared step still has its
/// lookahead token; the output of that extra token is dropped.
std::vector<double> discrete_outputs(const ContinuousSystem& sys, const InputSignal& x, Method method,
                                     std::size_t steps);

struct ErrorSeries {
  std::vector<double> per_step;     // |y(t_{n+1}) - y_n|
  std::vector<double> running_max;  // max over 0..n
  double max = 0.0;
};

ErrorSeries measure_cumulative_error(const ContinuousSystem& sys, const InputSignal& x, Method method,
                                     std::size_t steps, std::size_t substeps = kDefaultSubsteps);

struct ErrorBoundParams {
  double lipschitz = 0.0;
  double c_abs = 0.0;
  double b_abs = 0.0;
  double delta = 0.0;
  double a = 0.0;
  std::uint64_t n = 1;
  /// sup of e^xi between 0 and delta * a: max(1, e^{delta a}).
  double exp_xi_sup = 1.0;

  static ErrorBoundParams make(double lipschitz, double c, double b, double delta, double a, std::uint64_t n);
};

/// sum_{k=0}^{n-1} e^{k z}, i.e. (e^{n z} - 1) / (e^z - 1) without the 0/0 at z = 0.
double geometric_growth(double z, std::uint64_t n);

/// |C| L |B| e^xi delta^2 G(n) for the zero-order hold.
double bound_ssm(const ErrorBoundParams& p);
/// Half of bound_ssm.
double bound_fssm(const ErrorBoundParams& p);
/// bound_ssm for Zoh, bound_fssm for the first-order methods.
double bound_for(Method method, const ErrorBoundParams& p);

/// Least-squares slope of log(error) against log(delta). Throws
/// DegenerateFit with fewer than 3 points, mismatched lengths, non-positive
/// values, or all deltas equal.
double convergence_order(std::span<const double> deltas, std::span<const double> errors);

// Dense path: h' = A h + B x(t), y = C h with a general N x N matrix A.
// Used only as a reference; the selective kernels never form dense A.

struct DenseSystem {
  std::size_t state_dim = 0;
  std::vector<double> a;  // N x N row-major
  std::vector<double> b;  // N
  std::vector<double> c;  // N
  double delta = 0.1;
};

/// Exact first-order-hold factors of a dense system from one matrix
/// exponential of the (N+2) x (N+2) augmented generator
///   [[A, B, 0], [0, 0, 1], [0, 0, 0]] * delta,
/// which maps (h, x_n, slope) across one interval.
struct DenseFactors {
  std::vector<double> abar;   // N x N
  std::vector<double> bbar1;  // N
  std::vector<double> bbar2;  // N
};

DenseFactors dense_foh_factors(const DenseSystem& sys);

/// Same contract as solve_continuous, for a dense system.
std::vector<double> solve_continuous_dense(const DenseSystem& sys, const InputSignal& x, std::size_t steps,
                                           std::size_t substeps = kDefaultSubsteps);

}  // namespace fssm
