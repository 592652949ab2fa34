// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include "fssm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "fssm/core.hpp"
#include "fssm/scan.hpp"

namespace fssm {
namespace {

void check_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::NonPositiveDelta, "delta must be finite and > 0");
  }
}

// Grid coordinate t / delta, snapped to the nearest node when within
// rounding distance of it (so 0.7 / 0.1 lands on node 7, not 6.999...).
double grid_position(double t, double delta) {
  const double pos = t / delta;
  const double node = std::round(pos);
  return std::abs(pos - node) <= 1e-9 * std::max(1.0, std::abs(node)) ? node : pos;
}

// Index of the interval [t_n, t_{n+1}) holding t, clamped to [0, last].
std::size_t interval_of(double t, double delta, std::size_t last) {
  const double pos = std::floor(grid_position(t, delta));
  if (pos <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(pos), last);
}

// Index n with t in (t_n, t_{n+1}], clamped to [0, last].
std::size_t left_interval_of(double t, double delta, std::size_t last) {
  const double pos = std::ceil(grid_position(t, delta)) - 1.0;
  if (pos <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(pos), last);
}

bool beyond(double t, double t_end) { return t > t_end + 1e-12 * std::max(1.0, t_end); }

}  // namespace

double reconstruct_input(std::span<const double> samples, double delta, HoldMode mode, double t) {
  check_delta(delta);
  if (samples.empty()) throw Error(ErrorCode::OutOfRange, "no samples");
  const std::size_t last = samples.size() - 1;
  const double t_end = static_cast<double>(last) * delta;
  if (!(t >= 0.0) || beyond(t, t_end)) {
    throw Error(ErrorCode::OutOfRange, "t = " + std::to_string(t) + " outside [0, " + std::to_string(t_end) + "]");
  }
  if (last == 0) return samples[0];
  const std::size_t n = interval_of(t, delta, last);
  if (n == last) return samples[last];
  if (mode == HoldMode::Zoh) return samples[n];
  const double frac = std::clamp(grid_position(t, delta) - static_cast<double>(n), 0.0, 1.0);
  return samples[n] + frac * (samples[n + 1] - samples[n]);
}

InputSignal InputSignal::smooth(Fn fn) {
  Fn left = fn;
  return InputSignal(std::move(fn), std::move(left));
}

InputSignal InputSignal::piecewise_constant(std::vector<double> samples, double delta) {
  check_delta(delta);
  if (samples.empty()) throw Error(ErrorCode::OutOfRange, "no samples");
  auto shared = std::make_shared<const std::vector<double>>(std::move(samples));
  const std::size_t count = shared->size();
  // x(t) = samples[n] on [t_n, t_{n+1}); the left limit at t_{n+1} is samples[n].
  auto value = [shared, delta, count](double t) {
    if (t < 0.0 || beyond(t, static_cast<double>(count) * delta)) {
      throw Error(ErrorCode::OutOfRange, "t outside signal");
    }
    return (*shared)[interval_of(t, delta, count - 1)];
  };
  auto left = [shared, delta, count](double t) {
    if (t < 0.0 || beyond(t, static_cast<double>(count) * delta)) {
      throw Error(ErrorCode::OutOfRange, "t outside signal");
    }
    return (*shared)[left_interval_of(t, delta, count - 1)];
  };
  return InputSignal(value, left);
}

InputSignal InputSignal::piecewise_linear(std::vector<double> samples, double delta) {
  check_delta(delta);
  if (samples.empty()) throw Error(ErrorCode::OutOfRange, "no samples");
  auto shared = std::make_shared<const std::vector<double>>(std::move(samples));
  return smooth([shared, delta](double t) { return reconstruct_input(*shared, delta, HoldMode::Foh, t); });
}

std::vector<double> solve_continuous(const ContinuousSystem& sys, const InputSignal& x, std::size_t steps,
                                     std::size_t substeps) {
  check_delta(sys.delta);
  if (substeps == 0) throw Error(ErrorCode::OutOfRange, "substeps must be >= 1");
  const double fine = sys.delta / static_cast<double>(substeps);
  const auto f = step_factors<double>(Method::FohExact, fine, sys.a, sys.b);

  std::vector<double> y(steps);
  double h = 0.0;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t0 = static_cast<double>(n) * sys.delta;
    for (std::size_t j = 0; j < substeps; ++j) {
      const double s0 = t0 + static_cast<double>(j) * fine;
      // The last piece ends exactly on the coarse node.
      const double s1 = j + 1 == substeps ? static_cast<double>(n + 1) * sys.delta
                                          : t0 + static_cast<double>(j + 1) * fine;
      h = f.abar * h + (f.bbar1 * x.at(s0) + f.bbar2 * x.left_limit(s1));
    }
    y[n] = sys.c * h;
  }
  return y;
}

std::vector<double> discrete_outputs(const ContinuousSystem& sys, const InputSignal& x, Method method,
                                     std::size_t steps) {
  check_delta(sys.delta);
  if (steps == 0) return {};
  std::vector<double> samples(steps + 1);
  for (std::size_t n = 0; n <= steps; ++n) samples[n] = x.at(static_cast<double>(n) * sys.delta);
  const Sequence seq = Sequence::from_flat(steps + 1, 1, std::move(samples));
  const auto problem = make_time_invariant_problem(seq, sys.delta, {sys.a}, {sys.b}, {sys.c});
  const auto out = scan_sequential(problem, method);
  const auto y = out.y.data();
  return {y.begin(), y.begin() + static_cast<std::ptrdiff_t>(steps)};
}

ErrorSeries measure_cumulative_error(const ContinuousSystem& sys, const InputSignal& x, Method method,
                                     std::size_t steps, std::size_t substeps) {
  const auto reference = solve_continuous(sys, x, steps, substeps);
  const auto discrete = discrete_outputs(sys, x, method, steps);
  ErrorSeries e;
  e.per_step.resize(steps);
  e.running_max.resize(steps);
  for (std::size_t n = 0; n < steps; ++n) {
    e.per_step[n] = std::abs(reference[n] - discrete[n]);
    e.max = std::max(e.max, e.per_step[n]);
    e.running_max[n] = e.max;
  }
  return e;
}

ErrorBoundParams ErrorBoundParams::make(double lipschitz, double c, double b, double delta, double a,
                                        std::uint64_t n) {
  ErrorBoundParams p;
  p.lipschitz = lipschitz;
  p.c_abs = std::abs(c);
  p.b_abs = std::abs(b);
  p.delta = delta;
  p.a = a;
  p.n = n;
  p.exp_xi_sup = std::max(1.0, std::exp(delta * a));
  return p;
}

double geometric_growth(double z, std::uint64_t n) {
  // Summed term by term: avoids the 0/0 of the closed form and is accurate
  // for both signs of z at the n used here (a few hundred).
  double sum = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) sum += std::exp(static_cast<double>(k) * z);
  return sum;
}

double bound_ssm(const ErrorBoundParams& p) {
  return p.c_abs * p.lipschitz * p.b_abs * p.exp_xi_sup * p.delta * p.delta * geometric_growth(p.delta * p.a, p.n);
}

double bound_fssm(const ErrorBoundParams& p) { return 0.5 * bound_ssm(p); }

double bound_for(Method method, const ErrorBoundParams& p) {
  return method == Method::Zoh ? bound_ssm(p) : bound_fssm(p);
}

double convergence_order(std::span<const double> deltas, std::span<const double> errors) {
  if (deltas.size() != errors.size() || deltas.size() < 3) {
    throw Error(ErrorCode::DegenerateFit, "need at least 3 matching (delta, error) points");
  }
  const std::size_t n = deltas.size();
  double mx = 0.0;
  double my = 0.0;
  std::vector<double> lx(n);
  std::vector<double> ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(deltas[i] > 0.0) || !(errors[i] > 0.0) || !std::isfinite(deltas[i]) || !std::isfinite(errors[i])) {
      throw Error(ErrorCode::DegenerateFit, "deltas and errors must be finite and > 0");
    }
    lx[i] = std::log(deltas[i]);
    ly[i] = std::log(errors[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw Error(ErrorCode::DegenerateFit, "all deltas are equal");
  return sxy / sxx;
}

}  // namespace fssm
