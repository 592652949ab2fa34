// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include "fssm/scan.hpp"

#include <cmath>
#include <string>

#include "scan_internal.hpp"

namespace fssm {

template <typename Real>
void BasicScanProblem<Real>::validate() const {
  const std::size_t T = len();
  const std::size_t D = channels();
  const std::size_t N = state_dim;
  if (N == 0 || delta.size() != T || b.size() != T * N || c.size() != T * N || a.size() != D * N ||
      (!d_skip.empty() && d_skip.size() != D)) {
    throw Error(ErrorCode::ShapeMismatch, "scan problem arrays do not match T x D x N");
  }
  if (!all_finite<Real>(b) || !all_finite<Real>(c) || !all_finite<Real>(a) || !all_finite<Real>(d_skip)) {
    throw Error(ErrorCode::NonFinite, "scan parameters contain NaN or Inf");
  }
  for (std::size_t n = 0; n < T; ++n) {
    if (!(delta[n] > Real(0)) || !std::isfinite(delta[n])) {
      throw Error(ErrorCode::NonPositiveDelta, "delta at step " + std::to_string(n) + " is not > 0");
    }
  }
}

template struct BasicScanProblem<double>;
template struct BasicScanProblem<float>;

ScanProblem make_problem(const Sequence& x, const SelectionWeights& weights, const ScanOptions& options) {
  weights.validate();
  if (x.channels() != weights.channels) {
    throw Error(ErrorCode::ShapeMismatch, "sequence has " + std::to_string(x.channels()) +
                                              " channels, weights expect " + std::to_string(weights.channels));
  }
  const std::size_t T = x.len();
  const std::size_t N = weights.state_dim;
  ScanProblem p{x, N, std::vector<double>(T), std::vector<double>(T * N), std::vector<double>(T * N),
                weights.state_matrix(), {}};
  for (std::size_t n = 0; n < T; ++n) {
    const StepParams sp = project_params(x.row(n), weights);
    p.delta[n] = sp.delta;
    std::copy(sp.b.begin(), sp.b.end(), p.b.begin() + n * N);
    std::copy(sp.c.begin(), sp.c.end(), p.c.begin() + n * N);
  }
  if (options.skip) p.d_skip = weights.d_skip;
  return p;
}

ScanProblem make_time_invariant_problem(const Sequence& x, double delta, std::vector<double> a,
                                        const std::vector<double>& b, const std::vector<double>& c) {
  const std::size_t T = x.len();
  const std::size_t N = b.size();
  if (N == 0 || c.size() != N) throw Error(ErrorCode::ShapeMismatch, "b and c must be non-empty N-vectors");
  ScanProblem p{x, N, std::vector<double>(T, delta), {}, {}, std::move(a), {}};
  p.b.reserve(T * N);
  p.c.reserve(T * N);
  for (std::size_t n = 0; n < T; ++n) {
    p.b.insert(p.b.end(), b.begin(), b.end());
    p.c.insert(p.c.end(), c.begin(), c.end());
  }
  p.validate();
  return p;
}

ScanProblemF32 to_f32(const ScanProblem& problem) {
  auto cast = [](const std::vector<double>& v) { return std::vector<float>(v.begin(), v.end()); };
  ScanProblemF32 out{problem.x.cast<float>(), problem.state_dim, cast(problem.delta), cast(problem.b),
                     cast(problem.c), cast(problem.a), cast(problem.d_skip)};
  out.validate();
  return out;
}

template <typename Real>
BasicScanOutput<Real> scan_sequential(const BasicScanProblem<Real>& problem, Method method) {
  problem.validate();
  const std::size_t T = problem.len();
  const std::size_t D = problem.channels();
  const std::size_t N = problem.state_dim;
  const bool skip = !problem.d_skip.empty();

  std::vector<Real> h(D * N, Real(0));
  std::vector<Real> y(T * D);
  for (std::size_t n = 0; n < T; ++n) {
    const bool last = n + 1 == T;
    const Method m = step_method(method, last);
    const Real dn = problem.delta[n];
    const Real* bn = problem.b.data() + n * N;
    const Real* cn = problem.c.data() + n * N;
    for (std::size_t d = 0; d < D; ++d) {
      const Real x_now = problem.x(n, d);
      const Real x_next = last ? Real(0) : problem.x(n + 1, d);
      Real* hd = h.data() + d * N;
      Real acc = 0;
      for (std::size_t k = 0; k < N; ++k) {
        const auto f = step_factors<Real>(m, dn, problem.a[d * N + k], bn[k]);
        hd[k] = f.abar * hd[k] + detail::step_input(f, x_now, x_next);
        acc += cn[k] * hd[k];
      }
      if (skip) acc += problem.d_skip[d] * x_now;
      y[n * D + d] = acc;
    }
  }
  return {BasicSequence<Real>::from_flat(T, D, std::move(y)), std::move(h)};
}

template BasicScanOutput<double> scan_sequential(const BasicScanProblem<double>&, Method);
template BasicScanOutput<float> scan_sequential(const BasicScanProblem<float>&, Method);

ScanOutput scan_sequential(const Sequence& x, const SelectionWeights& weights, Method method,
                           const ScanOptions& options) {
  return scan_sequential(make_problem(x, weights, options), method);
}

ScanElement ScanElement::identity(std::size_t n) {
  return {std::vector<double>(n, 1.0), std::vector<double>(n, 0.0)};
}

ScanElement compose(const ScanElement& first, const ScanElement& second) {
  const std::size_t n = first.mult.size();
  if (first.offset.size() != n || second.mult.size() != n || second.offset.size() != n) {
    throw Error(ErrorCode::ShapeMismatch, "scan elements differ in length");
  }
  ScanElement out{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.mult[i] = second.mult[i] * first.mult[i];
    out.offset[i] = second.mult[i] * first.offset[i] + second.offset[i];
  }
  return out;
}

}  // namespace fssm
