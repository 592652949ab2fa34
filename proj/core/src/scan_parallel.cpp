// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0
//
// Chunked two-pass scan over the affine step maps h -> abar * h + u.
//
//   pass 1  per chunk, fold its steps into one (mult, offset) aggregate
//   tree    exclusive Blelloch scan of the aggregates (fixed shape, serial)
//   pass 2  per chunk, replay the steps from the carry-in state
//
// Because h_0 = 0, the carry-in state of a chunk is the offset of its
// exclusive prefix. Chunk 0 starts from an exact zero, so a single chunk
// performs the same floating-point operations as scan_sequential.

#include <bit>
#include <string>

#include "fssm/scan.hpp"
#include "scan_internal.hpp"

namespace fssm {
namespace {

// Flat storage for `count` elements of width `width`.
template <typename Real>
struct ElementArray {
  std::size_t width;
  std::vector<Real> mult;
  std::vector<Real> offset;

  ElementArray(std::size_t count, std::size_t w)
      : width(w), mult(count * w, Real(1)), offset(count * w, Real(0)) {}

  Real* m(std::size_t i) { return mult.data() + i * width; }
  Real* o(std::size_t i) { return offset.data() + i * width; }
};

// dst <- compose(first, second), with the same arithmetic as fssm::compose.
template <typename Real>
void compose_into(std::size_t width, const Real* m1, const Real* o1, const Real* m2, const Real* o2,
                  Real* dst_m, Real* dst_o) {
  for (std::size_t i = 0; i < width; ++i) {
    const Real mult = m2[i] * m1[i];
    const Real off = m2[i] * o1[i] + o2[i];
    dst_m[i] = mult;
    dst_o[i] = off;
  }
}

// In-place exclusive scan; element i becomes the composition of elements
// 0..i-1 in order. `count` must be a power of two.
template <typename Real>
void blelloch_exclusive(ElementArray<Real>& e, std::size_t count) {
  const std::size_t w = e.width;
  std::vector<Real> tm(w);
  std::vector<Real> to(w);
  for (std::size_t stride = 1; stride < count; stride *= 2) {
    for (std::size_t i = 2 * stride - 1; i < count; i += 2 * stride) {
      compose_into(w, e.m(i - stride), e.o(i - stride), e.m(i), e.o(i), e.m(i), e.o(i));
    }
  }
  std::fill(e.m(count - 1), e.m(count - 1) + w, Real(1));
  std::fill(e.o(count - 1), e.o(count - 1) + w, Real(0));
  for (std::size_t stride = count / 2; stride >= 1; stride /= 2) {
    for (std::size_t i = 2 * stride - 1; i < count; i += 2 * stride) {
      const std::size_t left = i - stride;
      std::copy(e.m(left), e.m(left) + w, tm.begin());
      std::copy(e.o(left), e.o(left) + w, to.begin());
      std::copy(e.m(i), e.m(i) + w, e.m(left));
      std::copy(e.o(i), e.o(i) + w, e.o(left));
      compose_into(w, e.m(i), e.o(i), tm.data(), to.data(), e.m(i), e.o(i));
    }
  }
}

}  // namespace

template <typename Real>
BasicScanOutput<Real> scan_parallel(const BasicScanProblem<Real>& problem, Method method,
                                    const ParallelConfig& config) {
  if (config.chunk == 0) throw Error(ErrorCode::OutOfRange, "chunk must be >= 1");
  if (config.workers == 0) throw Error(ErrorCode::OutOfRange, "workers must be >= 1");
  problem.validate();

  const std::size_t T = problem.len();
  const std::size_t D = problem.channels();
  const std::size_t N = problem.state_dim;
  const std::size_t W = D * N;
  const std::size_t chunk = std::min(config.chunk, T);
  const std::size_t chunks = (T + chunk - 1) / chunk;
  const bool skip = !problem.d_skip.empty();

  auto factors = [&](std::size_t n, std::size_t d, std::size_t k) {
    const Method m = step_method(method, n + 1 == T);
    return step_factors<Real>(m, problem.delta[n], problem.a[d * N + k], problem.b[n * N + k]);
  };
  auto next_input = [&](std::size_t n, std::size_t d) {
    return n + 1 == T ? Real(0) : problem.x(n + 1, d);
  };

  const std::size_t padded = std::bit_ceil(chunks);
  ElementArray<Real> agg(padded, W);

  detail::parallel_for(chunks, config.workers, [&](std::size_t ci) {
    Real* am = agg.m(ci);
    Real* ao = agg.o(ci);
    const std::size_t end = std::min(T, (ci + 1) * chunk);
    for (std::size_t n = ci * chunk; n < end; ++n) {
      for (std::size_t d = 0; d < D; ++d) {
        const Real x_now = problem.x(n, d);
        const Real x_next = next_input(n, d);
        for (std::size_t k = 0; k < N; ++k) {
          const auto f = factors(n, d, k);
          const std::size_t i = d * N + k;
          const Real u = detail::step_input(f, x_now, x_next);
          am[i] = f.abar * am[i];
          ao[i] = f.abar * ao[i] + u;
        }
      }
    }
  });

  blelloch_exclusive(agg, padded);

  std::vector<Real> y(T * D);
  std::vector<Real> h_final(W);
  detail::parallel_for(chunks, config.workers, [&](std::size_t ci) {
    std::vector<Real> h(agg.o(ci), agg.o(ci) + W);
    const std::size_t end = std::min(T, (ci + 1) * chunk);
    for (std::size_t n = ci * chunk; n < end; ++n) {
      const Real* cn = problem.c.data() + n * N;
      for (std::size_t d = 0; d < D; ++d) {
        const Real x_now = problem.x(n, d);
        const Real x_next = next_input(n, d);
        Real* hd = h.data() + d * N;
        Real acc = 0;
        for (std::size_t k = 0; k < N; ++k) {
          const auto f = factors(n, d, k);
          hd[k] = f.abar * hd[k] + detail::step_input(f, x_now, x_next);
          acc += cn[k] * hd[k];
        }
        if (skip) acc += problem.d_skip[d] * x_now;
        y[n * D + d] = acc;
      }
    }
    if (ci + 1 == chunks) h_final = std::move(h);
  });

  return {BasicSequence<Real>::from_flat(T, D, std::move(y)), std::move(h_final)};
}

template BasicScanOutput<double> scan_parallel(const BasicScanProblem<double>&, Method, const ParallelConfig&);
template BasicScanOutput<float> scan_parallel(const BasicScanProblem<float>&, Method, const ParallelConfig&);

ScanOutput scan_parallel(const Sequence& x, const SelectionWeights& weights, Method method,
                         const ParallelConfig& config, const ScanOptions& options) {
  return scan_parallel(make_problem(x, weights, options), method, config);
}

}  // namespace fssm
