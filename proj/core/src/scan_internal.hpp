// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

#include "fssm/discretization.hpp"

namespace fssm::detail {

// Input contribution of one step. Every kernel goes through this so the
// sequential and chunked paths round identically.
template <typename Real>
inline Real step_input(const StepFactors<Real>& f, Real x_now, Real x_next) {
  return f.bbar1 * x_now + f.bbar2 * x_next;
}

// Runs fn(i) for i in [0, count). Index i is always handled by worker
// i % workers, and fn must only write state owned by index i.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&fn, w, workers, count] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
}

}  // namespace fssm::detail
