// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include "fssm/discretization.hpp"

#include <string>

#include "fssm/core.hpp"

namespace fssm {

std::string_view to_token(Method method) {
  switch (method) {
    case Method::Zoh: return "zoh";
    case Method::FohExact: return "foh-exact";
    case Method::Fssm: return "fssm";
    case Method::FssmPlus: return "fssm-plus";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view token) {
  for (Method m : kAllMethods) {
    if (to_token(m) == token) return m;
  }
  return std::nullopt;
}

namespace {

void check_args(double delta, std::span<const double> a, std::span<const double> b) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::NonPositiveDelta, "delta must be finite and > 0, got " + std::to_string(delta));
  }
  if (a.size() != b.size()) {
    throw Error(ErrorCode::ShapeMismatch, "a and b must have the same length");
  }
}

}  // namespace

DiscreteFactors discretize(Method method, double delta, std::span<const double> a,
                           std::span<const double> b) {
  check_args(delta, a, b);
  DiscreteFactors out;
  out.abar.resize(a.size());
  out.bbar1.resize(a.size());
  out.bbar2.resize(a.size());
  out.has_bbar2 = method != Method::Zoh;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto f = step_factors<double>(method, delta, a[k], b[k]);
    out.abar[k] = f.abar;
    out.bbar1[k] = f.bbar1;
    out.bbar2[k] = f.bbar2;
  }
  return out;
}

DiscreteFactors discretize_zoh(double delta, std::span<const double> a, std::span<const double> b) {
  return discretize(Method::Zoh, delta, a, b);
}

DiscreteFactors discretize_foh_exact(double delta, std::span<const double> a, std::span<const double> b) {
  return discretize(Method::FohExact, delta, a, b);
}

DiscreteFactors discretize_fssm(double delta, std::span<const double> a, std::span<const double> b) {
  return discretize(Method::Fssm, delta, a, b);
}

DiscreteFactors discretize_fssm_plus(double delta, std::span<const double> a, std::span<const double> b) {
  return discretize(Method::FssmPlus, delta, a, b);
}

}  // namespace fssm
