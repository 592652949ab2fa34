// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0
//
// Discrete factors for a diagonal SSM under the four hold rules.
//
// With z = delta * a (elementwise over the N diagonal entries):
//
//   zoh        abar = e^z   bbar  = phi1(z) * delta * b
//   foh-exact  abar = e^z   bbar1 = (phi1(z) - phi2(z)) * delta * b
//                           bbar2 = phi2(z) * delta * b
//   fssm       abar = e^z   bbar1 = bbar2 = delta * b / 2
//   fssm-plus  abar = e^z   bbar1 = (1/2 + z/3) * delta * b
//                           bbar2 = (1/2 + z/6) * delta * b
//
// where phi1(z) = (e^z - 1) / z and phi2(z) = (e^z - 1 - z) / z^2. Only the
// input factors are approximated; abar is always the exact exponential.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fssm {

enum class Method { Zoh, FohExact, Fssm, FssmPlus };

inline constexpr std::array<Method, 4> kAllMethods = {Method::Zoh, Method::FohExact, Method::Fssm,
                                                      Method::FssmPlus};

/// Lowercase CLI/CSV token: zoh, foh-exact, fssm, fssm-plus.
std::string_view to_token(Method method);
std::optional<Method> parse_method(std::string_view token);

/// True when the method couples x_{n+1} into step n.
constexpr bool uses_lookahead(Method method) { return method != Method::Zoh; }

/// The rule actually applied at a step: the final token has no successor,
/// so every method falls back to the zero-order hold there.
constexpr Method step_method(Method method, bool last_step) {
  return last_step ? Method::Zoh : method;
}

namespace detail {

// Taylor coefficients 1/(k+1)! and 1/(k+2)!, k = 0..kSeriesTerms-1. For
// |z| < 1 the tail after 20 terms is below 1/22! ~ 1e-21.
inline constexpr std::size_t kSeriesTerms = 20;
inline constexpr double kSeriesRadius = 1.0;

constexpr std::array<double, kSeriesTerms + 2> inverse_factorials() {
  std::array<double, kSeriesTerms + 2> out{};
  double f = 1.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k > 0) f *= static_cast<double>(k);
    out[k] = 1.0 / f;
  }
  return out;
}
inline constexpr auto kInvFact = inverse_factorials();

// sum_k z^k * kInvFact[k + shift]
template <typename Real>
Real series(Real z, std::size_t shift) {
  Real acc = 0;
  for (std::size_t k = kSeriesTerms; k-- > 0;) {
    acc = acc * z + static_cast<Real>(kInvFact[k + shift]);
  }
  return acc;
}

// sum_{k>=1} k z^(k-1) * kInvFact[k + shift]
template <typename Real>
Real series_derivative(Real z, std::size_t shift) {
  Real acc = 0;
  for (std::size_t k = kSeriesTerms; k-- > 1;) {
    acc = acc * z + static_cast<Real>(k) * static_cast<Real>(kInvFact[k + shift]);
  }
  return acc;
}

}  // namespace detail

/// (e^z - 1) / z, continuous through z = 0.
template <typename Real>
Real phi1(Real z) {
  if (std::abs(z) < Real(detail::kSeriesRadius)) return detail::series(z, 1);
  return std::expm1(z) / z;
}

/// (e^z - 1 - z) / z^2, continuous through z = 0.
template <typename Real>
Real phi2(Real z) {
  if (std::abs(z) < Real(detail::kSeriesRadius)) return detail::series(z, 2);
  return (std::expm1(z) - z) / (z * z);
}

/// d/dz phi1 = (e^z (z - 1) + 1) / z^2.
template <typename Real>
Real phi1_derivative(Real z) {
  if (std::abs(z) < Real(detail::kSeriesRadius)) return detail::series_derivative(z, 1);
  return (std::exp(z) - phi1(z)) / z;
}

/// d/dz phi2 = (e^z (z - 2) + z + 2) / z^3.
template <typename Real>
Real phi2_derivative(Real z) {
  if (std::abs(z) < Real(detail::kSeriesRadius)) return detail::series_derivative(z, 2);
  return (phi1(z) - Real(2) * phi2(z)) / z;
}

/// Input-factor coefficients as functions of z = delta * a, so that
/// bbar1 = p1 * delta * b and bbar2 = p2 * delta * b; dp1/dp2 are dz
/// derivatives. Zoh reports its single factor in p1 with p2 = 0.
template <typename Real>
struct HoldCoefficients {
  Real p1;
  Real p2;
  Real dp1;
  Real dp2;
};

template <typename Real>
HoldCoefficients<Real> hold_coefficients(Method method, Real z) {
  switch (method) {
    case Method::Zoh:
      return {phi1(z), Real(0), phi1_derivative(z), Real(0)};
    case Method::FohExact: {
      const Real f1 = phi1(z);
      const Real f2 = phi2(z);
      const Real d2 = phi2_derivative(z);
      return {f1 - f2, f2, phi1_derivative(z) - d2, d2};
    }
    case Method::Fssm:
      return {Real(0.5), Real(0.5), Real(0), Real(0)};
    case Method::FssmPlus:
      return {Real(0.5) + z / Real(3), Real(0.5) + z / Real(6), Real(1) / Real(3), Real(1) / Real(6)};
  }
  return {};
}

/// Factors of one diagonal entry. No argument validation: the scan kernels
/// call this in their inner loop after validating the whole problem.
template <typename Real>
struct StepFactors {
  Real abar;
  Real bbar1;
  Real bbar2;
};

template <typename Real>
StepFactors<Real> step_factors(Method method, Real delta, Real a, Real b) {
  const Real z = delta * a;
  const Real scale = delta * b;
  switch (method) {
    case Method::Zoh:
      return {std::exp(z), phi1(z) * scale, Real(0)};
    case Method::FohExact: {
      const Real f2 = phi2(z);
      return {std::exp(z), (phi1(z) - f2) * scale, f2 * scale};
    }
    case Method::Fssm:
      return {std::exp(z), Real(0.5) * scale, Real(0.5) * scale};
    case Method::FssmPlus:
      return {std::exp(z), (Real(0.5) + z / Real(3)) * scale, (Real(0.5) + z / Real(6)) * scale};
  }
  return {};
}

/// Per-diagonal-entry factors for a whole N-vector. For Zoh, bbar1 holds
/// the single input factor and bbar2 is zero-filled with has_bbar2 = false.
struct DiscreteFactors {
  std::vector<double> abar;
  std::vector<double> bbar1;
  std::vector<double> bbar2;
  bool has_bbar2 = true;
};

/// All four throw NonPositiveDelta unless delta is finite and > 0, and
/// ShapeMismatch when a and b differ in length.
DiscreteFactors discretize_zoh(double delta, std::span<const double> a, std::span<const double> b);
DiscreteFactors discretize_foh_exact(double delta, std::span<const double> a, std::span<const double> b);
/// a only feeds abar; the input factors are delta * b / 2 regardless of a.
DiscreteFactors discretize_fssm(double delta, std::span<const double> a, std::span<const double> b);
DiscreteFactors discretize_fssm_plus(double delta, std::span<const double> a, std::span<const double> b);

DiscreteFactors discretize(Method method, double delta, std::span<const double> a,
                           std::span<const double> b);

}  // namespace fssm
