// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "fssm/core.hpp"
#include "fssm/oracle.hpp"

namespace fssm {
namespace {

void check_dense(const DenseSystem& sys) {
  const std::size_t N = sys.state_dim;
  if (N == 0 || sys.a.size() != N * N || sys.b.size() != N || sys.c.size() != N) {
    throw Error(ErrorCode::ShapeMismatch, "dense system arrays do not match N");
  }
  if (!(sys.delta > 0.0) || !std::isfinite(sys.delta)) {
    throw Error(ErrorCode::NonPositiveDelta, "delta must be finite and > 0");
  }
}

}  // namespace

DenseFactors dense_foh_factors(const DenseSystem& sys) {
  check_dense(sys);
  const auto N = static_cast<Eigen::Index>(sys.state_dim);
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(N + 2, N + 2);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) gen(i, j) = sys.a[i * N + j];
    gen(i, N) = sys.b[i];
  }
  gen(N, N + 1) = 1.0;
  const Eigen::MatrixXd e = (sys.delta * gen).exp();

  // h(delta) = E_hh h + E_hu x_n + E_hv (x_{n+1} - x_n) / delta
  DenseFactors f;
  f.abar.resize(N * N);
  f.bbar1.resize(N);
  f.bbar2.resize(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) f.abar[i * N + j] = e(i, j);
    const double slope_term = e(i, N + 1) / sys.delta;
    f.bbar1[i] = e(i, N) - slope_term;
    f.bbar2[i] = slope_term;
  }
  return f;
}

std::vector<double> solve_continuous_dense(const DenseSystem& sys, const InputSignal& x, std::size_t steps,
                                           std::size_t substeps) {
  check_dense(sys);
  if (substeps == 0) throw Error(ErrorCode::OutOfRange, "substeps must be >= 1");
  const auto N = static_cast<Eigen::Index>(sys.state_dim);
  const double fine = sys.delta / static_cast<double>(substeps);
  DenseSystem fine_sys = sys;
  fine_sys.delta = fine;
  const DenseFactors f = dense_foh_factors(fine_sys);

  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> abar(
      f.abar.data(), N, N);
  const Eigen::Map<const Eigen::VectorXd> b1(f.bbar1.data(), N);
  const Eigen::Map<const Eigen::VectorXd> b2(f.bbar2.data(), N);
  const Eigen::Map<const Eigen::VectorXd> c(sys.c.data(), N);

  std::vector<double> y(steps);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(N);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t0 = static_cast<double>(n) * sys.delta;
    for (std::size_t j = 0; j < substeps; ++j) {
      const double s0 = t0 + static_cast<double>(j) * fine;
      const double s1 = j + 1 == substeps ? static_cast<double>(n + 1) * sys.delta
                                          : t0 + static_cast<double>(j + 1) * fine;
      h = abar * h + b1 * x.at(s0) + b2 * x.left_limit(s1);
    }
    y[n] = c.dot(h);
  }
  return y;
}

}  // namespace fssm
