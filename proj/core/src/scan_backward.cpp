// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0
//
// Adjoint of the selective scan. The forward pass keeps every state
// h_0..h_T; the reverse sweep carries lambda = dL/dh_{n+1} and pushes it
// through the step factors, the hold coefficients (as functions of
// z = delta * a) and finally the selection projections.

#include <cmath>

#include "fssm/scan.hpp"
#include "scan_internal.hpp"

namespace fssm {

ScanGradients scan_backward(const Sequence& x, const SelectionWeights& weights, Method method,
                            const Sequence& grad_y, const ScanOptions& options) {
  const ScanProblem p = make_problem(x, weights, options);
  if (grad_y.len() != x.len() || grad_y.channels() != x.channels()) {
    throw Error(ErrorCode::ShapeMismatch, "grad_y must be shaped like y");
  }
  const std::size_t T = p.len();
  const std::size_t D = p.channels();
  const std::size_t N = p.state_dim;
  const std::size_t W = D * N;

  // Forward, saving states.
  std::vector<double> states((T + 1) * W, 0.0);
  for (std::size_t n = 0; n < T; ++n) {
    const bool last = n + 1 == T;
    const Method m = step_method(method, last);
    const double* h_prev = states.data() + n * W;
    double* h_next = states.data() + (n + 1) * W;
    for (std::size_t d = 0; d < D; ++d) {
      const double x_now = x(n, d);
      const double x_next = last ? 0.0 : x(n + 1, d);
      for (std::size_t k = 0; k < N; ++k) {
        const auto f = step_factors<double>(m, p.delta[n], p.a[d * N + k], p.b[n * N + k]);
        const std::size_t i = d * N + k;
        h_next[i] = f.abar * h_prev[i] + detail::step_input(f, x_now, x_next);
      }
    }
  }

  std::vector<double> d_x(T * D, 0.0);
  std::vector<double> d_a(W, 0.0);
  ScanGradients g{Sequence(T, D), std::vector<double>(D, 0.0), 0.0, std::vector<double>(N * D, 0.0),
                  std::vector<double>(N * D, 0.0), std::vector<double>(W, 0.0), std::vector<double>(D, 0.0)};

  std::vector<double> lambda(W, 0.0);
  std::vector<double> gb(N);
  std::vector<double> gc(N);
  for (std::size_t n = T; n-- > 0;) {
    const bool last = n + 1 == T;
    const Method m = step_method(method, last);
    const double dn = p.delta[n];
    const double* bn = p.b.data() + n * N;
    const double* cn = p.c.data() + n * N;
    const double* h_prev = states.data() + n * W;
    const double* h_next = states.data() + (n + 1) * W;
    std::fill(gb.begin(), gb.end(), 0.0);
    std::fill(gc.begin(), gc.end(), 0.0);
    double g_delta = 0.0;

    for (std::size_t d = 0; d < D; ++d) {
      const double gy = grad_y(n, d);
      const double x_now = x(n, d);
      const double x_next = last ? 0.0 : x(n + 1, d);
      if (options.skip) {
        d_x[n * D + d] += gy * weights.d_skip[d];
        g.d_d_skip[d] += gy * x_now;
      }
      for (std::size_t k = 0; k < N; ++k) {
        const std::size_t i = d * N + k;
        // y_n = <c_n, h_{n+1}>
        lambda[i] += gy * cn[k];
        gc[k] += gy * h_next[i];

        const double a = p.a[i];
        const double z = dn * a;
        const auto hc = hold_coefficients<double>(m, z);
        const double abar = std::exp(z);
        const double scale = dn * bn[k];
        const double lam = lambda[i];

        const double g_abar = lam * h_prev[i];
        const double g_b1 = lam * x_now;
        const double g_b2 = lam * x_next;
        d_x[n * D + d] += lam * hc.p1 * scale;
        if (!last) d_x[(n + 1) * D + d] += lam * hc.p2 * scale;

        const double g_z = g_abar * abar + (g_b1 * hc.dp1 + g_b2 * hc.dp2) * scale;
        const double g_coef = g_b1 * hc.p1 + g_b2 * hc.p2;
        g_delta += g_z * a + g_coef * bn[k];
        d_a[i] += g_z * dn;
        gb[k] += g_coef * dn;

        lambda[i] = lam * abar;
      }
    }

    // Selection: delta_n = softplus(<w_delta, x_n> + bias), b_n = W_b x_n, c_n = W_c x_n.
    double pre = weights.bias_delta;
    for (std::size_t d = 0; d < D; ++d) pre += weights.w_delta[d] * x(n, d);
    const double g_pre = g_delta * softplus_derivative(pre);
    g.d_bias_delta += g_pre;
    for (std::size_t d = 0; d < D; ++d) {
      const double xd = x(n, d);
      g.d_w_delta[d] += g_pre * xd;
      double acc = g_pre * weights.w_delta[d];
      for (std::size_t k = 0; k < N; ++k) {
        g.d_w_b[k * D + d] += gb[k] * xd;
        g.d_w_c[k * D + d] += gc[k] * xd;
        acc += gb[k] * weights.w_b[k * D + d] + gc[k] * weights.w_c[k * D + d];
      }
      d_x[n * D + d] += acc;
    }
  }

  // a = -exp(a_log)  =>  da / da_log = a
  for (std::size_t i = 0; i < W; ++i) g.d_a_log[i] = d_a[i] * p.a[i];
  g.d_x = Sequence::from_flat(T, D, std::move(d_x));
  return g;
}

}  // namespace fssm
