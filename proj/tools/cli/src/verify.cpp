// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include "fssm/cli/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "fssm/cli/commands.hpp"
#include "fssm/cli/pgm.hpp"
#include "fssm/core.hpp"
#include "fssm/discretization.hpp"
#include "fssm/oracle.hpp"
#include "fssm/scan.hpp"
#include "fssm/scan2d.hpp"
#include "fssm/selection.hpp"

namespace fssm::cli {
namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  Outcome() { detail.precision(3); }
  void require(bool ok) { passed = passed && ok; }
};

double normwise_gap(std::span<const double> got, std::span<const double> want) {
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    diff = std::max(diff, std::abs(got[i] - want[i]));
    scale = std::max(scale, std::abs(want[i]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

Sequence random_sequence(std::size_t len, std::size_t channels, Rng& rng) {
  std::vector<double> flat(len * channels);
  for (double& v : flat) v = rng.uniform(-1.0, 1.0);
  return Sequence::from_flat(len, channels, std::move(flat));
}

double log_uniform(Rng& rng, double lo, double hi) { return std::exp(rng.uniform(std::log(lo), std::log(hi))); }

void suite_identity(const VerifyOptions& opt, Outcome& out) {
  constexpr int kDraws = 10000;
  constexpr double kTol = 1e-12;
  Rng rng(opt.seed);
  double worst = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double delta = log_uniform(rng, 1e-4, 1.0);
    const double a = -log_uniform(rng, 1e-6, 16.0);
    const double b = rng.uniform(0.1, 2.0) * (rng.next_real() < 0.5 ? -1.0 : 1.0);
    const std::vector<double> av = {a};
    const std::vector<double> bv = {b};
    const auto zoh = discretize_zoh(delta, av, bv);
    auto foh = discretize_foh_exact(delta, av, bv);
    if (opt.break_identity) foh.bbar2[0] *= 1.01;
    worst = std::max(worst, std::abs(foh.bbar1[0] + foh.bbar2[0] - zoh.bbar1[0]) / std::abs(zoh.bbar1[0]));
  }
  out.require(worst <= kTol);
  out.detail << kDraws << " draws, max rel err " << worst << " (tol " << kTol << ")";
}

void suite_approx_order(const VerifyOptions&, Outcome& out) {
  const std::vector<double> zs = {1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<double> err_fssm;
  std::vector<double> err_plus;
  for (const double z : zs) {
    // delta = 1, b = 1: factor errors are the coefficient errors themselves.
    const std::vector<double> a = {-z};
    const std::vector<double> b = {1.0};
    const auto exact = discretize_foh_exact(1.0, a, b);
    const auto fssm = discretize_fssm(1.0, a, b);
    const auto plus = discretize_fssm_plus(1.0, a, b);
    err_fssm.push_back(std::hypot(fssm.bbar1[0] - exact.bbar1[0], fssm.bbar2[0] - exact.bbar2[0]));
    err_plus.push_back(std::hypot(plus.bbar1[0] - exact.bbar1[0], plus.bbar2[0] - exact.bbar2[0]));
  }
  const double s1 = convergence_order(zs, err_fssm);
  const double s2 = convergence_order(zs, err_plus);
  out.require(std::abs(s1 - 1.0) <= 0.1 && std::abs(s2 - 2.0) <= 0.1);
  out.detail << "fssm slope " << s1 << " (want 1.0+-0.1), fssm-plus slope " << s2 << " (want 2.0+-0.1)";
}

void suite_exactness(const VerifyOptions& opt, Outcome& out) {
  constexpr std::size_t kSteps = 100;
  constexpr double kTol = 1e-10;
  Rng rng(opt.seed);
  const ContinuousSystem sys{-0.7, 1.3, 0.9, 0.1};
  std::vector<double> samples(kSteps + 1);
  for (double& v : samples) v = rng.uniform(-1.0, 1.0);

  const auto gap = [&](const InputSignal& x, Method method) {
    const auto ref = solve_continuous(sys, x, kSteps, 8);
    const auto got = discrete_outputs(sys, x, method, kSteps);
    double worst = 0.0;
    for (std::size_t n = 0; n < kSteps; ++n) worst = std::max(worst, std::abs(ref[n] - got[n]));
    return worst;
  };
  const double foh = gap(InputSignal::piecewise_linear(samples, sys.delta), Method::FohExact);
  const double zoh = gap(InputSignal::piecewise_constant(samples, sys.delta), Method::Zoh);
  out.require(foh <= kTol && zoh <= kTol);
  out.detail << "foh-exact on piecewise-linear " << foh << ", zoh on piecewise-constant " << zoh << " (tol " << kTol
             << ")";
}

void suite_bounds(const VerifyOptions&, Outcome& out) {
  RunConfig cfg;
  cfg.a = -1.0;
  cfg.b = 1.0;
  cfg.deltas = {0.2, 0.1, 0.05};
  cfg.methods = {Method::Zoh, Method::FohExact};
  cfg.steps = 200;
  std::size_t violations = 0;
  (void)run_sweep(cfg, &violations);

  const auto worked = ErrorBoundParams::make(1.0, 1.0, 1.0, 0.1, -1.0, 10);
  const double fssm = bound_fssm(worked);
  bool half = true;
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto p = ErrorBoundParams::make(rng.uniform(0, 3), rng.uniform(-2, 2), rng.uniform(-2, 2),
                                          rng.uniform(1e-3, 1), rng.uniform(-5, 1), 1 + rng.next_u64() % 500);
    half = half && bound_fssm(p) == 0.5 * bound_ssm(p);
  }
  out.require(violations == 0 && half && std::abs(fssm - 0.0332127) <= 1e-6);
  out.detail.precision(9);
  out.detail << violations << " per-step violations over 3 deltas x 2 methods x 200 steps; ratio 1/2 "
             << (half ? "exact" : "BROKEN") << "; bound_fssm(0.1, 10) = " << fssm;
}

void suite_improvement(const VerifyOptions&, Outcome& out) {
  RunConfig cfg;
  cfg.a = -1.0;
  cfg.b = 1.0;
  cfg.deltas = {0.2, 0.1, 0.05, 0.025};
  cfg.methods = {Method::Zoh, Method::FohExact};
  cfg.steps = 200;
  const auto rows = run_sweep(cfg);

  std::map<double, std::map<Method, double>> by_delta;
  std::map<Method, double> slope;
  for (const auto& r : rows) {
    by_delta[r.delta][r.method] = r.max_abs_err;
    if (r.slope_so_far) slope[r.method] = *r.slope_so_far;
  }
  bool improved = true;
  for (auto& [delta, errs] : by_delta) improved = improved && errs[Method::FohExact] < errs[Method::Zoh];
  const auto in_band = [](double s) { return s >= 1.8 && s <= 2.2; };
  out.require(improved && in_band(slope[Method::Zoh]) && in_band(slope[Method::FohExact]));
  out.detail << "foh-exact < zoh at every delta: " << (improved ? "yes" : "no") << "; slopes zoh "
             << slope[Method::Zoh] << ", foh-exact " << slope[Method::FohExact] << " (want [1.8, 2.2])";
}

void suite_scan_equivalence(const VerifyOptions& opt, Outcome& out) {
  constexpr int kInstances = 200;
  constexpr double kTol = 1e-12;
  const std::size_t lengths[] = {1, 2, 3, 7, 64, 1025};
  Rng rng(opt.seed);
  double worst = 0.0;
  int identical = 0;
  for (int i = 0; i < kInstances; ++i) {
    const std::size_t T = lengths[i % 6];
    const Method method = kAllMethods[(i / 6) % 4];
    const std::size_t chunks[] = {1, 4, 64, T};
    const std::size_t chunk = chunks[(i / 24) % 4];
    const Dims dims = Dims::make(T, 1 + rng.next_u64() % 3, 1 + rng.next_u64() % 4);
    const auto w = init_weights(dims, rng);
    const auto x = random_sequence(T, dims.channels, rng);

    const auto seq = scan_sequential(x, w, method);
    const auto one = scan_parallel(x, w, method, {chunk, 1});
    const auto many = scan_parallel(x, w, method, {chunk, std::max<std::size_t>(3, opt.workers)});
    worst = std::max({worst, normwise_gap(one.y.data(), seq.y.data()), normwise_gap(one.h_final, seq.h_final)});
    if (one.y == many.y && one.h_final == many.h_final) ++identical;
  }
  out.require(worst <= kTol && identical == kInstances);
  out.detail << kInstances << " instances, max rel gap " << worst << " (tol " << kTol << "), worker-independent "
             << identical << "/" << kInstances;
}

void suite_gradients(const VerifyOptions& opt, Outcome& out) {
  constexpr double kTol = 1e-5;
  constexpr double kStep = 1e-6;
  const Dims dims = Dims::make(8, 4, 3);
  const ScanOptions options{true};
  Rng rng(opt.seed);
  double worst = 0.0;
  bool lookahead_ok = true;

  for (const Method method : kAllMethods) {
    SelectionWeights w = init_weights(dims, rng);
    for (double& v : w.a_log) v += rng.uniform(-0.5, 0.5);
    for (double& v : w.d_skip) v = rng.uniform(-1, 1);
    const auto x = random_sequence(dims.seq_len, dims.channels, rng);
    const auto g = random_sequence(dims.seq_len, dims.channels, rng);
    const auto grads = scan_backward(x, w, method, g, options);

    const auto loss = [&](const Sequence& xs, const SelectionWeights& ws) {
      const auto y = scan_sequential(xs, ws, method, options).y;
      double acc = 0.0;
      for (std::size_t i = 0; i < y.data().size(); ++i) acc += g.data()[i] * y.data()[i];
      return acc;
    };
    const auto check = [&](std::span<const double> analytic, auto&& perturbed_loss) {
      std::vector<double> fd(analytic.size());
      for (std::size_t i = 0; i < fd.size(); ++i) {
        fd[i] = (perturbed_loss(i, kStep) - perturbed_loss(i, -kStep)) / (2 * kStep);
      }
      worst = std::max(worst, normwise_gap(analytic, fd));
    };
    const auto weight_group = [&](std::vector<double> SelectionWeights::*field, std::span<const double> analytic) {
      check(analytic, [&](std::size_t i, double h) {
        SelectionWeights p = w;
        (p.*field)[i] += h;
        return loss(x, p);
      });
    };

    check(grads.d_x.data(), [&](std::size_t i, double h) {
      std::vector<double> flat(x.data().begin(), x.data().end());
      flat[i] += h;
      return loss(Sequence::from_flat(x.len(), x.channels(), std::move(flat)), w);
    });
    weight_group(&SelectionWeights::w_delta, grads.d_w_delta);
    weight_group(&SelectionWeights::w_b, grads.d_w_b);
    weight_group(&SelectionWeights::w_c, grads.d_w_c);
    weight_group(&SelectionWeights::a_log, grads.d_a_log);
    weight_group(&SelectionWeights::d_skip, grads.d_d_skip);
    const double bias[] = {grads.d_bias_delta};
    check(bias, [&](std::size_t, double h) {
      SelectionWeights p = w;
      p.bias_delta += h;
      return loss(x, p);
    });

    // dy_3[1] / dx_4[1]
    std::vector<double> onehot(dims.seq_len * dims.channels, 0.0);
    onehot[3 * dims.channels + 1] = 1.0;
    const auto probe = scan_backward(x, w, method, Sequence::from_flat(dims.seq_len, dims.channels, onehot));
    const double look = probe.d_x(4, 1);
    lookahead_ok = lookahead_ok && (uses_lookahead(method) ? std::abs(look) > 1e-12 : look == 0.0);
  }
  out.require(worst <= kTol && lookahead_ok);
  out.detail << "4 methods x 7 groups, max rel err " << worst << " (tol " << kTol << "); lookahead term "
             << (lookahead_ok ? "nonzero for FOH, zero for zoh" : "WRONG");
}

void suite_boundary(const VerifyOptions& opt, Outcome& out) {
  Rng rng(opt.seed);
  bool same = true;
  for (int trial = 0; trial < 10; ++trial) {
    const Dims dims = Dims::make(1, 3, 2);
    const auto w = init_weights(dims, rng);
    const auto x = random_sequence(1, dims.channels, rng);
    const auto ref = scan_sequential(x, w, Method::Zoh);
    for (const Method m : kAllMethods) same = same && scan_sequential(x, w, m).y == ref.y;
  }
  const auto problem = make_time_invariant_problem(Sequence::from_rows({{1.0}, {2.0}}), 0.1, {-1.0}, {1.0}, {1.0});
  const auto y = scan_sequential(problem, Method::FohExact).y;
  const double want[] = {0.14353676232363616, 0.32020259734224100};
  const double gap = std::max(std::abs(y(0, 0) - want[0]), std::abs(y(1, 0) - want[1]));
  out.require(same && gap <= 1e-9);
  out.detail << "T=1 identical across methods: " << (same ? "yes" : "no") << "; hand fixture gap " << gap
             << " (tol 1e-9)";
}

void suite_scan2d(const VerifyOptions& opt, Outcome& out) {
  constexpr double kTol = 1e-12;
  Rng rng(opt.seed);
  double worst = 0.0;
  double round_trip = 0.0;
  Scan2dConfig cfg;
  cfg.direction_workers = opt.workers;
  for (int trial = 0; trial < 3; ++trial) {
    const std::size_t D = 3;
    std::vector<double> flat(16 * D);
    for (double& v : flat) v = rng.uniform(-1, 1);
    const auto fm = FeatureMap::from_flat(4, 4, D, flat);
    const auto dirs = DirectionSet::shared(init_weights(Dims::make(16, D, 2), rng));
    for (const Method m : kAllMethods) {
      const auto lhs = scan2d_forward(rotate180(fm), dirs, m, cfg);
      const auto rhs = rotate180(scan2d_forward(fm, dirs, m, cfg));
      worst = std::max(worst, normwise_gap(lhs.data(), rhs.data()));
    }
    std::vector<Sequence> seqs;
    for (const Ordering o : kAllOrderings) seqs.push_back(cross_scan(fm, o));
    const auto merged = cross_merge(seqs, kAllOrderings, 4, 4);
    std::vector<double> four(flat.size());
    for (std::size_t i = 0; i < flat.size(); ++i) four[i] = 4.0 * flat[i];
    round_trip = std::max(round_trip, normwise_gap(merged.data(), four));
  }

  GrayImage img{5, 7, std::vector<double>(35)};
  for (double& p : img.pixels) p = static_cast<double>(rng.next_u64() % 256) / 255.0;
  const auto encode = [&] {
    std::ostringstream os(std::ios::binary);
    write_pgm(os, image2d_transform(img, {opt.seed, Method::FohExact, 8, 4, 4096, opt.workers}).image);
    return os.str();
  };
  const bool deterministic = encode() == encode();
  out.require(worst <= kTol && round_trip <= 1e-15 && deterministic);
  out.detail << "rotation gap " << worst << " (tol " << kTol << "), round-trip gap " << round_trip
             << ", image2d byte-identical: " << (deterministic ? "yes" : "no");
}

using SuiteFn = void (*)(const VerifyOptions&, Outcome&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"identity", suite_identity},       {"approx-order", suite_approx_order},
      {"exactness", suite_exactness},     {"bounds", suite_bounds},
      {"improvement", suite_improvement}, {"scan-equivalence", suite_scan_equivalence},
      {"gradients", suite_gradients},     {"boundary", suite_boundary},
      {"scan2d", suite_scan2d},
  };
  return suites;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& options) {
  const auto& suites = registry();
  const auto it = std::find_if(suites.begin(), suites.end(), [&](const auto& s) { return s.first == name; });
  if (it == suites.end()) throw Error(ErrorCode::OutOfRange, "no suite named " + name);

  SuiteResult result;
  result.name = name;
  Outcome outcome;
  const auto start = std::chrono::steady_clock::now();
  try {
    it->second(options, outcome);
  } catch (const std::exception& e) {
    outcome.passed = false;
    outcome.detail << "threw: " << e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.passed = outcome.passed;
  result.detail = outcome.detail.str();
  return result;
}

std::vector<SuiteResult> run_verify(const VerifyOptions& options) {
  std::vector<SuiteResult> results;
  for (const auto& name : suite_names()) results.push_back(run_suite(name, options));
  return results;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream&) {
  const VerifyOptions options{config.seed, config.break_identity, config.workers};
  std::size_t passed = 0;
  std::size_t total = 0;
  for (const auto& name : suite_names()) {
    const auto r = run_suite(name, options);
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " [" << secs << " s] " << r.detail << '\n' << std::flush;
    passed += r.passed ? 1 : 0;
    ++total;
  }
  out << passed << "/" << total << " suites passed\n";
  return passed == total ? kExitOk : kExitFailed;
}

}  // namespace fssm::cli
