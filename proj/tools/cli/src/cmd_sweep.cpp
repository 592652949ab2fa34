// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

#include "fssm/cli/commands.hpp"
#include "fssm/cli/csv.hpp"
#include "fssm/core.hpp"
#include "fssm/oracle.hpp"
#include "output.hpp"

namespace fssm::cli {

std::vector<SweepRow> run_sweep(const RunConfig& config, std::size_t* violations) {
  if (config.deltas.empty()) throw Error(ErrorCode::OutOfRange, "empty delta list");
  if (config.methods.empty()) throw Error(ErrorCode::OutOfRange, "empty method list");
  std::vector<double> deltas = config.deltas;
  std::sort(deltas.begin(), deltas.end(), std::greater<>());

  const auto x = InputSignal::smooth([](double t) { return std::sin(t); });
  constexpr double kLipschitz = 1.0;
  std::vector<SweepRow> rows;
  std::size_t bad = 0;
  for (const Method method : config.methods) {
    std::vector<double> seen_deltas;
    std::vector<double> seen_errors;
    for (const double delta : deltas) {
      const ContinuousSystem sys{config.a, config.b, 1.0, delta};
      const auto err = measure_cumulative_error(sys, x, method, config.steps);
      for (std::size_t n = 0; n < config.steps; ++n) {
        const auto p = ErrorBoundParams::make(kLipschitz, sys.c, sys.b, delta, sys.a, n + 1);
        if (err.per_step[n] > bound_for(method, p)) ++bad;
      }
      SweepRow row;
      row.delta = delta;
      row.method = method;
      row.max_abs_err = err.max;
      row.bound = bound_for(method, ErrorBoundParams::make(kLipschitz, sys.c, sys.b, delta, sys.a, config.steps));
      seen_deltas.push_back(delta);
      seen_errors.push_back(err.max);
      if (seen_deltas.size() >= 3) row.slope_so_far = convergence_order(seen_deltas, seen_errors);
      rows.push_back(row);
    }
  }
  // Report grouped by delta, methods in the requested order.
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& l, const SweepRow& r) { return l.delta > r.delta; });
  if (violations != nullptr) *violations = bad;
  return rows;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::size_t violations = 0;
  const auto rows = run_sweep(config, &violations);
  detail::with_output(config.out, out, [&](std::ostream& os) {
    CsvWriter csv(os, {"delta", "method", "max_abs_err", "bound", "slope_so_far"});
    for (const auto& r : rows) {
      csv.row({format_real(r.delta), std::string(to_token(r.method)), format_real(r.max_abs_err),
               format_real(r.bound), r.slope_so_far ? format_real(*r.slope_so_far) : std::string()});
    }
  });
  if (violations > 0) err << "sweep: " << violations << " step(s) exceeded the theorem bound\n";
  return kExitOk;
}

}  // namespace fssm::cli
