// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <ostream>
#include <vector>

#include "fssm/cli/commands.hpp"
#include "output.hpp"

namespace fssm::cli {

int cmd_discretize(const RunConfig& config, std::ostream& out, std::ostream&) {
  const std::vector<double> a = {config.a};
  const std::vector<double> b = {config.b};
  const auto f = discretize(config.method, config.delta, a, b);

  const auto line = [](std::ostream& os, const char* name, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s %.12f\n", name, value);
    os << buf;
  };
  detail::with_output(config.out, out, [&](std::ostream& os) {
    line(os, "abar", f.abar[0]);
    if (f.has_bbar2) {
      line(os, "bbar1", f.bbar1[0]);
      line(os, "bbar2", f.bbar2[0]);
    } else {
      line(os, "bbar", f.bbar1[0]);
    }
  });
  return kExitOk;
}

}  // namespace fssm::cli
