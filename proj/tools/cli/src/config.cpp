// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include "fssm/cli/config.hpp"

namespace fssm::cli {

std::string_view to_string(Command command) {
  switch (command) {
    case Command::Discretize: return "discretize";
    case Command::Verify: return "verify";
    case Command::Sweep: return "sweep";
    case Command::Bench: return "bench";
    case Command::Image2d: return "image2d";
  }
  return "unknown";
}

std::string_view to_string(Precision precision) { return precision == Precision::F32 ? "f32" : "f64"; }

std::optional<Precision> parse_precision(std::string_view token) {
  if (token == "f64") return Precision::F64;
  if (token == "f32") return Precision::F32;
  return std::nullopt;
}

namespace {

template <typename T, typename Fmt>
void print_list(std::ostream& os, const std::vector<T>& values, Fmt fmt) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) os << ',';
    fmt(os, values[i]);
  }
}

}  // namespace

void print_config(std::ostream& os, const RunConfig& c) {
  os << "config: command=" << to_string(c.command) << " seed=" << c.seed
     << " precision=" << to_string(c.precision) << " workers=" << c.workers;
  const auto plain = [](std::ostream& o, auto v) { o << v; };
  switch (c.command) {
    case Command::Discretize:
      os << " method=" << to_token(c.method) << " delta=" << c.delta << " a=" << c.a << " b=" << c.b;
      break;
    case Command::Verify:
      os << " break_identity=" << (c.break_identity ? "true" : "false");
      break;
    case Command::Sweep:
      os << " a=" << c.a << " b=" << c.b << " steps=" << c.steps << " deltas=";
      print_list(os, c.deltas, plain);
      os << " methods=";
      print_list(os, c.methods, [](std::ostream& o, Method m) { o << to_token(m); });
      break;
    case Command::Bench:
      os << " chunk=" << c.chunk << " T=";
      print_list(os, c.lengths, plain);
      os << " N=" << c.state_dim << " D=" << c.channels << " reps=" << c.reps << " methods=";
      print_list(os, c.methods, [](std::ostream& o, Method m) { o << to_token(m); });
      break;
    case Command::Image2d:
      os << " method=" << to_token(c.method) << " chunk=" << c.chunk << " in=" << c.in
         << " channels=" << c.embed_channels << " N=" << c.state_dim;
      break;
  }
  os << " out=" << c.out << '\n';
}

}  // namespace fssm::cli
