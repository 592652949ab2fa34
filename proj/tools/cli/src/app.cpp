// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include "fssm/cli/app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <exception>
#include <ostream>
#include <sstream>

#include "fssm/cli/commands.hpp"
#include "fssm/cli/config.hpp"
#include "fssm/cli/verify.hpp"
#include "fssm/core.hpp"

namespace fssm::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

Method method_flag(const std::string& flag, const std::string& token) {
  const auto m = parse_method(token);
  if (!m) throw UsageError(flag + ": unknown method '" + token + "' (zoh, foh-exact, fssm, fssm-plus)");
  return *m;
}

double positive_real(const std::string& flag, const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || !(v > 0.0) || !std::isfinite(v)) {
    throw UsageError(flag + ": '" + token + "' is not a finite real > 0");
  }
  return v;
}

std::size_t positive_int(const std::string& flag, const std::string& token) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || v == 0 || token.front() == '-') throw UsageError(flag + ": '" + token + "' is not an integer >= 1");
  return static_cast<std::size_t>(v);
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::IoError:
    case ErrorCode::BadMagic:
    case ErrorCode::BadHeader: return kExitIo;
    default: return kExitFailed;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"First-order selective state space model toolkit", "fssm"};
  app.require_subcommand(1, 1);

  std::string method = "foh-exact";
  std::string precision = "f64";
  std::string delta = "0.1";
  std::string deltas = "0.2,0.1,0.05,0.025";
  std::string methods;
  std::string lengths = "4096,65536";
  std::size_t workers = 1;
  std::size_t image_state_dim = 4;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "PRNG seed")->capture_default_str();
    sub->add_option("--workers", workers, "worker threads")->envname("FSSM_WORKERS")->capture_default_str();
    sub->add_option("--precision", precision, "f64 or f32 (bench only)")->capture_default_str();
    sub->add_option("--out", cfg.out, "output file, - for stdout")->capture_default_str();
  };

  auto* discretize = app.add_subcommand("discretize", "print the discrete factors of one scalar system");
  common(discretize);
  discretize->add_option("--delta", delta, "step size > 0")->capture_default_str();
  discretize->add_option("--a", cfg.a, "state coefficient")->capture_default_str();
  discretize->add_option("--b", cfg.b, "input coefficient")->capture_default_str();
  discretize->add_option("--method", method, "zoh, foh-exact, fssm, fssm-plus")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run every self-check suite");
  common(verify);
  verify->add_flag("--break-identity", cfg.break_identity, "fault injection: perturb bbar2 by 1%");

  auto* sweep = app.add_subcommand("sweep", "cumulative error against the theorem bounds on x(t) = sin t");
  common(sweep);
  sweep->add_option("--deltas", deltas, "comma-separated step sizes")->capture_default_str();
  sweep->add_option("--methods", methods, "comma-separated methods (default zoh,foh-exact)");
  sweep->add_option("--a", cfg.a, "state coefficient")->capture_default_str();
  sweep->add_option("--b", cfg.b, "input coefficient")->capture_default_str();
  sweep->add_option("--steps", cfg.steps, "steps per run")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "scan throughput, sequential and parallel kernels");
  common(bench);
  bench->add_option("--T", lengths, "comma-separated sequence lengths")->capture_default_str();
  bench->add_option("--N", cfg.state_dim, "state size")->capture_default_str();
  bench->add_option("--D", cfg.channels, "channels")->capture_default_str();
  bench->add_option("--chunk", cfg.chunk, "parallel chunk length")->capture_default_str();
  bench->add_option("--reps", cfg.reps, "timed repetitions (>= 5)")->capture_default_str();
  bench->add_option("--methods", methods, "comma-separated methods (default all)");

  auto* image2d = app.add_subcommand("image2d", "run the four-direction scan over a P5 PGM image");
  common(image2d);
  image2d->add_option("--in", cfg.in, "input P5 PGM")->required();
  image2d->add_option("--method", method, "zoh, foh-exact, fssm, fssm-plus")->capture_default_str();
  image2d->add_option("--channels", cfg.embed_channels, "embedding width")->capture_default_str();
  image2d->add_option("--N", image_state_dim, "state size")->capture_default_str();
  image2d->add_option("--chunk", cfg.chunk, "parallel chunk length")->capture_default_str();

  std::vector<std::string> argv_store;
  argv_store.push_back("fssm");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Covers unknown flags, missing values and missing subcommands.
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*discretize) {
      cfg.command = Command::Discretize;
    } else if (*verify) {
      cfg.command = Command::Verify;
    } else if (*sweep) {
      cfg.command = Command::Sweep;
    } else if (*bench) {
      cfg.command = Command::Bench;
    } else {
      cfg.command = Command::Image2d;
    }
    if (workers == 0) throw UsageError("--workers: must be >= 1");
    cfg.workers = workers;
    const auto prec = parse_precision(precision);
    if (!prec) throw UsageError("--precision: expected f64 or f32, got '" + precision + "'");
    cfg.precision = *prec;
    if (cfg.precision == Precision::F32 && cfg.command != Command::Bench) {
      throw UsageError("--precision f32 is only available for bench");
    }
    cfg.method = method_flag("--method", method);
    if (cfg.command == Command::Discretize) {
      cfg.delta = positive_real("--delta", delta);
      if (!std::isfinite(cfg.a) || !std::isfinite(cfg.b)) throw UsageError("--a/--b: must be finite");
    }
    if (cfg.command == Command::Sweep) {
      cfg.deltas.clear();
      for (const auto& d : split_list(deltas)) cfg.deltas.push_back(positive_real("--deltas", d));
      if (cfg.deltas.empty()) throw UsageError("--deltas: the list is empty");
      if (cfg.steps == 0) throw UsageError("--steps: must be >= 1");
      if (!std::isfinite(cfg.a) || !std::isfinite(cfg.b)) throw UsageError("--a/--b: must be finite");
    }
    if (cfg.command == Command::Bench) {
      cfg.methods.assign(kAllMethods.begin(), kAllMethods.end());
      cfg.lengths.clear();
      for (const auto& t : split_list(lengths)) cfg.lengths.push_back(positive_int("--T", t));
      if (cfg.lengths.empty()) throw UsageError("--T: the list is empty");
      if (cfg.reps < 5) throw UsageError("--reps: at least 5 repetitions are required");
      if (cfg.state_dim == 0 || cfg.channels == 0) throw UsageError("--N/--D: must be >= 1");
    }
    if (cfg.command == Command::Image2d) cfg.state_dim = image_state_dim;
    if (cfg.command == Command::Image2d && (cfg.state_dim == 0 || cfg.embed_channels == 0)) {
      throw UsageError("--N/--channels: must be >= 1");
    }
    if ((cfg.command == Command::Bench || cfg.command == Command::Image2d) && cfg.chunk == 0) {
      throw UsageError("--chunk: must be >= 1");
    }
    if (!methods.empty()) {
      cfg.methods.clear();
      for (const auto& m : split_list(methods)) cfg.methods.push_back(method_flag("--methods", m));
      if (cfg.methods.empty()) throw UsageError("--methods: the list is empty");
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  print_config(err, cfg);
  try {
    switch (cfg.command) {
      case Command::Discretize: return cmd_discretize(cfg, out, err);
      case Command::Verify: return cmd_verify(cfg, out, err);
      case Command::Sweep: return cmd_sweep(cfg, out, err);
      case Command::Bench: return cmd_bench(cfg, out, err);
      case Command::Image2d: return cmd_image2d(cfg, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitFailed;
}

}  // namespace fssm::cli
