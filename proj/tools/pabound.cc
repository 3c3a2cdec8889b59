// Copyright 2026 The pabound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// pabound: key-length bounds for privacy amplification.
//
//   pabound bound     --q 0.11 --n 10000 --eps 1e-10
//   pabound sweep-n   --q 0.11 --eps 1e-10 --n-from 100 --n-to 1e6 --n-count 100
//   pabound sweep-eps --q 0.11 --n 1000 --eps-from 1e-15 --eps-to 0.1 --eps-count 50
//   pabound verify    --seed 42 --level quick

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pabound/cli.h"

namespace {

using pabound::cli::SweepSpec;

struct Flags {
  std::string config;
  std::optional<double> q;
  std::optional<double> eps;
  std::optional<double> eps_from, eps_to;
  std::optional<int> eps_count;
  std::optional<int> n;
  std::optional<double> n_from, n_to;
  std::optional<int> n_count;
  std::optional<double> eta_frac, zeta_frac;
  std::optional<std::string> units;
  bool clamp = false;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> level;
};

void AddFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON file with SweepSpec fields");
  cmd->add_option("--q", f.q, "BSC crossover probability");
  cmd->add_option("--eps", f.eps, "security parameter");
  cmd->add_option("--eps-from", f.eps_from);
  cmd->add_option("--eps-to", f.eps_to);
  cmd->add_option("--eps-count", f.eps_count, "log-spaced eps grid size");
  cmd->add_option("--n", f.n, "block length");
  cmd->add_option("--n-from", f.n_from);
  cmd->add_option("--n-to", f.n_to);
  cmd->add_option("--n-count", f.n_count, "log-spaced n grid size");
  cmd->add_option("--eta-frac", f.eta_frac, "eta as a fraction of eps");
  cmd->add_option("--zeta-frac", f.zeta_frac, "zeta as a fraction of eps");
  cmd->add_option("--units", f.units, "bits (default) or nats");
  cmd->add_flag("--clamp", f.clamp, "report negative lengths as 0");
  cmd->add_option("--out", f.out, "output path (default stdout)");
  cmd->add_option("--seed", f.seed, "verification seed");
  cmd->add_option("--level", f.level, "verification level: quick or full");
}

using pabound::cli::UsageError;

template <typename T>
T Required(const std::optional<T>& v, const char* name) {
  if (!v) throw UsageError(std::string("missing ") + name);
  return *v;
}

SweepSpec BuildSpec(const Flags& f, pabound::cli::Mode mode) {
  SweepSpec spec;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw UsageError("cannot open config " + f.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("bad config: ") + e.what());
    }
    spec = pabound::cli::SpecFromJson(j);
  }
  spec.mode = mode;
  if (f.q) spec.q = *f.q;
  if (f.eps_from || f.eps_to || f.eps_count) {
    if (f.eps) throw UsageError("--eps conflicts with an eps grid");
    spec.eps = pabound::cli::LogGrid(Required(f.eps_from, "--eps-from"),
                                     Required(f.eps_to, "--eps-to"),
                                     Required(f.eps_count, "--eps-count"));
  } else if (f.eps) {
    spec.eps = {*f.eps};
  }
  if (f.n_from || f.n_to || f.n_count) {
    if (f.n) throw UsageError("--n conflicts with an n grid");
    const double from = Required(f.n_from, "--n-from");
    const double to = Required(f.n_to, "--n-to");
    if (from < 1 || to < 1 || from > 1e9 || to > 1e9) {
      throw UsageError("n grid endpoints must lie in [1, 1e9]");
    }
    spec.n = pabound::cli::LogIntGrid(static_cast<int>(from),
                                      static_cast<int>(to),
                                      Required(f.n_count, "--n-count"));
  } else if (f.n) {
    spec.n = {*f.n};
  }
  if (f.eta_frac) spec.eta_frac = *f.eta_frac;
  if (f.zeta_frac) spec.zeta_frac = *f.zeta_frac;
  if (f.units) spec.units = pabound::cli::ParseUnits(*f.units);
  if (f.clamp) spec.clamp = true;
  if (f.out) spec.output = *f.out;
  if (f.seed) spec.seed = *f.seed;
  if (f.level) spec.level = pabound::cli::ParseLevel(*f.level);
  if (mode == pabound::cli::Mode::kSweepN && spec.eps.size() != 1) {
    throw UsageError("sweep-n takes a single eps");
  }
  if (mode == pabound::cli::Mode::kSweepEps && spec.n.size() != 1) {
    throw UsageError("sweep-eps takes a single n");
  }
  spec.Validate();
  return spec;
}

int Run(const SweepSpec& spec) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!spec.output.empty() && spec.output != "-") {
    file.open(spec.output);
    if (!file) throw UsageError("cannot write " + spec.output);
    out = &file;
  }
  switch (spec.mode) {
    case pabound::cli::Mode::kBound:
      pabound::cli::RunBound(spec, *out);
      return pabound::cli::kExitOk;
    case pabound::cli::Mode::kSweepN:
      pabound::cli::RunSweepN(spec, *out);
      return pabound::cli::kExitOk;
    case pabound::cli::Mode::kSweepEps:
      pabound::cli::RunSweepEps(spec, *out);
      return pabound::cli::kExitOk;
    case pabound::cli::Mode::kVerify: {
      pabound::cli::VerifyConfig config;
      config.seed = spec.seed;
      config.level = spec.level;
      return pabound::cli::RunVerify(config, *out);
    }
  }
  return pabound::cli::kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-blocklength key-length bounds for privacy amplification"};
  app.require_subcommand(1);
  Flags flags;
  struct Sub {
    const char* name;
    const char* help;
    pabound::cli::Mode mode;
  };
  const Sub subs[] = {
      {"bound", "evaluate all bounds at one (n, eps)", pabound::cli::Mode::kBound},
      {"sweep-n", "CSV sweep over a log-spaced n grid", pabound::cli::Mode::kSweepN},
      {"sweep-eps", "CSV sweep over a log-spaced eps grid",
       pabound::cli::Mode::kSweepEps},
      {"verify", "run the inequality checks and print a JSON report",
       pabound::cli::Mode::kVerify},
  };
  std::vector<std::pair<CLI::App*, pabound::cli::Mode>> commands;
  for (const Sub& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    AddFlags(cmd, flags);
    commands.emplace_back(cmd, s.mode);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return pabound::cli::kExitUsage;
  }

  try {
    for (const auto& [cmd, mode] : commands) {
      if (cmd->parsed()) return Run(BuildSpec(flags, mode));
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return pabound::cli::kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return pabound::cli::kExitUsage;
  }
  return pabound::cli::kExitUsage;
}
