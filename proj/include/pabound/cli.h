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

// Sweep and verification drivers behind the pabound tool. Sweeps write CSV
// with a fixed header; verification writes a JSON report.

#ifndef PABOUND_CLI_H_
#define PABOUND_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pabound/hash_oracle.h"

namespace pabound::cli {

inline constexpr char kCsvHeader[] =
    "n,eps,q,eta,zeta,ell_s_low,ell_e_low,ell_h_low,ell_s_up,gauss,"
    "theta_star_e,theta_star_h";

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

// Bad grids, unknown enum strings, malformed config.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Mode { kBound, kSweepN, kSweepEps, kVerify };
enum class Units { kBits, kNats };
enum class Level { kQuick, kFull };

Mode ParseMode(const std::string& s);
Units ParseUnits(const std::string& s);
Level ParseLevel(const std::string& s);

struct SweepSpec {
  Mode mode = Mode::kBound;
  double q = 0.11;
  std::vector<double> eps = {1e-10};
  std::vector<int> n = {1000};
  // eta = eta_frac * eps, zeta = zeta_frac * eps.
  double eta_frac = 0.5;
  double zeta_frac = 0.5;
  Units units = Units::kBits;
  // Negative lengths are reported as 0.
  bool clamp = false;
  // Empty or "-" means standard output.
  std::string output;
  std::uint64_t seed = 42;
  Level level = Level::kQuick;

  // Throws UsageError on empty grids or out-of-range values.
  void Validate() const;
};

// count points from..to, evenly spaced in log. count == 1 gives {from}.
std::vector<double> LogGrid(double from, double to, int count);
// Rounded LogGrid with repeated integers dropped.
std::vector<int> LogIntGrid(int from, int to, int count);

// Keys mirror the SweepSpec fields; eps and n take a number, a list, or
// {"from", "to", "count"}. Unknown keys are a usage error.
SweepSpec SpecFromJson(const nlohmann::json& j,
                       SweepSpec base = SweepSpec{});

struct SweepRow {
  int n = 0;
  double eps = 0.0;
  double eta = 0.0;
  double zeta = 0.0;
  // Empty when the whole point was skipped.
  std::optional<std::string> skip_reason;
  // nats; nullopt marks a skipped computation.
  std::optional<double> ell_s_low, ell_e_low, ell_h_low, ell_s_up, gauss;
  std::optional<double> theta_star_e, theta_star_h;
};

SweepRow EvaluatePoint(double q, int n, double eps, double eta_frac,
                       double zeta_frac);

// Header plus one line per row (a '#' comment for skipped points).
void WriteCsv(const SweepSpec& spec, const std::vector<SweepRow>& rows,
              std::ostream& out);

// One row per n at eps.front(), in grid order.
void RunSweepN(const SweepSpec& spec, std::ostream& out);
// One row per eps at n.front(), in grid order.
void RunSweepEps(const SweepSpec& spec, std::ostream& out);
// Single row at (n.front(), eps.front()).
void RunBound(const SweepSpec& spec, std::ostream& out);

struct VerifyConfig {
  std::uint64_t seed = 42;
  Level level = Level::kQuick;
  VerifyOptions options;
};

// Runs the hash-family, smoothing-lemma and binomial cross-checks. Writes
// the JSON report and returns kExitOk or kExitVerificationFailed.
int RunVerify(const VerifyConfig& config, std::ostream& out);

// Report object without printing; "pass" is the conjunction of all reports.
nlohmann::json VerifyReport(const VerifyConfig& config);

}  // namespace pabound::cli

#endif  // PABOUND_CLI_H_
