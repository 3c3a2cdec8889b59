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

// Exhaustive small-scale ground truth for privacy amplification. A binary
// Toeplitz family is enumerated member by member to get the exact expected
// security distance, which is then checked against the leftover hash bound,
// the exponential (phi) bound, and the smooth-entropy lemmas on random
// instances.

#ifndef PABOUND_HASH_ORACLE_H_
#define PABOUND_HASH_ORACLE_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "pabound/prob_core.h"

namespace pabound {

// Elementary accumulations allowed per enumeration before sampling.
inline constexpr std::uint64_t kDefaultWorkCap = std::uint64_t{1} << 26;

// All k x m binary Toeplitz matrices, indexed by (m+k-1)-bit seeds. Entry
// (i, j) is seed bit i - j + m - 1; member f_seed(x) = T x over GF(2),
// with x an m-bit integer.
class ToeplitzFamily {
 public:
  // 1 <= m <= 16, 0 <= k <= 16. k = 0 is the single-output family.
  ToeplitzFamily(int m, int k);

  int m() const { return m_; }
  int k() const { return k_; }
  std::size_t x_size() const { return std::size_t{1} << m_; }
  std::size_t s_size() const { return std::size_t{1} << k_; }
  std::uint64_t size() const;

  std::uint32_t Apply(std::uint64_t seed, std::uint32_t x) const;
  KeyMap Member(std::uint64_t seed) const;

 private:
  int m_;
  int k_;
};

struct FamilyDistance {
  double mean = 0.0;
  double min = 0.0;
  std::uint64_t argmin_seed = 0;
  std::uint64_t members_evaluated = 0;
  std::uint64_t family_size = 0;
  bool sampled = false;
  // Standard error of the mean; zero for a full enumeration.
  double std_error = 0.0;
};

// Distance statistics over the family. Above work_cap (family size x |X| x
// |Z|) members are taken at a deterministic stride and the result is marked
// sampled. Sub-normalized tables use SubnormalizedSecurityDistance.
FamilyDistance EnumerateSecurityDistance(const ToeplitzFamily& family,
                                         const JointTable& p,
                                         std::uint64_t work_cap =
                                             kDefaultWorkCap);

// Exact E_F[d(F | P)] by full enumeration. Throws SizeError above work_cap.
double ExpectedSecurityDistance(const ToeplitzFamily& family,
                                const JointTable& p,
                                std::uint64_t work_cap = kDefaultWorkCap);

struct VerificationReport {
  std::string lemma;
  int instances = 0;
  // Smallest (bound - observed) over all checks; negative means violated.
  double min_slack = kInf;
  nlohmann::json worst_instance;
  bool pass = true;
  bool sampled = false;
};

nlohmann::json ToJson(const VerificationReport& report);

struct VerifyOptions {
  // Slack below -tolerance is a violation.
  double tolerance = 1e-12;
  std::uint64_t work_cap = kDefaultWorkCap;
  // Multiplies H_2 inside the leftover check. Anything but 1 corrupts the
  // bound; used only to confirm the checker can fail.
  double h2_scale = 1.0;
};

// Deterministic instance generation; weights are normalized exponentials
// of uniform draws from a mt19937_64 stream.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  double Uniform01();
  std::size_t UniformIndex(std::size_t n);
  // Normalized table; with zero_fraction > 0 some cells are zeroed (at
  // least one stays positive).
  JointTable Table(std::size_t x_size, std::size_t z_size,
                   double zero_fraction = 0.0);
  // Random marginal mixed with 1% uniform mass, so it has full support.
  MarginalTable Reference(std::size_t z_size);
  KeyMap Map(std::size_t x_size, std::size_t s_size);

 private:
  std::mt19937_64 rng_;
};

// {P_Z (renormalized when p is sub-normalized), uniform, random}.
std::vector<MarginalTable> LeftoverProbeSet(const JointTable& p,
                                            std::uint64_t seed);

// E_F[d(F|P)] <= (1/2) sqrt(|S| exp(-H_2(P|R))) for every probe R.
// Sampled enumerations compare mean - 3 SE and report slack without failing.
VerificationReport VerifyLeftover(const ToeplitzFamily& family,
                                  const JointTable& p,
                                  const std::vector<MarginalTable>& probes,
                                  const VerifyOptions& options = {});

// E_F[d(F|P)] <= (3/2) |S|^rho exp(phi(rho|P)) for every rho in the grid.
VerificationReport VerifyExponential(const ToeplitzFamily& family,
                                     const JointTable& p,
                                     const std::vector<double>& rho_grid,
                                     const VerifyOptions& options = {});

struct AppendixConfig {
  int instance_count = 200;
  std::size_t alphabet_cap = 8;  // |X|, |Z| drawn from [2, cap]
  std::vector<double> eps_grid = {0.01, 0.1, 0.3};
  std::vector<double> zeta_grid = {0.05, 0.1};
  std::uint64_t seed = 42;
  double tolerance = 1e-9;
};

// Random-instance checks of the smoothing lemmas, one report each:
//   monotonicity   H_min^eps(P_SZ|R) <= H_min^eps(P_XZ|R)
//   spectral_direct   Hbar_min^{eps/2}(P|R) >= H_s^eps(P|R)
//   spectral_converse H_min^eps(P|P_Z) <= H_s^{eps+zeta}(P|P_Z) - log zeta
std::vector<VerificationReport> VerifyAppendixLemmas(
    const AppendixConfig& config);

}  // namespace pabound

#endif  // PABOUND_HASH_ORACLE_H_
