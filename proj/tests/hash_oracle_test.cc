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

#include "pabound/hash_oracle.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "pabound/entropy.h"
#include "pabound/errors.h"

namespace pabound {
namespace {

// Matrix-vector product over GF(2) with T[i][j] = seed bit (i - j + m - 1),
// written out cell by cell.
std::uint32_t ToeplitzByHand(int m, int k, std::uint64_t seed,
                             std::uint32_t x) {
  std::uint32_t out = 0;
  for (int i = 0; i < k; ++i) {
    int bit = 0;
    for (int j = 0; j < m; ++j) {
      const int diag = i - j + m - 1;
      bit ^= static_cast<int>((seed >> diag) & 1) & static_cast<int>((x >> j) & 1);
    }
    out |= static_cast<std::uint32_t>(bit) << i;
  }
  return out;
}

// Mean of d(f | P) over every member, with the distance written out
// directly.
double BruteForceMean(int m, int k, const JointTable& p) {
  const std::size_t s_size = std::size_t{1} << k;
  const std::uint64_t seeds = std::uint64_t{1} << (k == 0 ? m - 1 : m + k - 1);
  const std::vector<double> pz = p.z_weights();
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    std::vector<double> psz(s_size * p.z_size(), 0.0);
    for (std::uint32_t x = 0; x < p.x_size(); ++x) {
      const std::uint32_t s = ToeplitzByHand(m, k, seed, x);
      for (std::size_t z = 0; z < p.z_size(); ++z) {
        psz[s * p.z_size() + z] += p.weight(x, z);
      }
    }
    double d = 0.0;
    for (std::size_t s = 0; s < s_size; ++s) {
      for (std::size_t z = 0; z < p.z_size(); ++z) {
        d += std::abs(psz[s * p.z_size() + z] -
                      pz[z] / static_cast<double>(s_size));
      }
    }
    total += 0.5 * d;
  }
  return total / static_cast<double>(seeds);
}

JointTable BscBlock(double q, int n) {
  return IidSource(BscSource(q, 1).LetterTable(), n).Materialize();
}

TEST(ToeplitzTest, SizesAndRanges) {
  EXPECT_EQ(ToeplitzFamily(4, 3).size(), std::uint64_t{1} << 6);
  EXPECT_EQ(ToeplitzFamily(8, 8).size(), std::uint64_t{1} << 15);
  EXPECT_EQ(ToeplitzFamily(3, 0).size(), std::uint64_t{1} << 2);
  EXPECT_EQ(ToeplitzFamily(5, 2).x_size(), 32u);
  EXPECT_EQ(ToeplitzFamily(5, 2).s_size(), 4u);
  EXPECT_THROW(ToeplitzFamily(0, 1), ParameterError);
  EXPECT_THROW(ToeplitzFamily(17, 1), ParameterError);
  EXPECT_THROW(ToeplitzFamily(4, 17), ParameterError);
}

TEST(ToeplitzTest, ApplyMatchesHandProduct) {
  for (int m = 1; m <= 5; ++m) {
    for (int k = 0; k <= 4; ++k) {
      const ToeplitzFamily fam(m, k);
      for (std::uint64_t seed = 0; seed < fam.size(); ++seed) {
        const KeyMap f = fam.Member(seed);
        EXPECT_EQ(f.s_size, fam.s_size());
        for (std::uint32_t x = 0; x < fam.x_size(); ++x) {
          EXPECT_EQ(fam.Apply(seed, x), ToeplitzByHand(m, k, seed, x));
          EXPECT_EQ(f.image[x], ToeplitzByHand(m, k, seed, x));
        }
      }
    }
  }
}

TEST(ToeplitzTest, UniversalTwoExhaustive) {
  // Pr_seed[f(x) = f(x')] = 1/|S| exactly for x != x'. Every pair up to
  // m = 6; for m = 7, 8 every pair with x = 0 (linearity, checked above,
  // makes that the whole question) plus a fixed nonzero x.
  for (int m = 1; m <= 8; ++m) {
    for (int k = 1; k <= std::min(m, 4); ++k) {
      const ToeplitzFamily fam(m, k);
      const std::uint32_t x_end = m <= 6 ? fam.x_size() : 1;
      for (std::uint32_t x0 = 0; x0 < x_end + (m > 6); ++x0) {
        const std::uint32_t x =
            x0 < x_end ? x0 : static_cast<std::uint32_t>(0x55 & (fam.x_size() - 1));
        for (std::uint32_t y = 0; y < fam.x_size(); ++y) {
          if (y == x) continue;
          std::uint64_t hits = 0;
          for (std::uint64_t seed = 0; seed < fam.size(); ++seed) {
            hits += fam.Apply(seed, x) == fam.Apply(seed, y);
          }
          ASSERT_EQ(hits * fam.s_size(), fam.size())
              << "m=" << m << " k=" << k << " x=" << x << " y=" << y;
        }
      }
    }
  }
}

TEST(EnumerateTest, MatchesBruteForce) {
  InstanceGenerator gen(5);
  for (int m = 1; m <= 4; ++m) {
    for (int k = 0; k <= 3; ++k) {
      const JointTable p = gen.Table(std::size_t{1} << m, 3, 0.2);
      const FamilyDistance d = EnumerateSecurityDistance(ToeplitzFamily(m, k), p);
      EXPECT_FALSE(d.sampled);
      EXPECT_EQ(d.std_error, 0.0);
      EXPECT_EQ(d.members_evaluated, d.family_size);
      EXPECT_NEAR(d.mean, BruteForceMean(m, k, p), 1e-14);
    }
  }
}

TEST(EnumerateTest, SingleOutputHasZeroDistance) {
  InstanceGenerator gen(6);
  const JointTable p = gen.Table(8, 4);
  EXPECT_NEAR(ExpectedSecurityDistance(ToeplitzFamily(3, 0), p), 0.0, 1e-16);
}

TEST(EnumerateTest, OneBitExamples) {
  const ToeplitzFamily fam(1, 1);
  // Uniform X, no side information: the zero seed gives distance 1/2, the
  // other gives 0.
  const JointTable uniform(2, 1, {0.5, 0.5});
  EXPECT_NEAR(ExpectedSecurityDistance(fam, uniform), 0.25, 1e-16);
  const double rhs =
      0.5 * std::sqrt(2.0 * std::exp(-H2(uniform, MarginalTable::Uniform(1)).value));
  EXPECT_NEAR(rhs, 0.5, 1e-15);
  // Deterministic X: every member leaves distance 1/2.
  const JointTable point(2, 1, {1.0, 0.0});
  EXPECT_NEAR(ExpectedSecurityDistance(fam, point), 0.5, 1e-16);
  const VerificationReport r =
      VerifyLeftover(fam, point, {MarginalTable::Uniform(1)});
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.min_slack, std::sqrt(0.5) - 0.5, 1e-12);
}

TEST(EnumerateTest, MinAndArgmin) {
  InstanceGenerator gen(7);
  const JointTable p = gen.Table(16, 2);
  const ToeplitzFamily fam(4, 2);
  const FamilyDistance d = EnumerateSecurityDistance(fam, p);
  EXPECT_LE(d.min, d.mean);
  EXPECT_NEAR(SubnormalizedSecurityDistance(fam.Member(d.argmin_seed), p),
              d.min, 1e-15);
  for (std::uint64_t seed = 0; seed < fam.size(); ++seed) {
    EXPECT_GE(SubnormalizedSecurityDistance(fam.Member(seed), p), d.min);
  }
}

TEST(EnumerateTest, RejectsMismatchAndCap) {
  const ToeplitzFamily fam(3, 2);
  EXPECT_THROW(EnumerateSecurityDistance(fam, JointTable(4, 2, {0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.2, 0.2})),
               AlphabetMismatchError);
  const JointTable p = BscBlock(0.11, 3);
  EXPECT_THROW(ExpectedSecurityDistance(fam, p, 10), SizeError);
}

TEST(EnumerateTest, SampledAboveCap) {
  InstanceGenerator gen(8);
  const JointTable p = gen.Table(256, 4);
  const ToeplitzFamily fam(8, 3);
  const FamilyDistance exact = EnumerateSecurityDistance(fam, p);
  const FamilyDistance sampled =
      EnumerateSecurityDistance(fam, p, exact.family_size * p.size() / 8);
  EXPECT_TRUE(sampled.sampled);
  EXPECT_LT(sampled.members_evaluated, sampled.family_size);
  EXPECT_GT(sampled.std_error, 0.0);
  EXPECT_NEAR(sampled.mean, exact.mean, 5 * sampled.std_error);
}

TEST(EnumerateTest, XorTranslationInvariant) {
  // Toeplitz maps are linear, so x -> x ^ a shifts every output by a
  // constant and leaves each member's distance unchanged. (Arbitrary
  // relabelings of X are not covered by this.)
  InstanceGenerator gen(9);
  const JointTable p = gen.Table(16, 3);
  const ToeplitzFamily fam(4, 2);
  const FamilyDistance base = EnumerateSecurityDistance(fam, p);
  for (std::uint32_t a : {1u, 6u, 15u}) {
    std::vector<double> w(p.size());
    for (std::uint32_t x = 0; x < 16; ++x) {
      for (std::size_t z = 0; z < 3; ++z) {
        w[p.index(x, z)] = p.weight(x ^ a, z);
      }
    }
    const JointTable shifted(16, 3, w);
    EXPECT_NEAR(EnumerateSecurityDistance(fam, shifted).mean, base.mean, 1e-15);
  }
}

TEST(LeftoverTest, BscBlocks) {
  for (double q : {0.11, 0.25}) {
    for (int n = 1; n <= 4; ++n) {
      const JointTable p = BscBlock(q, n);
      for (int k = 0; k <= n; ++k) {
        const VerificationReport r =
            VerifyLeftover(ToeplitzFamily(n, k), p, LeftoverProbeSet(p, 1));
        EXPECT_TRUE(r.pass) << "q=" << q << " n=" << n << " k=" << k;
        EXPECT_GE(r.min_slack, 0.0);
        EXPECT_FALSE(r.sampled);
      }
    }
  }
}

TEST(LeftoverTest, RandomAndClippedTables) {
  InstanceGenerator gen(11);
  for (int i = 0; i < 40; ++i) {
    const int m = 1 + static_cast<int>(gen.UniformIndex(4));
    const int k = static_cast<int>(gen.UniformIndex(4));
    const JointTable p = gen.Table(std::size_t{1} << m, 2 + gen.UniformIndex(3),
                                   i % 2 ? 0.3 : 0.0);
    const ToeplitzFamily fam(m, k);
    EXPECT_TRUE(VerifyLeftover(fam, p, LeftoverProbeSet(p, i)).pass) << i;
    // A clipped, sub-normalized version keeps the bound.
    const MarginalTable pz = MarginalTable::ZMarginal(p);
    const SpectrumTable spectrum = Spectrum(p, pz);
    const double level = spectrum.atoms()[spectrum.atoms().size() / 2].r;
    const JointTable clipped = ClipBelow(p, pz, level);
    if (clipped.total_mass() > 0.0) {
      EXPECT_TRUE(VerifyLeftover(fam, clipped, {pz, gen.Reference(p.z_size())})
                      .pass)
          << i;
    }
  }
}

TEST(LeftoverTest, TamperedCollisionEntropyFails) {
  const JointTable p = BscBlock(0.11, 4);
  VerifyOptions options;
  options.h2_scale = 10.0;
  const VerificationReport r =
      VerifyLeftover(ToeplitzFamily(4, 2), p, LeftoverProbeSet(p, 1), options);
  EXPECT_FALSE(r.pass);
  EXPECT_LT(r.min_slack, 0.0);
  EXPECT_EQ(r.worst_instance["m"], 4);
  EXPECT_EQ(r.worst_instance["k"], 2);
}

TEST(ExponentialCheckTest, BscAndRandom) {
  const std::vector<double> rhos = {0.1, 0.25, 0.5};
  for (int n = 1; n <= 4; ++n) {
    const JointTable p = BscBlock(0.11, n);
    for (int k = 0; k <= n; ++k) {
      EXPECT_TRUE(VerifyExponential(ToeplitzFamily(n, k), p, rhos).pass);
    }
  }
  InstanceGenerator gen(13);
  for (int i = 0; i < 30; ++i) {
    const int m = 1 + static_cast<int>(gen.UniformIndex(4));
    const JointTable p = gen.Table(std::size_t{1} << m, 3, 0.2);
    const VerificationReport r =
        VerifyExponential(ToeplitzFamily(m, 1 + gen.UniformIndex(3)), p, rhos);
    EXPECT_TRUE(r.pass) << i;
    EXPECT_EQ(r.instances, 3);
  }
}

TEST(ExponentialCheckTest, BoundValueByHand) {
  // One bit, uniform, trivial Z, rho = 1/2: 1.5 * 2^0.5 * e^{Phi(1/2)},
  // Phi(1/2) = 0.5 * log(2 * 0.5^2) = -0.5 log 2, so the bound is 1.5.
  const JointTable p(2, 1, {0.5, 0.5});
  EXPECT_NEAR(Phi(0.5, p).value, -0.5 * std::log(2.0), 1e-15);
  const VerificationReport r = VerifyExponential(ToeplitzFamily(1, 1), p, {0.5});
  EXPECT_NEAR(r.min_slack, 1.5 - 0.25, 1e-12);
}

TEST(ReportTest, JsonFields) {
  const JointTable p = BscBlock(0.25, 2);
  const VerificationReport r =
      VerifyLeftover(ToeplitzFamily(2, 1), p, LeftoverProbeSet(p, 3));
  const nlohmann::json j = ToJson(r);
  EXPECT_EQ(j["lemma"], "leftover_hash");
  EXPECT_EQ(j["instances"], 3);
  EXPECT_EQ(j["pass"], true);
  EXPECT_EQ(j["sampled"], false);
  EXPECT_NEAR(j["min_slack"].get<double>(), r.min_slack, 0.0);
  EXPECT_TRUE(j["worst_instance"].contains("table"));
  EXPECT_TRUE(j["worst_instance"].contains("bound"));
  VerificationReport empty;
  empty.lemma = "x";
  EXPECT_TRUE(ToJson(empty)["min_slack"].is_null());
}

TEST(AppendixTest, DefaultConfigPasses) {
  const std::vector<VerificationReport> reports = VerifyAppendixLemmas({});
  ASSERT_EQ(reports.size(), 3u);
  EXPECT_EQ(reports[0].lemma, "monotonicity");
  EXPECT_EQ(reports[1].lemma, "spectral_direct");
  EXPECT_EQ(reports[2].lemma, "spectral_converse");
  for (const VerificationReport& r : reports) {
    EXPECT_TRUE(r.pass) << r.lemma << " " << ToJson(r).dump();
    EXPECT_GE(r.instances, 200);
  }
}

TEST(AppendixTest, TinyEpsAndSmallZeta) {
  AppendixConfig config;
  config.alphabet_cap = 12;
  EXPECT_THROW(VerifyAppendixLemmas(config), ParameterError);
  config.instance_count = 60;
  config.alphabet_cap = 8;
  config.eps_grid = {1e-9, 0.05};
  config.zeta_grid = {1e-6, 0.2};
  config.seed = 7;
  for (const VerificationReport& r : VerifyAppendixLemmas(config)) {
    EXPECT_TRUE(r.pass) << r.lemma << " " << ToJson(r).dump();
  }
}

}  // namespace
}  // namespace pabound
