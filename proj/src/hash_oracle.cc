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

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <limits>
#include <string>
#include <thread>
#include <utility>

#include "pabound/entropy.h"
#include "pabound/errors.h"

namespace pabound {
namespace {

struct ChunkStats {
  double sum = 0.0;
  double sum_sq = 0.0;
  double min = std::numeric_limits<double>::infinity();
  std::uint64_t argmin = 0;
  std::uint64_t count = 0;
};

double Distance(const ToeplitzFamily& family, std::uint64_t seed,
                const JointTable& p, const std::vector<double>& pz) {
  const std::size_t zs = p.z_size();
  std::vector<double> psz(family.s_size() * zs, 0.0);
  for (std::uint32_t x = 0; x < p.x_size(); ++x) {
    const std::size_t s = family.Apply(seed, x);
    for (std::size_t z = 0; z < zs; ++z) psz[s * zs + z] += p.weight(x, z);
  }
  const double inv_s = 1.0 / static_cast<double>(family.s_size());
  double sum = 0.0;
  for (std::size_t s = 0; s < family.s_size(); ++s) {
    for (std::size_t z = 0; z < zs; ++z) {
      sum += std::abs(psz[s * zs + z] - inv_s * pz[z]);
    }
  }
  return 0.5 * sum;
}

void Track(VerificationReport& report, double slack, double tolerance,
           const nlohmann::json& instance) {
  ++report.instances;
  if (std::isnan(slack)) slack = -kInf;
  if (slack < report.min_slack) {
    report.min_slack = slack;
    report.worst_instance = instance;
  }
  if (slack < -tolerance) report.pass = false;
}

// a - b with inf - inf treated as a tie.
double Gap(double a, double b) {
  if (a == b) return 0.0;
  return a - b;
}

nlohmann::json MarginalJson(const MarginalTable& r) {
  return std::vector<double>(r.probs().begin(), r.probs().end());
}

}  // namespace

ToeplitzFamily::ToeplitzFamily(int m, int k) : m_(m), k_(k) {
  if (m < 1 || m > 16) throw ParameterError("Toeplitz input bits must be 1..16");
  if (k < 0 || k > 16) throw ParameterError("Toeplitz output bits must be 0..16");
}

std::uint64_t ToeplitzFamily::size() const {
  return std::uint64_t{1} << (k_ == 0 ? m_ - 1 : m_ + k_ - 1);
}

std::uint32_t ToeplitzFamily::Apply(std::uint64_t seed, std::uint32_t x) const {
  std::uint32_t out = 0;
  for (int i = 0; i < k_; ++i) {
    std::uint32_t row = 0;
    for (int j = 0; j < m_; ++j) {
      if ((seed >> (i - j + m_ - 1)) & 1u) row |= 1u << j;
    }
    out |= static_cast<std::uint32_t>(std::popcount(row & x) & 1) << i;
  }
  return out;
}

KeyMap ToeplitzFamily::Member(std::uint64_t seed) const {
  KeyMap f;
  f.s_size = s_size();
  f.image.resize(x_size());
  for (std::uint32_t x = 0; x < x_size(); ++x) f.image[x] = Apply(seed, x);
  return f;
}

FamilyDistance EnumerateSecurityDistance(const ToeplitzFamily& family,
                                         const JointTable& p,
                                         std::uint64_t work_cap) {
  if (p.x_size() != family.x_size()) {
    throw AlphabetMismatchError("table |X| must equal 2^m of the family");
  }
  const std::uint64_t per_member = p.x_size() * p.z_size();
  const std::uint64_t size = family.size();
  const std::uint64_t budget = std::max<std::uint64_t>(1, work_cap / per_member);
  const std::uint64_t stride = size <= budget ? 1 : (size + budget - 1) / budget;
  const std::uint64_t members = (size + stride - 1) / stride;
  const std::vector<double> pz = p.z_weights();

  // Fixed chunking; partial results are combined in chunk order so the
  // floating-point result does not depend on the thread count.
  const std::uint64_t chunks = std::min<std::uint64_t>(members, 16);
  std::vector<std::future<ChunkStats>> jobs;
  const bool parallel = std::thread::hardware_concurrency() > 1;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    const std::uint64_t begin = members * c / chunks;
    const std::uint64_t end = members * (c + 1) / chunks;
    auto work = [&, begin, end] {
      ChunkStats st;
      for (std::uint64_t i = begin; i < end; ++i) {
        const std::uint64_t seed = i * stride;
        const double d = Distance(family, seed, p, pz);
        st.sum += d;
        st.sum_sq += d * d;
        if (d < st.min) {
          st.min = d;
          st.argmin = seed;
        }
        ++st.count;
      }
      return st;
    };
    jobs.push_back(std::async(
        parallel ? std::launch::async : std::launch::deferred, work));
  }
  ChunkStats total;
  for (auto& job : jobs) {
    const ChunkStats st = job.get();
    total.sum += st.sum;
    total.sum_sq += st.sum_sq;
    total.count += st.count;
    if (st.min < total.min) {
      total.min = st.min;
      total.argmin = st.argmin;
    }
  }

  FamilyDistance out;
  out.family_size = size;
  out.members_evaluated = total.count;
  out.mean = total.sum / static_cast<double>(total.count);
  out.min = total.min;
  out.argmin_seed = total.argmin;
  out.sampled = stride > 1;
  if (out.sampled && total.count > 1) {
    const double var =
        std::max(0.0, (total.sum_sq - total.count * out.mean * out.mean) /
                          static_cast<double>(total.count - 1));
    out.std_error = std::sqrt(var / static_cast<double>(total.count));
  }
  return out;
}

double ExpectedSecurityDistance(const ToeplitzFamily& family,
                                const JointTable& p, std::uint64_t work_cap) {
  const double work = static_cast<double>(family.size()) *
                      static_cast<double>(p.x_size() * p.z_size());
  if (work > static_cast<double>(work_cap)) {
    throw SizeError("exact enumeration needs " + std::to_string(work) +
                    " accumulations, cap is " + std::to_string(work_cap));
  }
  return EnumerateSecurityDistance(family, p, work_cap).mean;
}

nlohmann::json ToJson(const VerificationReport& report) {
  return nlohmann::json{
      {"lemma", report.lemma},
      {"instances", report.instances},
      {"min_slack", std::isfinite(report.min_slack)
                        ? nlohmann::json(report.min_slack)
                        : nlohmann::json(nullptr)},
      {"worst_instance", report.worst_instance},
      {"pass", report.pass},
      {"sampled", report.sampled}};
}

double InstanceGenerator::Uniform01() {
  // 53 random mantissa bits.
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

std::size_t InstanceGenerator::UniformIndex(std::size_t n) {
  return static_cast<std::size_t>(Uniform01() * static_cast<double>(n));
}

JointTable InstanceGenerator::Table(std::size_t x_size, std::size_t z_size,
                                    double zero_fraction) {
  std::vector<double> w(x_size * z_size);
  for (double& v : w) v = -std::log1p(-Uniform01());
  if (zero_fraction > 0.0) {
    const std::size_t keep = UniformIndex(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i != keep && Uniform01() < zero_fraction) w[i] = 0.0;
    }
    if (w[keep] == 0.0) w[keep] = 1.0;
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return JointTable(x_size, z_size, std::move(w));
}

MarginalTable InstanceGenerator::Reference(std::size_t z_size) {
  std::vector<double> w(z_size);
  double total = 0.0;
  for (double& v : w) {
    v = -std::log1p(-Uniform01());
    total += v;
  }
  for (double& v : w) v = 0.99 * v / total + 0.01 / static_cast<double>(z_size);
  double renorm = 0.0;
  for (double v : w) renorm += v;
  for (double& v : w) v /= renorm;
  return MarginalTable(std::move(w));
}

KeyMap InstanceGenerator::Map(std::size_t x_size, std::size_t s_size) {
  KeyMap f;
  f.s_size = s_size;
  f.image.resize(x_size);
  for (auto& s : f.image) s = UniformIndex(s_size);
  return f;
}

std::vector<MarginalTable> LeftoverProbeSet(const JointTable& p,
                                            std::uint64_t seed) {
  InstanceGenerator gen(seed);
  std::vector<MarginalTable> probes;
  if (p.total_mass() > 0.0) {
    probes.push_back(MarginalTable::ZMarginal(p.renormalized()));
  }
  probes.push_back(MarginalTable::Uniform(p.z_size()));
  probes.push_back(gen.Reference(p.z_size()));
  return probes;
}

VerificationReport VerifyLeftover(const ToeplitzFamily& family,
                                  const JointTable& p,
                                  const std::vector<MarginalTable>& probes,
                                  const VerifyOptions& options) {
  VerificationReport report;
  report.lemma = "leftover_hash";
  const FamilyDistance d = EnumerateSecurityDistance(family, p, options.work_cap);
  report.sampled = d.sampled;
  // Sampled runs are judged on the mean minus three standard errors and
  // only ever report their slack; they cannot fail.
  const double observed = d.sampled ? d.mean - 3.0 * d.std_error : d.mean;
  const double tolerance = d.sampled ? kInf : options.tolerance;
  for (const MarginalTable& r : probes) {
    const double h2 = options.h2_scale * H2(p, r).value;
    const double rhs =
        0.5 * std::sqrt(static_cast<double>(family.s_size()) * std::exp(-h2));
    Track(report, rhs - observed, tolerance,
          {{"table", ToJson(p)},
           {"reference", MarginalJson(r)},
           {"m", family.m()},
           {"k", family.k()},
           {"expected_distance", d.mean},
           {"bound", rhs}});
  }
  return report;
}

VerificationReport VerifyExponential(const ToeplitzFamily& family,
                                     const JointTable& p,
                                     const std::vector<double>& rho_grid,
                                     const VerifyOptions& options) {
  VerificationReport report;
  report.lemma = "exponential";
  const FamilyDistance d = EnumerateSecurityDistance(family, p, options.work_cap);
  report.sampled = d.sampled;
  const double observed = d.sampled ? d.mean - 3.0 * d.std_error : d.mean;
  const double tolerance = d.sampled ? kInf : options.tolerance;
  for (double rho : rho_grid) {
    const double rhs = 1.5 *
                       std::pow(static_cast<double>(family.s_size()), rho) *
                       std::exp(Phi(rho, p).value);
    Track(report, rhs - observed, tolerance,
          {{"table", ToJson(p)},
           {"rho", rho},
           {"m", family.m()},
           {"k", family.k()},
           {"expected_distance", d.mean},
           {"bound", rhs}});
  }
  return report;
}

std::vector<VerificationReport> VerifyAppendixLemmas(
    const AppendixConfig& config) {
  if (config.alphabet_cap < 2 || config.alphabet_cap > 8) {
    throw ParameterError("appendix alphabet cap must lie in [2, 8]");
  }
  VerificationReport mono;
  mono.lemma = "monotonicity";
  VerificationReport direct;
  direct.lemma = "spectral_direct";
  VerificationReport converse;
  converse.lemma = "spectral_converse";

  for (int i = 0; i < config.instance_count; ++i) {
    // Each instance has its own stream so instances are reproducible alone.
    InstanceGenerator gen(config.seed * 0x9E3779B97F4A7C15ull +
                          static_cast<std::uint64_t>(i));
    const std::size_t xs = 2 + gen.UniformIndex(config.alphabet_cap - 1);
    const std::size_t zs = 2 + gen.UniformIndex(config.alphabet_cap - 1);
    const JointTable p = gen.Table(xs, zs, i % 4 == 3 ? 0.3 : 0.0);
    const KeyMap f = gen.Map(xs, 1 + gen.UniformIndex(xs));
    const MarginalTable random_ref = gen.Reference(zs);
    const MarginalTable pz = MarginalTable::ZMarginal(p);
    const JointTable psz = PushForward(f, p);

    auto instance = [&](const MarginalTable& r, double eps) {
      return nlohmann::json{{"index", i},
                            {"table", ToJson(p)},
                            {"key_map", f.image},
                            {"s_size", f.s_size},
                            {"reference", MarginalJson(r)},
                            {"eps", eps}};
    };

    for (double eps : config.eps_grid) {
      for (const MarginalTable* r : {&pz, &random_ref}) {
        Track(mono,
              Gap(SmoothHMin(p, *r, eps).value, SmoothHMin(psz, *r, eps).value),
              config.tolerance, instance(*r, eps));
        Track(direct,
              Gap(SmoothHMinBar(p, *r, eps / 2.0).value,
                  HSpectral(p, *r, eps).value),
              config.tolerance, instance(*r, eps));
      }
      for (double zeta : config.zeta_grid) {
        if (!(eps + zeta < 1.0)) continue;
        nlohmann::json inst = instance(pz, eps);
        inst["zeta"] = zeta;
        Track(converse,
              Gap(HSpectral(p, pz, eps + zeta).value - std::log(zeta),
                  SmoothHMin(p, pz, eps).value),
              config.tolerance, inst);
      }
    }
  }
  return {mono, direct, converse};
}

}  // namespace pabound
