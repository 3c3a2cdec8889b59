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

#include "pabound/prob_core.h"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "pabound/errors.h"

namespace pabound {
namespace {

double LogOrNegInf(double w) {
  return w > 0.0 ? std::log(w) : -kInf;
}

// Neumaier-compensated; product tables have up to 2^20 tiny cells.
double SumInOrder(std::span<const double> v) {
  double sum = 0.0;
  double carry = 0.0;
  for (double x : v) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + carry;
}

}  // namespace

JointTable::JointTable(std::size_t x_size, std::size_t z_size,
                       std::vector<double> weights)
    : x_size_(x_size), z_size_(z_size), weights_(std::move(weights)) {
  log_weights_.resize(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    log_weights_[i] = LogOrNegInf(weights_[i]);
  }
  Validate();
}

JointTable::JointTable(std::size_t x_size, std::size_t z_size,
                       std::vector<double> weights,
                       std::vector<double> log_weights)
    : x_size_(x_size),
      z_size_(z_size),
      weights_(std::move(weights)),
      log_weights_(std::move(log_weights)) {
  Validate();
}

JointTable JointTable::FromLogWeights(std::size_t x_size, std::size_t z_size,
                                      std::vector<double> log_weights) {
  std::vector<double> weights(log_weights.size());
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    if (std::isnan(log_weights[i]) || log_weights[i] == kInf) {
      throw InvalidTableError("log weight must be finite or -inf");
    }
    weights[i] = std::exp(log_weights[i]);
    if (weights[i] == 0.0) log_weights[i] = -kInf;
  }
  return JointTable(x_size, z_size, std::move(weights),
                    std::move(log_weights));
}

void JointTable::Validate() {
  if (x_size_ == 0 || z_size_ == 0) {
    throw InvalidTableError("alphabet sizes must be positive");
  }
  if (weights_.size() != x_size_ * z_size_) {
    throw InvalidTableError("weight count " + std::to_string(weights_.size()) +
                            " does not match " + std::to_string(x_size_) +
                            " x " + std::to_string(z_size_));
  }
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidTableError("weights must be finite and nonnegative");
    }
  }
  double total = SumInOrder(weights_);
  if (total > 1.0 + kMassTolerance) {
    throw InvalidTableError("total mass " + std::to_string(total) +
                            " exceeds one");
  }
  total_mass_ = total;
  normalized_ = std::abs(total - 1.0) <= kMassTolerance;
}

std::vector<double> JointTable::z_weights() const {
  std::vector<double> out(z_size_, 0.0);
  for (std::size_t x = 0; x < x_size_; ++x) {
    for (std::size_t z = 0; z < z_size_; ++z) out[z] += weight(x, z);
  }
  return out;
}

JointTable JointTable::renormalized() const {
  if (total_mass_ <= 0.0) {
    throw InvalidTableError("cannot renormalize an all-zero table");
  }
  std::vector<double> w(weights_.size());
  std::vector<double> lw(weights_.size());
  const double log_total = std::log(total_mass_);
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = weights_[i] / total_mass_;
    lw[i] = weights_[i] > 0.0 ? log_weights_[i] - log_total : -kInf;
  }
  return JointTable(x_size_, z_size_, std::move(w), std::move(lw));
}

MarginalTable::MarginalTable(std::vector<double> prob)
    : prob_(std::move(prob)) {
  if (prob_.empty()) throw InvalidTableError("empty marginal");
  for (double p : prob_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidTableError("marginal probabilities must be nonnegative");
    }
  }
  double total = SumInOrder(prob_);
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw InvalidTableError("marginal must be normalized, total " +
                            std::to_string(total));
  }
  log_prob_.resize(prob_.size());
  for (std::size_t z = 0; z < prob_.size(); ++z) {
    log_prob_[z] = LogOrNegInf(prob_[z]);
  }
}

MarginalTable MarginalTable::Uniform(std::size_t z_size) {
  if (z_size == 0) throw InvalidTableError("empty marginal");
  return MarginalTable(std::vector<double>(z_size, 1.0 / z_size));
}

MarginalTable MarginalTable::ZMarginal(const JointTable& p) {
  if (!p.normalized()) {
    throw InvalidTableError("P_Z requires a normalized joint table");
  }
  return MarginalTable(p.z_weights());
}

bool SupportCovered(const JointTable& p, const MarginalTable& r) {
  if (p.z_size() != r.z_size()) {
    throw AlphabetMismatchError("reference marginal has the wrong Z size");
  }
  std::vector<double> pz = p.z_weights();
  for (std::size_t z = 0; z < pz.size(); ++z) {
    if (pz[z] > 0.0 && !r.in_support(z)) return false;
  }
  return true;
}

KeyMap KeyMap::Identity(std::size_t x_size) {
  KeyMap f;
  f.image.resize(x_size);
  std::iota(f.image.begin(), f.image.end(), std::size_t{0});
  f.s_size = x_size;
  return f;
}

KeyMap KeyMap::Constant(std::size_t x_size) {
  return KeyMap{std::vector<std::size_t>(x_size, 0), 1};
}

BscSource::BscSource(double q_in, int n_in) : q(q_in), n(n_in) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw ParameterError("BSC crossover must lie in [0, 1]");
  }
  if (n < 1) throw ParameterError("block length must be positive");
}

JointTable BscSource::LetterTable() const {
  // Rows x, columns z: P(x, x) = (1-q)/2, P(x, x+1) = q/2.
  const double same = (1.0 - q) / 2.0;
  const double flip = q / 2.0;
  return JointTable(2, 2, {same, flip, flip, same});
}

IidSource::IidSource(JointTable letter, int n)
    : letter_(std::move(letter)), n_(n) {
  if (n_ < 1) throw ParameterError("block length must be positive");
}

std::size_t IidSource::cell_count() const {
  const std::size_t base = letter_.size();
  std::size_t count = 1;
  for (int i = 0; i < n_; ++i) {
    if (count > std::numeric_limits<std::size_t>::max() / base) {
      return std::numeric_limits<std::size_t>::max();
    }
    count *= base;
  }
  return count;
}

JointTable IidSource::Materialize(std::size_t cap) const {
  const std::size_t cells = cell_count();
  if (cells > cap) {
    throw SizeError("product table of " + std::to_string(cells) +
                    " cells exceeds cap " + std::to_string(cap));
  }
  const std::size_t xs = letter_.x_size();
  const std::size_t zs = letter_.z_size();
  std::size_t x_total = 1;
  std::size_t z_total = 1;
  for (int i = 0; i < n_; ++i) {
    x_total *= xs;
    z_total *= zs;
  }
  std::vector<double> log_w(cells);
  for (std::size_t xv = 0; xv < x_total; ++xv) {
    for (std::size_t zv = 0; zv < z_total; ++zv) {
      double acc = 0.0;
      std::size_t xr = xv;
      std::size_t zr = zv;
      for (int i = 0; i < n_; ++i) {
        acc += letter_.log_weight(xr % xs, zr % zs);
        xr /= xs;
        zr /= zs;
      }
      log_w[xv * z_total + zv] = acc;
    }
  }
  return JointTable::FromLogWeights(x_total, z_total, std::move(log_w));
}

double TotalVariation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw AlphabetMismatchError("total variation of tables with " +
                                std::to_string(p.size()) + " and " +
                                std::to_string(q.size()) + " cells");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

double TotalVariation(const JointTable& p, const JointTable& q) {
  if (p.x_size() != q.x_size() || p.z_size() != q.z_size()) {
    throw AlphabetMismatchError("joint tables have different alphabets");
  }
  return TotalVariation(p.weights(), q.weights());
}

JointTable PushForward(const KeyMap& f, const JointTable& p) {
  if (f.image.size() != p.x_size()) {
    throw AlphabetMismatchError("key map domain does not match |X|");
  }
  if (f.s_size == 0) throw AlphabetMismatchError("key alphabet is empty");
  std::vector<double> out(f.s_size * p.z_size(), 0.0);
  for (std::size_t x = 0; x < p.x_size(); ++x) {
    const std::size_t s = f.image[x];
    if (s >= f.s_size) throw AlphabetMismatchError("key map image out of range");
    for (std::size_t z = 0; z < p.z_size(); ++z) {
      out[s * p.z_size() + z] += p.weight(x, z);
    }
  }
  return JointTable(f.s_size, p.z_size(), std::move(out));
}

double SubnormalizedSecurityDistance(const KeyMap& f, const JointTable& p) {
  JointTable psz = PushForward(f, p);
  std::vector<double> pz = p.z_weights();
  const double inv_s = 1.0 / static_cast<double>(f.s_size);
  double sum = 0.0;
  for (std::size_t s = 0; s < f.s_size; ++s) {
    for (std::size_t z = 0; z < p.z_size(); ++z) {
      sum += std::abs(psz.weight(s, z) - inv_s * pz[z]);
    }
  }
  return 0.5 * sum;
}

double SecurityDistance(const KeyMap& f, const JointTable& p) {
  if (!p.normalized()) {
    throw InvalidTableError(
        "security distance is defined for normalized tables only");
  }
  return SubnormalizedSecurityDistance(f, p);
}

JointTable ClipBelow(const JointTable& p, const MarginalTable& r,
                     double r_nats) {
  if (!SupportCovered(p, r)) {
    throw ReferenceSupportError("reference marginal misses supp(P_Z)");
  }
  std::vector<double> out(p.weights().begin(), p.weights().end());
  for (std::size_t x = 0; x < p.x_size(); ++x) {
    for (std::size_t z = 0; z < p.z_size(); ++z) {
      const double w = p.weight(x, z);
      if (w <= 0.0) continue;
      const double neg_log_ratio = r.log_prob(z) - p.log_weight(x, z);
      if (!(neg_log_ratio > r_nats)) out[p.index(x, z)] = 0.0;
    }
  }
  return JointTable(p.x_size(), p.z_size(), std::move(out));
}

IidSource ProductExtension(const JointTable& p, int n) {
  return IidSource(p, n);
}

nlohmann::json ToJson(const JointTable& p) {
  return nlohmann::json{
      {"x_size", p.x_size()},
      {"z_size", p.z_size()},
      {"weights", std::vector<double>(p.weights().begin(), p.weights().end())}};
}

JointTable JointTableFromJson(const nlohmann::json& j) {
  try {
    return JointTable(j.at("x_size").get<std::size_t>(),
                      j.at("z_size").get<std::size_t>(),
                      j.at("weights").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidTableError(std::string("malformed joint table JSON: ") +
                            e.what());
  }
}

}  // namespace pabound
