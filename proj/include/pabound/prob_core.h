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

// Finite-alphabet probability objects for privacy amplification: joint
// weight tables over X x Z (possibly sub-normalized), reference marginals
// over Z, the security distance of a key map, and i.i.d./BSC sources.
//
// All logarithms are natural.

#ifndef PABOUND_PROB_CORE_H_
#define PABOUND_PROB_CORE_H_

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "json.hpp"

namespace pabound {

// Absolute tolerance on total mass; covers accumulation over <= 2^20 cells.
inline constexpr double kMassTolerance = 1e-12;
// Largest table product_extension() will materialize.
inline constexpr std::size_t kDefaultCellCap = std::size_t{1} << 20;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Joint weight table over X x Z, stored row-major (index x * z_size + z).
// Weights are nonnegative with total mass <= 1 + kMassTolerance. Zero cells
// carry log_weight == -inf.
class JointTable {
 public:
  JointTable(std::size_t x_size, std::size_t z_size,
             std::vector<double> weights);

  // Builds a table from log-domain weights; weight = exp(log_weight). Used
  // for product tables where the log form is the accurate one.
  static JointTable FromLogWeights(std::size_t x_size, std::size_t z_size,
                                   std::vector<double> log_weights);

  std::size_t x_size() const { return x_size_; }
  std::size_t z_size() const { return z_size_; }
  std::size_t size() const { return weights_.size(); }
  std::size_t index(std::size_t x, std::size_t z) const {
    return x * z_size_ + z;
  }

  double weight(std::size_t x, std::size_t z) const {
    return weights_[index(x, z)];
  }
  double log_weight(std::size_t x, std::size_t z) const {
    return log_weights_[index(x, z)];
  }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> log_weights() const { return log_weights_; }

  double total_mass() const { return total_mass_; }
  bool normalized() const { return normalized_; }

  // Unnormalized Z-marginal sum_x P(x, z).
  std::vector<double> z_weights() const;

  // Copy scaled to total mass one. Throws InvalidTableError on an all-zero
  // table.
  JointTable renormalized() const;

  friend bool operator==(const JointTable& a, const JointTable& b) {
    return a.x_size_ == b.x_size_ && a.z_size_ == b.z_size_ &&
           a.weights_ == b.weights_;
  }

 private:
  JointTable(std::size_t x_size, std::size_t z_size,
             std::vector<double> weights, std::vector<double> log_weights);
  void Validate();

  std::size_t x_size_;
  std::size_t z_size_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
  double total_mass_ = 0.0;
  bool normalized_ = false;
};

// Normalized distribution over Z; houses the reference R_Z and P_Z.
class MarginalTable {
 public:
  explicit MarginalTable(std::vector<double> prob);

  static MarginalTable Uniform(std::size_t z_size);
  // P_Z of a normalized joint table.
  static MarginalTable ZMarginal(const JointTable& p);

  std::size_t z_size() const { return prob_.size(); }
  double prob(std::size_t z) const { return prob_[z]; }
  double log_prob(std::size_t z) const { return log_prob_[z]; }
  bool in_support(std::size_t z) const { return prob_[z] > 0.0; }
  std::span<const double> probs() const { return prob_; }

 private:
  std::vector<double> prob_;
  std::vector<double> log_prob_;
};

// True iff every z with P_Z(z) > 0 has R(z) > 0. Throws on size mismatch.
bool SupportCovered(const JointTable& p, const MarginalTable& r);

// A map f: X -> S given by its image table f(x) = image[x] < s_size.
struct KeyMap {
  std::vector<std::size_t> image;
  std::size_t s_size = 1;

  static KeyMap Identity(std::size_t x_size);
  static KeyMap Constant(std::size_t x_size);
};

// Single-letter source X uniform on {0,1}, Z = X through a BSC(q), with
// block length n.
struct BscSource {
  double q = 0.0;
  int n = 1;

  BscSource(double q, int n);
  JointTable LetterTable() const;
};

// P^n for a single-letter table, kept symbolic until materialized.
class IidSource {
 public:
  IidSource(JointTable letter, int n);

  const JointTable& letter() const { return letter_; }
  int n() const { return n_; }
  // (x_size * z_size)^n, saturating at SIZE_MAX.
  std::size_t cell_count() const;
  // Materializes P^n with the first letter as the most significant digit.
  // Throws SizeError above cap.
  JointTable Materialize(std::size_t cap = kDefaultCellCap) const;

 private:
  JointTable letter_;
  int n_;
};

// (1/2) sum |p(a) - q(a)|.
double TotalVariation(std::span<const double> p, std::span<const double> q);
double TotalVariation(const JointTable& p, const JointTable& q);

// P_SZ(s, z) = sum over f(x) = s of P_XZ(x, z).
JointTable PushForward(const KeyMap& f, const JointTable& p);

// d(f | P_XZ) = d(P_SZ, uniform_S x P_Z) for normalized P_XZ. Throws
// InvalidTableError on a sub-normalized table.
double SecurityDistance(const KeyMap& f, const JointTable& p);

// The same quantity without the normalization requirement; P_Z is the
// (sub-normalized) Z-marginal of p. Bounds on sub-normalized tables go
// through this.
double SubnormalizedSecurityDistance(const KeyMap& f, const JointTable& p);

// Keeps cells with -log(P(x,z) / R(z)) > r and zeroes the rest. Throws
// ReferenceSupportError when R misses part of supp(P_Z).
JointTable ClipBelow(const JointTable& p, const MarginalTable& r, double r_nats);

// Symbolic handle for P^n.
IidSource ProductExtension(const JointTable& p, int n);

// {"x_size", "z_size", "weights"} with row-major weights. Weights are read
// as given; renormalize explicitly with JointTable::renormalized().
nlohmann::json ToJson(const JointTable& p);
JointTable JointTableFromJson(const nlohmann::json& j);

}  // namespace pabound

#endif  // PABOUND_PROB_CORE_H_
