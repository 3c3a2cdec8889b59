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

// Conditional entropies of a joint table relative to a reference marginal
// R_Z: min-entropy, Renyi entropies of order 1+theta, the inf-spectral
// entropy, the exact smooth min-entropies, the Gallager-type function
// phi(rho), and the conditional dispersion. Values are in nats.
//
// Entropy-valued functions never throw on a reference that misses part of
// supp(P_Z); they return -inf with `support_violation` set. Table-valued
// functions (Spectrum) throw ReferenceSupportError instead.

#ifndef PABOUND_ENTROPY_H_
#define PABOUND_ENTROPY_H_

#include <cstddef>
#include <string>
#include <vector>

#include "pabound/prob_core.h"

namespace pabound {

enum class EntropyKind {
  kMin,
  kRenyi,
  kOrder2,
  kShannon,  // H_1 = H(X|Z) - D(P_Z || R_Z)
  kSpectral,
  kSmoothMinBar,
  kSmoothMin,
  kPhi,
};

std::string ToString(EntropyKind kind);

struct EntropyValue {
  double value = 0.0;
  EntropyKind kind = EntropyKind::kMin;
  // Order parameter: theta for kRenyi, epsilon for the smoothed and
  // spectral kinds, rho for kPhi. Zero otherwise.
  double parameter = 0.0;
  // Set when P was the zero table (value is +inf by convention).
  bool empty_source = false;
  // Set when R misses part of supp(P_Z) (value is -inf).
  bool support_violation = false;
};

// Sorted distinct values of -log(P(x,z)/R(z)) over cells with P > 0, with
// aggregated masses.
class SpectrumTable {
 public:
  struct Atom {
    double r = 0.0;
    double mass = 0.0;
  };

  // Atoms are sorted and merged on construction. Values closer than
  // kMergeTolerance * max(1, |r|) are one atom.
  explicit SpectrumTable(std::vector<Atom> atoms);

  static constexpr double kMergeTolerance = 1e-10;

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  // Mass of atoms 0..i.
  double cumulative(std::size_t i) const { return cumulative_[i]; }
  double total_mass() const {
    return cumulative_.empty() ? 0.0 : cumulative_.back();
  }

 private:
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

// -log max_{x, z in supp R} P(x,z)/R(z).
EntropyValue HMin(const JointTable& p, const MarginalTable& r);

// -log sum P(x,z)^2 / R(z).
EntropyValue H2(const JointTable& p, const MarginalTable& r);

// -(1/theta) log sum R(z) (P(x,z)/R(z))^(1+theta), theta in (0, 1].
EntropyValue HRenyi(const JointTable& p, const MarginalTable& r,
                    double theta);

// H(X|Z) - D(P_Z || R), the theta -> 0 limit of HRenyi. P normalized;
// throws ReferenceSupportError on a support violation.
EntropyValue H1(const JointTable& p, const MarginalTable& r);

// log sum_z P_Z(z) (sum_x P(x|z)^(1/(1-rho)))^(1-rho) for rho in [0, 1/2];
// rho = 0 returns exactly 0. P normalized.
EntropyValue Phi(double rho, const JointTable& p);

SpectrumTable Spectrum(const JointTable& p, const MarginalTable& r);

// sup{r : P{-log(P/R) <= r} <= eps}: the value of the first atom whose
// cumulative mass strictly exceeds eps, or +inf if none does.
EntropyValue HSpectral(const SpectrumTable& spectrum, double eps);
EntropyValue HSpectral(const JointTable& p, const MarginalTable& r,
                       double eps);

// Exact max of H_min(Q|R) over sub-normalized Q with d(P,Q) <= eps.
EntropyValue SmoothHMinBar(const JointTable& p, const MarginalTable& r,
                           double eps);
// An optimizer of SmoothHMinBar: P clipped at t* R on supp(R).
JointTable SmoothHMinBarWitness(const JointTable& p, const MarginalTable& r,
                                double eps);

// Exact max of H_min(Q|R) over normalized Q with d(P,Q) <= eps. P
// normalized.
EntropyValue SmoothHMin(const JointTable& p, const MarginalTable& r,
                        double eps);
// An optimizer of SmoothHMin: P clipped at t* R with the clipped mass
// spread into the headroom below t* R.
JointTable SmoothHMinWitness(const JointTable& p, const MarginalTable& r,
                             double eps);

// Shannon conditional entropy H(X|Z) of a normalized table.
double ConditionalEntropy(const JointTable& p);

// V(X|Z) = sum P (-log P(x|z) - H(X|Z))^2, in nats^2.
double Dispersion(const JointTable& p);

}  // namespace pabound

#endif  // PABOUND_ENTROPY_H_
