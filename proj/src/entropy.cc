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

#include "pabound/entropy.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "pabound/errors.h"

namespace pabound {
namespace {

// log sum exp(v_i); -inf for an empty or all -inf input.
class LogSumExp {
 public:
  void Add(double v) {
    if (v == -kInf) return;
    terms_.push_back(v);
  }
  double Value() const {
    if (terms_.empty()) return -kInf;
    const double m = *std::max_element(terms_.begin(), terms_.end());
    double s = 0.0;
    for (double v : terms_) s += std::exp(v - m);
    return m + std::log(s);
  }

 private:
  std::vector<double> terms_;
};

EntropyValue Flagged(EntropyKind kind, double parameter, double value,
                     bool empty, bool violation) {
  EntropyValue e;
  e.value = value;
  e.kind = kind;
  e.parameter = parameter;
  e.empty_source = empty;
  e.support_violation = violation;
  return e;
}

// Returns a flagged value when p is empty or r does not cover supp(P_Z).
bool Degenerate(const JointTable& p, const MarginalTable& r, EntropyKind kind,
                double parameter, EntropyValue* out) {
  if (!SupportCovered(p, r)) {
    *out = Flagged(kind, parameter, -kInf, false, true);
    return true;
  }
  if (p.total_mass() <= 0.0) {
    *out = Flagged(kind, parameter, kInf, true, false);
    return true;
  }
  return false;
}

void RequireNormalized(const JointTable& p, const char* what) {
  if (!p.normalized()) {
    throw InvalidTableError(std::string(what) +
                            " requires a normalized joint table");
  }
}

struct Cell {
  std::size_t index;
  double p;
  double r;
};

// Cells with P > 0 and R(z) > 0, sorted by ratio P/R descending.
std::vector<Cell> CellsByRatio(const JointTable& p, const MarginalTable& r) {
  std::vector<Cell> cells;
  for (std::size_t x = 0; x < p.x_size(); ++x) {
    for (std::size_t z = 0; z < p.z_size(); ++z) {
      if (p.weight(x, z) > 0.0 && r.in_support(z)) {
        cells.push_back({p.index(x, z), p.weight(x, z), r.prob(z)});
      }
    }
  }
  std::stable_sort(cells.begin(), cells.end(),
                   [](const Cell& a, const Cell& b) {
                     return a.p * b.r > b.p * a.r;
                   });
  return cells;
}

// Smallest t >= 0 with sum over cells of max(0, P - t R) <= budget. The
// excess is piecewise linear in t with breakpoints at the ratios, so the
// root is found exactly on the segment where the excess crosses budget.
double ClipThreshold(const std::vector<Cell>& cells, double budget) {
  double sum_p = 0.0;
  double sum_r = 0.0;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    sum_p += cells[j].p;
    sum_r += cells[j].r;
    const double next_ratio =
        j + 1 < cells.size() ? cells[j + 1].p / cells[j + 1].r : 0.0;
    const double excess_at_next = sum_p - next_ratio * sum_r;
    if (excess_at_next > budget) {
      return std::max((sum_p - budget) / sum_r, next_ratio);
    }
  }
  return 0.0;
}

bool HasFreeCells(const MarginalTable& r) {
  for (std::size_t z = 0; z < r.z_size(); ++z) {
    if (!r.in_support(z)) return true;
  }
  return false;
}

void RequireEps(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw ParameterError("smoothing radius must be finite and nonnegative");
  }
}

double NormalizedThreshold(const JointTable& p, const MarginalTable& r,
                           double eps) {
  const double t_excess = ClipThreshold(CellsByRatio(p, r), eps);
  if (HasFreeCells(r)) return t_excess;
  // Q <= t R on every cell with total mass one needs t |X| >= 1.
  return std::max(t_excess, 1.0 / static_cast<double>(p.x_size()));
}

}  // namespace

std::string ToString(EntropyKind kind) {
  switch (kind) {
    case EntropyKind::kMin: return "min";
    case EntropyKind::kRenyi: return "renyi";
    case EntropyKind::kOrder2: return "order2";
    case EntropyKind::kShannon: return "shannon";
    case EntropyKind::kSpectral: return "spectral";
    case EntropyKind::kSmoothMinBar: return "smooth_min_bar";
    case EntropyKind::kSmoothMin: return "smooth_min";
    case EntropyKind::kPhi: return "phi";
  }
  return "unknown";
}

SpectrumTable::SpectrumTable(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.r < b.r; });
  for (const Atom& a : atoms) {
    if (a.mass <= 0.0) continue;
    if (!atoms_.empty()) {
      Atom& last = atoms_.back();
      const double tol = kMergeTolerance * std::max(1.0, std::abs(last.r));
      if (a.r - last.r <= tol) {
        last.mass += a.mass;
        continue;
      }
    }
    atoms_.push_back(a);
  }
  cumulative_.reserve(atoms_.size());
  double acc = 0.0;
  for (const Atom& a : atoms_) {
    acc += a.mass;
    cumulative_.push_back(acc);
  }
}

EntropyValue HMin(const JointTable& p, const MarginalTable& r) {
  EntropyValue out;
  if (Degenerate(p, r, EntropyKind::kMin, 0.0, &out)) return out;
  double max_log_ratio = -kInf;
  for (std::size_t x = 0; x < p.x_size(); ++x) {
    for (std::size_t z = 0; z < p.z_size(); ++z) {
      if (p.weight(x, z) <= 0.0 || !r.in_support(z)) continue;
      max_log_ratio =
          std::max(max_log_ratio, p.log_weight(x, z) - r.log_prob(z));
    }
  }
  return Flagged(EntropyKind::kMin, 0.0, -max_log_ratio, false, false);
}

EntropyValue H2(const JointTable& p, const MarginalTable& r) {
  EntropyValue out;
  if (Degenerate(p, r, EntropyKind::kOrder2, 2.0, &out)) return out;
  LogSumExp lse;
  for (std::size_t x = 0; x < p.x_size(); ++x) {
    for (std::size_t z = 0; z < p.z_size(); ++z) {
      if (p.weight(x, z) <= 0.0 || !r.in_support(z)) continue;
      lse.Add(2.0 * p.log_weight(x, z) - r.log_prob(z));
    }
  }
  return Flagged(EntropyKind::kOrder2, 2.0, -lse.Value(), false, false);
}

EntropyValue HRenyi(const JointTable& p, const MarginalTable& r,
                    double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw ParameterError("Renyi order parameter theta must lie in (0, 1]");
  }
  EntropyValue out;
  if (Degenerate(p, r, EntropyKind::kRenyi, theta, &out)) return out;
  LogSumExp lse;
  for (std::size_t x = 0; x < p.x_size(); ++x) {
    for (std::size_t z = 0; z < p.z_size(); ++z) {
      if (p.weight(x, z) <= 0.0 || !r.in_support(z)) continue;
      lse.Add((1.0 + theta) * p.log_weight(x, z) - theta * r.log_prob(z));
    }
  }
  return Flagged(EntropyKind::kRenyi, theta, -lse.Value() / theta, false,
                 false);
}

EntropyValue H1(const JointTable& p, const MarginalTable& r) {
  RequireNormalized(p, "H_1");
  if (!SupportCovered(p, r)) {
    throw ReferenceSupportError("reference marginal misses supp(P_Z)");
  }
  const std::vector<double> pz = p.z_weights();
  double divergence = 0.0;
  for (std::size_t z = 0; z < pz.size(); ++z) {
    if (pz[z] > 0.0) divergence += pz[z] * (std::log(pz[z]) - r.log_prob(z));
  }
  return Flagged(EntropyKind::kShannon, 0.0,
                 ConditionalEntropy(p) - divergence, false, false);
}

EntropyValue Phi(double rho, const JointTable& p) {
  if (!(rho >= 0.0 && rho <= 0.5)) {
    throw ParameterError("rho must lie in (0, 1/2]");
  }
  RequireNormalized(p, "phi");
  if (rho == 0.0) return Flagged(EntropyKind::kPhi, 0.0, 0.0, false, false);
  const std::vector<double> pz = p.z_weights();
  const double s = 1.0 - rho;
  LogSumExp outer;
  for (std::size_t z = 0; z < p.z_size(); ++z) {
    if (pz[z] <= 0.0) continue;
    const double log_pz = std::log(pz[z]);
    LogSumExp inner;
    for (std::size_t x = 0; x < p.x_size(); ++x) {
      if (p.weight(x, z) > 0.0) inner.Add((p.log_weight(x, z) - log_pz) / s);
    }
    outer.Add(log_pz + s * inner.Value());
  }
  return Flagged(EntropyKind::kPhi, rho, outer.Value(), false, false);
}

SpectrumTable Spectrum(const JointTable& p, const MarginalTable& r) {
  if (!SupportCovered(p, r)) {
    throw ReferenceSupportError("reference marginal misses supp(P_Z)");
  }
  std::vector<SpectrumTable::Atom> atoms;
  atoms.reserve(p.size());
  for (std::size_t x = 0; x < p.x_size(); ++x) {
    for (std::size_t z = 0; z < p.z_size(); ++z) {
      const double w = p.weight(x, z);
      if (w <= 0.0) continue;
      atoms.push_back({r.log_prob(z) - p.log_weight(x, z), w});
    }
  }
  return SpectrumTable(std::move(atoms));
}

EntropyValue HSpectral(const SpectrumTable& spectrum, double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw ParameterError("spectral threshold eps must lie in [0, 1)");
  }
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (spectrum.cumulative(i) > eps) {
      return Flagged(EntropyKind::kSpectral, eps, spectrum.atoms()[i].r,
                     false, false);
    }
  }
  return Flagged(EntropyKind::kSpectral, eps, kInf, spectrum.size() == 0,
                 false);
}

EntropyValue HSpectral(const JointTable& p, const MarginalTable& r,
                       double eps) {
  if (!SupportCovered(p, r)) {
    if (!(eps >= 0.0 && eps < 1.0)) {
      throw ParameterError("spectral threshold eps must lie in [0, 1)");
    }
    return Flagged(EntropyKind::kSpectral, eps, -kInf, false, true);
  }
  return HSpectral(Spectrum(p, r), eps);
}

EntropyValue SmoothHMinBar(const JointTable& p, const MarginalTable& r,
                           double eps) {
  RequireEps(eps);
  EntropyValue out;
  if (Degenerate(p, r, EntropyKind::kSmoothMinBar, eps, &out)) return out;
  // Distance is half-L1, so removing mass m costs m/2: budget 2 eps.
  const double t = ClipThreshold(CellsByRatio(p, r), 2.0 * eps);
  const double value = t > 0.0 ? -std::log(t) : kInf;
  return Flagged(EntropyKind::kSmoothMinBar, eps, value, false, false);
}

JointTable SmoothHMinBarWitness(const JointTable& p, const MarginalTable& r,
                                double eps) {
  RequireEps(eps);
  if (!SupportCovered(p, r)) {
    throw ReferenceSupportError("reference marginal misses supp(P_Z)");
  }
  const double t = ClipThreshold(CellsByRatio(p, r), 2.0 * eps);
  std::vector<double> q(p.weights().begin(), p.weights().end());
  for (std::size_t x = 0; x < p.x_size(); ++x) {
    for (std::size_t z = 0; z < p.z_size(); ++z) {
      if (!r.in_support(z)) continue;
      q[p.index(x, z)] = std::min(p.weight(x, z), t * r.prob(z));
    }
  }
  return JointTable(p.x_size(), p.z_size(), std::move(q));
}

EntropyValue SmoothHMin(const JointTable& p, const MarginalTable& r,
                        double eps) {
  RequireEps(eps);
  RequireNormalized(p, "smooth min-entropy over the normalized ball");
  EntropyValue out;
  if (Degenerate(p, r, EntropyKind::kSmoothMin, eps, &out)) return out;
  const double t = NormalizedThreshold(p, r, eps);
  const double value = t > 0.0 ? -std::log(t) : kInf;
  return Flagged(EntropyKind::kSmoothMin, eps, value, false, false);
}

JointTable SmoothHMinWitness(const JointTable& p, const MarginalTable& r,
                             double eps) {
  RequireEps(eps);
  RequireNormalized(p, "smooth min-entropy over the normalized ball");
  if (!SupportCovered(p, r)) {
    throw ReferenceSupportError("reference marginal misses supp(P_Z)");
  }
  const double t = NormalizedThreshold(p, r, eps);
  std::vector<double> q(p.weights().begin(), p.weights().end());
  double removed = 0.0;
  for (std::size_t x = 0; x < p.x_size(); ++x) {
    for (std::size_t z = 0; z < p.z_size(); ++z) {
      if (!r.in_support(z)) continue;
      const double cap = t * r.prob(z);
      if (p.weight(x, z) > cap) {
        removed += p.weight(x, z) - cap;
        q[p.index(x, z)] = cap;
      }
    }
  }
  for (std::size_t x = 0; x < p.x_size() && removed > 0.0; ++x) {
    for (std::size_t z = 0; z < p.z_size() && removed > 0.0; ++z) {
      const std::size_t i = p.index(x, z);
      const double room =
          r.in_support(z) ? std::max(0.0, t * r.prob(z) - q[i]) : removed;
      const double add = std::min(room, removed);
      q[i] += add;
      removed -= add;
    }
  }
  return JointTable(p.x_size(), p.z_size(), std::move(q));
}

double ConditionalEntropy(const JointTable& p) {
  RequireNormalized(p, "H(X|Z)");
  const std::vector<double> pz = p.z_weights();
  double h = 0.0;
  for (std::size_t x = 0; x < p.x_size(); ++x) {
    for (std::size_t z = 0; z < p.z_size(); ++z) {
      const double w = p.weight(x, z);
      if (w > 0.0) h -= w * (p.log_weight(x, z) - std::log(pz[z]));
    }
  }
  return h;
}

double Dispersion(const JointTable& p) {
  const double h = ConditionalEntropy(p);
  const std::vector<double> pz = p.z_weights();
  double v = 0.0;
  for (std::size_t x = 0; x < p.x_size(); ++x) {
    for (std::size_t z = 0; z < p.z_size(); ++z) {
      const double w = p.weight(x, z);
      if (w <= 0.0) continue;
      const double d = std::log(pz[z]) - p.log_weight(x, z) - h;
      v += w * d * d;
    }
  }
  return v;
}

}  // namespace pabound
