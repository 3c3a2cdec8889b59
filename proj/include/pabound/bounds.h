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

// Finite-blocklength bounds on the extractable key length l(P^n, eps):
//
//   spectral lower / upper   inf-spectral entropy with the leftover hash
//                            lemma and the min-entropy converse
//   exponential lower        Gallager-type exponent phi(rho), or its Renyi
//                            relaxation
//   hybrid lower             theta * H_{1+theta} + (1-theta) * H_s
//   gaussian approx          n H(X|Z) + sqrt(n V) Phi^{-1}(eps)
//   smooth-min lower         exact smooth min-entropy (small tables only)
//
// Every bound has a general route over an explicit (materialized) joint
// table and, for BSC sources, a binomial closed form. Values are nats;
// negative values are returned as-is.

#ifndef PABOUND_BOUNDS_H_
#define PABOUND_BOUNDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pabound/numeric.h"
#include "pabound/prob_core.h"

namespace pabound {

enum class BoundKind {
  kSpectralLower,
  kSpectralUpper,
  kExponentialLower,
  kHybridLower,
  kGaussianApprox,
  kSmoothMinLower,
};

std::string ToString(BoundKind kind);

struct BoundComponent {
  std::string label;
  double nats = 0.0;
};

struct BoundResult {
  double value_nats = 0.0;
  double value_bits = 0.0;
  BoundKind kind = BoundKind::kSpectralLower;
  std::optional<double> theta_star;
  std::optional<double> r_star;
  std::optional<std::int64_t> k_star;
  // Addends; they sum to value_nats.
  std::vector<BoundComponent> components;
  // Extra values that are not addends (e.g. the losing route).
  std::vector<BoundComponent> diagnostics;
};

using Source = std::variant<BscSource, IidSource>;

struct BoundParams {
  double eps = 0.0;
  double eta = 0.0;
  double zeta = 0.0;
  Source source;
  QuantileConvention convention = QuantileConvention::kFirstExceeding;

  // eta = zeta = eps / 2.
  static BoundParams WithDefaults(Source source, double eps);

  int n() const;
  // Throws ParameterError unless 0 < eps < 1, 0 < eta <= eps and
  // 0 < zeta <= 1 - eps.
  void Validate() const;
};

enum class Route {
  kAuto,        // closed form for BSC sources, general otherwise
  kClosedForm,  // BSC sources only
  kGeneral,     // materializes the product table
};

BoundResult EllSpectralLower(const BoundParams& params,
                             Route route = Route::kAuto);
BoundResult EllSpectralUpper(const BoundParams& params,
                             Route route = Route::kAuto);
BoundResult EllExponentialLower(const BoundParams& params,
                                Route route = Route::kAuto);
BoundResult EllHybridLower(const BoundParams& params,
                           Route route = Route::kAuto);
BoundResult GaussianApprox(const BoundParams& params,
                           Route route = Route::kAuto);

// Optional bound from the exact sub-normalized smooth min-entropy at radius
// (eps - eta)/2, maximized over R in {P_Z, uniform}. General route only.
BoundResult EllSmoothMinLower(const BoundParams& params);

// The two routes of the exponential bound on an explicit table:
// sup_{0<rho<=1/2} (-phi(rho) + log(2 eps/3)) / rho - 1, and
// sup_{0<theta<=1} H_{1+theta}(P|P_Z) + ((1+theta)/theta) log(2 eps/3) - 1.
// The first is never smaller.
BoundResult ExponentialLowerPhiForm(const JointTable& p, double eps);
BoundResult ExponentialLowerRenyiForm(const JointTable& p, double eps);

// R(z) proportional to (sum_x P(x,z)^(1+theta))^(1/(1+theta)).
MarginalTable OptimalRz(const JointTable& p, double theta);

// Binary entropy and BSC dispersion q(1-q) log^2((1-q)/q), in nats.
double BinaryEntropy(double q);
double BscDispersion(double q);

}  // namespace pabound

#endif  // PABOUND_BOUNDS_H_
