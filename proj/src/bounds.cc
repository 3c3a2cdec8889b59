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

#include "pabound/bounds.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "pabound/entropy.h"
#include "pabound/errors.h"
#include "pabound/optimize.h"

namespace pabound {
namespace {

// Lower end of the theta search for the exponential bound; the objective
// tends to -inf as theta -> 0.
constexpr double kThetaFloor = 1e-4;

BoundResult MakeResult(BoundKind kind, std::vector<BoundComponent> components) {
  BoundResult r;
  r.kind = kind;
  double total = 0.0;
  for (const BoundComponent& c : components) total += c.nats;
  r.value_nats = total;
  r.value_bits = total / std::numbers::ln2;
  r.components = std::move(components);
  return r;
}

bool UseClosedForm(const BoundParams& params, Route route) {
  const bool is_bsc = std::holds_alternative<BscSource>(params.source);
  switch (route) {
    case Route::kAuto: return is_bsc;
    case Route::kClosedForm:
      if (!is_bsc) {
        throw ParameterError("closed-form route requires a BSC source");
      }
      return true;
    case Route::kGeneral: return false;
  }
  return false;
}

const BscSource& Bsc(const BoundParams& params) {
  return std::get<BscSource>(params.source);
}

JointTable LetterTable(const BoundParams& params) {
  if (const auto* bsc = std::get_if<BscSource>(&params.source)) {
    return bsc->LetterTable();
  }
  return std::get<IidSource>(params.source).letter();
}

JointTable Materialized(const BoundParams& params) {
  if (const auto* bsc = std::get_if<BscSource>(&params.source)) {
    return IidSource(bsc->LetterTable(), bsc->n).Materialize();
  }
  return std::get<IidSource>(params.source).Materialize();
}

// Crossover folded into [0, 1/2]; a BSC(q) and a BSC(1-q) differ by a
// relabeling of Z.
double FoldedQ(double q) { return std::min(q, 1.0 - q); }

struct SpectralTerm {
  double nats = 0.0;
  int k = 0;
};

// H_s at `level` of the n-fold BSC relative to P_Z: the log-likelihood with
// k flips is k log((1-q)/q) - n log(1-q), and P{k flips or fewer} is the
// binomial CDF.
SpectralTerm BscSpectralTerm(const BscSource& bsc, double level,
                             QuantileConvention convention) {
  const double q = FoldedQ(bsc.q);
  if (q == 0.0) return {0.0, 0};
  const BinomialModel model(bsc.n, q);
  const int k = BinomCdfInverse(model, level, convention);
  const double log_odds = std::log1p(-q) - std::log(q);
  return {k * log_odds - bsc.n * std::log1p(-q), k};
}

// theta * H_{1+theta} of the n-fold BSC: -n log(q^(1+theta) + (1-q)^(1+theta)).
double BscScaledRenyi(const BscSource& bsc, double theta) {
  const double q = bsc.q;
  return -bsc.n * std::log(std::pow(q, 1.0 + theta) +
                           std::pow(1.0 - q, 1.0 + theta));
}

double SecurityLog(double eps) { return std::log(2.0 * eps / 3.0); }

double SpectralLowerLevel(const BoundParams& params) {
  const double level = params.eps - params.eta;
  if (!(level > 0.0)) {
    throw ParameterError("spectral lower bound needs eps - eta > 0");
  }
  return level;
}

// Reference marginals with cached spectral entropies. Marginals within a
// relative 1e-12 of a cached one reuse its entry.
class ReferenceCache {
 public:
  ReferenceCache(const JointTable& p, double level) : p_(p), level_(level) {}

  double Spectral(const MarginalTable& r) {
    for (const auto& [cached, value] : entries_) {
      if (Close(cached, r)) return value;
    }
    const double value = HSpectral(p_, r, level_).value;
    entries_.emplace_back(r, value);
    return value;
  }

 private:
  static bool Close(const MarginalTable& a, const MarginalTable& b) {
    for (std::size_t z = 0; z < a.z_size(); ++z) {
      const double d = std::abs(a.prob(z) - b.prob(z));
      if (d > 1e-12 * std::max(a.prob(z), b.prob(z))) return false;
    }
    return true;
  }

  const JointTable& p_;
  double level_;
  std::vector<std::pair<MarginalTable, double>> entries_;
};

std::vector<MarginalTable> FixedCandidates(const JointTable& p) {
  return {MarginalTable::ZMarginal(p), MarginalTable::Uniform(p.z_size())};
}

}  // namespace

std::string ToString(BoundKind kind) {
  switch (kind) {
    case BoundKind::kSpectralLower: return "spectral_lower";
    case BoundKind::kSpectralUpper: return "spectral_upper";
    case BoundKind::kExponentialLower: return "exponential_lower";
    case BoundKind::kHybridLower: return "hybrid_lower";
    case BoundKind::kGaussianApprox: return "gaussian_approx";
    case BoundKind::kSmoothMinLower: return "smooth_min_lower";
  }
  return "unknown";
}

BoundParams BoundParams::WithDefaults(Source source, double eps) {
  BoundParams p{eps, eps / 2.0, eps / 2.0, std::move(source)};
  p.Validate();
  return p;
}

int BoundParams::n() const {
  if (const auto* bsc = std::get_if<BscSource>(&source)) return bsc->n;
  return std::get<IidSource>(source).n();
}

void BoundParams::Validate() const {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ParameterError("eps must lie in (0, 1)");
  }
  if (!(eta > 0.0 && eta <= eps)) {
    throw ParameterError("eta must lie in (0, eps]");
  }
  if (!(zeta > 0.0 && zeta <= 1.0 - eps)) {
    throw ParameterError("zeta must lie in (0, 1 - eps]");
  }
}

MarginalTable OptimalRz(const JointTable& p, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw ParameterError("theta must lie in [0, 1]");
  }
  if (theta == 0.0) return MarginalTable::ZMarginal(p);
  const double s = 1.0 + theta;
  std::vector<double> log_w(p.z_size(), -kInf);
  double log_max = -kInf;
  for (std::size_t z = 0; z < p.z_size(); ++z) {
    double m = -kInf;
    for (std::size_t x = 0; x < p.x_size(); ++x) {
      m = std::max(m, p.log_weight(x, z));
    }
    if (m == -kInf) continue;
    double sum = 0.0;
    for (std::size_t x = 0; x < p.x_size(); ++x) {
      sum += std::exp(s * (p.log_weight(x, z) - m));
    }
    log_w[z] = m + std::log(sum) / s;
    log_max = std::max(log_max, log_w[z]);
  }
  if (log_max == -kInf) throw InvalidTableError("optimal R of a zero table");
  std::vector<double> w(p.z_size());
  double total = 0.0;
  for (std::size_t z = 0; z < w.size(); ++z) {
    w[z] = std::exp(log_w[z] - log_max);
    total += w[z];
  }
  for (double& v : w) v /= total;
  return MarginalTable(std::move(w));
}

double BinaryEntropy(double q) {
  if (q <= 0.0 || q >= 1.0) return 0.0;
  return -q * std::log(q) - (1.0 - q) * std::log1p(-q);
}

double BscDispersion(double q) {
  if (q <= 0.0 || q >= 1.0) return 0.0;
  const double log_odds = std::log1p(-q) - std::log(q);
  return q * (1.0 - q) * log_odds * log_odds;
}

BoundResult EllSpectralLower(const BoundParams& params, Route route) {
  params.Validate();
  const double level = SpectralLowerLevel(params);
  const double log_4eta2 = std::log(4.0 * params.eta * params.eta);
  if (UseClosedForm(params, route)) {
    const SpectralTerm s = BscSpectralTerm(Bsc(params), level, params.convention);
    BoundResult r = MakeResult(BoundKind::kSpectralLower,
                               {{"spectral_entropy", s.nats},
                                {"log_4eta2", log_4eta2},
                                {"constant", -1.0}});
    r.r_star = s.nats;
    r.k_star = s.k;
    return r;
  }
  const JointTable p = Materialized(params);
  double best = -kInf;
  for (const MarginalTable& ref : FixedCandidates(p)) {
    best = std::max(best, HSpectral(p, ref, level).value);
  }
  BoundResult r = MakeResult(
      BoundKind::kSpectralLower,
      {{"spectral_entropy", best}, {"log_4eta2", log_4eta2}, {"constant", -1.0}});
  r.r_star = best;
  return r;
}

BoundResult EllSpectralUpper(const BoundParams& params, Route route) {
  params.Validate();
  const double level = params.eps + params.zeta;
  if (!(level < 1.0)) {
    throw ParameterError("spectral upper bound needs eps + zeta < 1");
  }
  const double minus_log_zeta = -std::log(params.zeta);
  if (UseClosedForm(params, route)) {
    const SpectralTerm s = BscSpectralTerm(Bsc(params), level, params.convention);
    BoundResult r =
        MakeResult(BoundKind::kSpectralUpper,
                   {{"spectral_entropy", s.nats}, {"minus_log_zeta", minus_log_zeta}});
    r.r_star = s.nats;
    r.k_star = s.k;
    return r;
  }
  const JointTable p = Materialized(params);
  const double h = HSpectral(p, MarginalTable::ZMarginal(p), level).value;
  BoundResult r = MakeResult(
      BoundKind::kSpectralUpper,
      {{"spectral_entropy", h}, {"minus_log_zeta", minus_log_zeta}});
  r.r_star = h;
  return r;
}

BoundResult ExponentialLowerPhiForm(const JointTable& p, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  const double c = SecurityLog(eps);
  const double rho_floor = kThetaFloor / (1.0 + kThetaFloor);
  const ScalarMax best = MaximizeGridGolden(
      [&](double rho) { return (-Phi(rho, p).value + c) / rho; }, rho_floor,
      0.5);
  const double rho = best.arg;
  const double phi = Phi(rho, p).value;
  BoundResult r = MakeResult(BoundKind::kExponentialLower,
                             {{"phi_term", -phi / rho},
                              {"security_term", c / rho},
                              {"constant", -1.0}});
  r.theta_star = rho / (1.0 - rho);
  r.diagnostics.push_back({"rho_star", rho});
  return r;
}

BoundResult ExponentialLowerRenyiForm(const JointTable& p, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  const double c = SecurityLog(eps);
  const MarginalTable pz = MarginalTable::ZMarginal(p);
  const ScalarMax best = MaximizeGridGolden(
      [&](double theta) {
        return HRenyi(p, pz, theta).value + (1.0 + theta) / theta * c;
      },
      kThetaFloor, 1.0);
  const double theta = best.arg;
  BoundResult r = MakeResult(BoundKind::kExponentialLower,
                             {{"renyi_entropy", HRenyi(p, pz, theta).value},
                              {"security_term", (1.0 + theta) / theta * c},
                              {"constant", -1.0}});
  r.theta_star = theta;
  return r;
}

BoundResult EllExponentialLower(const BoundParams& params, Route route) {
  params.Validate();
  const double c = SecurityLog(params.eps);
  if (UseClosedForm(params, route)) {
    const BscSource& bsc = Bsc(params);
    const ScalarMax best = MaximizeGridGolden(
        [&](double theta) {
          return BscScaledRenyi(bsc, theta) / theta + (1.0 + theta) / theta * c;
        },
        kThetaFloor, 1.0);
    const double theta = best.arg;
    BoundResult r =
        MakeResult(BoundKind::kExponentialLower,
                   {{"renyi_entropy", BscScaledRenyi(bsc, theta) / theta},
                    {"security_term", (1.0 + theta) / theta * c},
                    {"constant", -1.0}});
    r.theta_star = theta;
    return r;
  }
  const JointTable p = Materialized(params);
  BoundResult phi_form = ExponentialLowerPhiForm(p, params.eps);
  BoundResult renyi_form = ExponentialLowerRenyiForm(p, params.eps);
  BoundResult& winner =
      phi_form.value_nats >= renyi_form.value_nats ? phi_form : renyi_form;
  BoundResult out = winner;
  out.diagnostics.push_back({"phi_form", phi_form.value_nats});
  out.diagnostics.push_back({"renyi_form", renyi_form.value_nats});
  return out;
}

BoundResult EllHybridLower(const BoundParams& params, Route route) {
  params.Validate();
  const double level = SpectralLowerLevel(params);
  const double log_4eta2 = std::log(4.0 * params.eta * params.eta);

  if (UseClosedForm(params, route)) {
    const BscSource& bsc = Bsc(params);
    // The binomial quantile does not depend on theta.
    const SpectralTerm s = BscSpectralTerm(bsc, level, params.convention);
    auto objective = [&](double theta) {
      return BscScaledRenyi(bsc, theta) + (1.0 - theta) * s.nats;
    };
    const ScalarMax best = MaximizeGridGolden(objective, 0.0, 1.0);
    const double theta = best.arg;
    BoundResult r = MakeResult(BoundKind::kHybridLower,
                               {{"renyi_term", BscScaledRenyi(bsc, theta)},
                                {"spectral_term", (1.0 - theta) * s.nats},
                                {"log_4eta2", log_4eta2},
                                {"constant", -1.0}});
    r.theta_star = theta;
    r.r_star = s.nats;
    r.k_star = s.k;
    return r;
  }

  const JointTable p = Materialized(params);
  ReferenceCache cache(p, level);
  const std::vector<MarginalTable> fixed = FixedCandidates(p);
  struct Terms {
    double renyi = 0.0;
    double spectral = 0.0;
  };
  auto best_terms = [&](double theta) {
    std::vector<MarginalTable> candidates = fixed;
    candidates.push_back(OptimalRz(p, theta));
    Terms best{0.0, -kInf};
    double best_value = -kInf;
    for (const MarginalTable& ref : candidates) {
      const double renyi =
          theta > 0.0 ? theta * HRenyi(p, ref, theta).value : 0.0;
      const double spectral = cache.Spectral(ref);
      const double value = renyi + (1.0 - theta) * spectral;
      if (value > best_value) {
        best_value = value;
        best = {renyi, spectral};
      }
    }
    return best;
  };
  const ScalarMax best = MaximizeGridGolden(
      [&](double theta) {
        const Terms t = best_terms(theta);
        return t.renyi + (1.0 - theta) * t.spectral;
      },
      0.0, 1.0);
  const double theta = best.arg;
  const Terms t = best_terms(theta);
  BoundResult r = MakeResult(BoundKind::kHybridLower,
                             {{"renyi_term", t.renyi},
                              {"spectral_term", (1.0 - theta) * t.spectral},
                              {"log_4eta2", log_4eta2},
                              {"constant", -1.0}});
  r.theta_star = theta;
  r.r_star = t.spectral;
  return r;
}

BoundResult GaussianApprox(const BoundParams& params, Route route) {
  params.Validate();
  const double n = params.n();
  double h = 0.0;
  double v = 0.0;
  if (UseClosedForm(params, route)) {
    h = BinaryEntropy(Bsc(params).q);
    v = BscDispersion(Bsc(params).q);
  } else {
    const JointTable letter = LetterTable(params);
    h = ConditionalEntropy(letter);
    v = Dispersion(letter);
  }
  const double second = v > 0.0
                            ? std::sqrt(n * v) * NormalQuantile(params.eps)
                            : 0.0;
  BoundResult r = MakeResult(BoundKind::kGaussianApprox,
                             {{"first_order", n * h}, {"second_order", second}});
  r.diagnostics.push_back({"dispersion", v});
  return r;
}

BoundResult EllSmoothMinLower(const BoundParams& params) {
  params.Validate();
  const JointTable p = Materialized(params);
  const double radius = (params.eps - params.eta) / 2.0;
  double best = -kInf;
  for (const MarginalTable& ref : FixedCandidates(p)) {
    best = std::max(best, SmoothHMinBar(p, ref, radius).value);
  }
  BoundResult r = MakeResult(
      BoundKind::kSmoothMinLower,
      {{"smooth_min_entropy", best},
       {"log_4eta2", std::log(4.0 * params.eta * params.eta)},
       {"constant", -1.0}});
  r.r_star = best;
  return r;
}

}  // namespace pabound
