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

#include "pabound/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <thread>
#include <utility>

#include "pabound/bounds.h"
#include "pabound/entropy.h"
#include "pabound/errors.h"
#include "pabound/numeric.h"

namespace pabound::cli {
namespace {

// Evaluates f(0..count-1) on worker threads and returns results in index
// order.
template <typename T>
std::vector<T> OrderedMap(std::size_t count,
                          const std::function<T(std::size_t)>& f) {
  std::vector<T> out(count);
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(
                                   std::thread::hardware_concurrency(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < count; i += workers) out[i] = f(i);
    }));
  }
  for (auto& job : jobs) job.get();
  return out;
}

std::string FormatNumber(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string FormatLength(const std::optional<double>& nats,
                         const SweepSpec& spec) {
  if (!nats || !std::isfinite(*nats)) return "nan";
  double v = *nats;
  if (spec.clamp) v = std::max(v, 0.0);
  if (spec.units == Units::kBits) v /= std::log(2.0);
  return FormatNumber(v);
}

std::string FormatPlain(const std::optional<double>& v) {
  return v ? FormatNumber(*v) : "nan";
}

template <typename F>
std::optional<double> TryBound(F&& f, std::optional<double>* theta = nullptr) {
  try {
    const BoundResult r = f();
    if (theta) *theta = r.theta_star;
    return r.value_nats;
  } catch (const ParameterError&) {
    return std::nullopt;
  } catch (const RangeError&) {
    return std::nullopt;
  }
}

std::vector<double> ReadRealGrid(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>()};
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.is_object()) {
    return LogGrid(j.at("from").get<double>(), j.at("to").get<double>(),
                   j.at("count").get<int>());
  }
  throw UsageError("grid must be a number, a list or {from, to, count}");
}

std::vector<int> ReadIntGrid(const nlohmann::json& j) {
  if (j.is_number_integer()) return {j.get<int>()};
  if (j.is_array()) return j.get<std::vector<int>>();
  if (j.is_object()) {
    return LogIntGrid(j.at("from").get<int>(), j.at("to").get<int>(),
                      j.at("count").get<int>());
  }
  throw UsageError("n grid must be an integer, a list or {from, to, count}");
}

void Track(VerificationReport& report, double slack, double tolerance,
           nlohmann::json instance) {
  ++report.instances;
  if (std::isnan(slack)) slack = -kInf;
  if (slack < report.min_slack) {
    report.min_slack = slack;
    report.worst_instance = std::move(instance);
  }
  if (slack < -tolerance) report.pass = false;
}

void Merge(VerificationReport& into, const VerificationReport& from) {
  into.instances += from.instances;
  into.sampled = into.sampled || from.sampled;
  if (from.min_slack < into.min_slack) {
    into.min_slack = from.min_slack;
    into.worst_instance = from.worst_instance;
  }
  into.pass = into.pass && from.pass;
}

VerificationReport Named(const std::string& lemma) {
  VerificationReport r;
  r.lemma = lemma;
  return r;
}

const std::vector<double> kRhoGrid = {0.01, 0.1, 0.25, 0.4, 0.5};

// Leftover and exponential checks on one table over all output sizes.
void CheckFamilies(const JointTable& p, int m, int k_max, std::uint64_t seed,
                   const VerifyOptions& options, VerificationReport& leftover,
                   VerificationReport& exponential) {
  const std::vector<MarginalTable> probes = LeftoverProbeSet(p, seed);
  for (int k = 0; k <= k_max; ++k) {
    const ToeplitzFamily family(m, k);
    Merge(leftover, VerifyLeftover(family, p, probes, options));
    Merge(exponential, VerifyExponential(family, p, kRhoGrid, options));
  }
}

// Direct long double summation with exact binomial coefficients.
long double DirectBinomCdf(int n, double q, int k) {
  std::vector<std::uint64_t> row(n + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j > 0; --j) row[j] += row[j - 1];
  }
  long double sum = 0.0L;
  for (int j = 0; j <= k; ++j) {
    sum += static_cast<long double>(row[j]) *
           std::pow(static_cast<long double>(q), j) *
           std::pow(1.0L - static_cast<long double>(q), n - j);
  }
  return sum;
}

}  // namespace

Mode ParseMode(const std::string& s) {
  if (s == "bound") return Mode::kBound;
  if (s == "sweep-n") return Mode::kSweepN;
  if (s == "sweep-eps") return Mode::kSweepEps;
  if (s == "verify") return Mode::kVerify;
  throw UsageError("unknown mode '" + s + "'");
}

Units ParseUnits(const std::string& s) {
  if (s == "bits") return Units::kBits;
  if (s == "nats") return Units::kNats;
  throw UsageError("units must be bits or nats, got '" + s + "'");
}

Level ParseLevel(const std::string& s) {
  if (s == "quick") return Level::kQuick;
  if (s == "full") return Level::kFull;
  throw UsageError("level must be quick or full, got '" + s + "'");
}

void SweepSpec::Validate() const {
  if (eps.empty() || n.empty()) throw UsageError("empty grid");
  if (!(q >= 0.0 && q <= 1.0)) throw UsageError("q must lie in [0, 1]");
  for (double e : eps) {
    if (!(e > 0.0 && e < 1.0)) throw UsageError("eps must lie in (0, 1)");
  }
  for (int v : n) {
    if (v < 1) throw UsageError("n must be positive");
  }
  if (!(eta_frac > 0.0 && eta_frac <= 1.0)) {
    throw UsageError("eta fraction must lie in (0, 1]");
  }
  if (!(zeta_frac > 0.0)) throw UsageError("zeta fraction must be positive");
}

std::vector<double> LogGrid(double from, double to, int count) {
  if (count < 1 || !(from > 0.0) || !(to > 0.0)) {
    throw UsageError("log grid needs positive endpoints and count >= 1");
  }
  if (count == 1) return {from};
  std::vector<double> out(count);
  const double a = std::log10(from);
  const double b = std::log10(to);
  for (int i = 0; i < count; ++i) {
    out[i] = i + 1 == count ? to : std::pow(10.0, a + (b - a) * i / (count - 1));
  }
  out[0] = from;
  return out;
}

std::vector<int> LogIntGrid(int from, int to, int count) {
  if (from < 1 || to < 1) throw UsageError("n grid endpoints must be >= 1");
  std::vector<int> out;
  for (double v : LogGrid(from, to, count)) {
    const int r = static_cast<int>(std::lround(v));
    if (out.empty() || out.back() != r) out.push_back(r);
  }
  return out;
}

SweepSpec SpecFromJson(const nlohmann::json& j, SweepSpec base) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "mode") {
        base.mode = ParseMode(value.get<std::string>());
      } else if (key == "q") {
        base.q = value.get<double>();
      } else if (key == "eps") {
        base.eps = ReadRealGrid(value);
      } else if (key == "n") {
        base.n = ReadIntGrid(value);
      } else if (key == "eta_frac") {
        base.eta_frac = value.get<double>();
      } else if (key == "zeta_frac") {
        base.zeta_frac = value.get<double>();
      } else if (key == "units") {
        base.units = ParseUnits(value.get<std::string>());
      } else if (key == "clamp") {
        base.clamp = value.get<bool>();
      } else if (key == "output") {
        base.output = value.get<std::string>();
      } else if (key == "seed") {
        base.seed = value.get<std::uint64_t>();
      } else if (key == "level") {
        base.level = ParseLevel(value.get<std::string>());
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad config: ") + e.what());
  }
  return base;
}

SweepRow EvaluatePoint(double q, int n, double eps, double eta_frac,
                       double zeta_frac) {
  SweepRow row;
  row.n = n;
  row.eps = eps;
  row.eta = eta_frac * eps;
  row.zeta = zeta_frac * eps;
  std::optional<BoundParams> maybe;
  try {
    maybe = BoundParams::WithDefaults(BscSource(q, n), eps);
    maybe->eta = row.eta;
    maybe->zeta = row.zeta;
    maybe->Validate();
  } catch (const std::invalid_argument& e) {
    row.skip_reason = e.what();
    return row;
  }
  const BoundParams& params = *maybe;
  row.ell_s_low = TryBound([&] { return EllSpectralLower(params); });
  row.ell_e_low =
      TryBound([&] { return EllExponentialLower(params); }, &row.theta_star_e);
  row.ell_h_low =
      TryBound([&] { return EllHybridLower(params); }, &row.theta_star_h);
  row.ell_s_up = TryBound([&] { return EllSpectralUpper(params); });
  row.gauss = TryBound([&] { return GaussianApprox(params); });
  return row;
}

void WriteCsv(const SweepSpec& spec, const std::vector<SweepRow>& rows,
              std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    if (r.skip_reason) {
      out << "# skipped n=" << r.n << " eps=" << FormatNumber(r.eps) << ": "
          << *r.skip_reason << '\n';
      continue;
    }
    out << r.n << ',' << FormatNumber(r.eps) << ',' << FormatNumber(spec.q)
        << ',' << FormatNumber(r.eta) << ',' << FormatNumber(r.zeta) << ','
        << FormatLength(r.ell_s_low, spec) << ','
        << FormatLength(r.ell_e_low, spec) << ','
        << FormatLength(r.ell_h_low, spec) << ','
        << FormatLength(r.ell_s_up, spec) << ','
        << FormatLength(r.gauss, spec) << ',' << FormatPlain(r.theta_star_e)
        << ',' << FormatPlain(r.theta_star_h) << '\n';
  }
}

void RunSweepN(const SweepSpec& spec, std::ostream& out) {
  spec.Validate();
  const double eps = spec.eps.front();
  const auto rows = OrderedMap<SweepRow>(spec.n.size(), [&](std::size_t i) {
    return EvaluatePoint(spec.q, spec.n[i], eps, spec.eta_frac,
                         spec.zeta_frac);
  });
  WriteCsv(spec, rows, out);
}

void RunSweepEps(const SweepSpec& spec, std::ostream& out) {
  spec.Validate();
  const int n = spec.n.front();
  const auto rows = OrderedMap<SweepRow>(spec.eps.size(), [&](std::size_t i) {
    return EvaluatePoint(spec.q, n, spec.eps[i], spec.eta_frac,
                         spec.zeta_frac);
  });
  WriteCsv(spec, rows, out);
}

void RunBound(const SweepSpec& spec, std::ostream& out) {
  spec.Validate();
  WriteCsv(spec,
           {EvaluatePoint(spec.q, spec.n.front(), spec.eps.front(),
                          spec.eta_frac, spec.zeta_frac)},
           out);
}

nlohmann::json VerifyReport(const VerifyConfig& config) {
  const bool full = config.level == Level::kFull;
  const int m_cap = full ? 8 : 4;
  const int instances = full ? 200 : 50;
  const VerifyOptions& options = config.options;

  VerificationReport leftover = Named("leftover_hash");
  VerificationReport exponential = Named("exponential");

  // BSC products: X is the n-bit input, Z the n-bit output.
  for (int n = 1; n <= 4; ++n) {
    for (double q : {0.11, 0.25}) {
      const JointTable p = IidSource(BscSource(q, n).LetterTable(), n).Materialize();
      CheckFamilies(p, n, n, config.seed + n, options, leftover, exponential);
    }
  }
  // Random tables over m-bit inputs, k <= 3 output bits.
  for (int i = 0; i < instances; ++i) {
    InstanceGenerator gen(config.seed * 0x9E3779B97F4A7C15ull + 7919u * i);
    const int m = 1 + static_cast<int>(gen.UniformIndex(m_cap));
    const std::size_t zs = 1 + gen.UniformIndex(full ? 8 : 4);
    const JointTable p =
        gen.Table(std::size_t{1} << m, zs, i % 3 == 2 ? 0.3 : 0.0);
    CheckFamilies(p, m, std::min(m, 3), config.seed + 1000 + i, options,
                  leftover, exponential);
  }

  AppendixConfig appendix;
  appendix.instance_count = instances;
  appendix.seed = config.seed;
  std::vector<VerificationReport> reports = {leftover, exponential};
  for (const auto& r : VerifyAppendixLemmas(appendix)) reports.push_back(r);

  // Markov bound on the spectrum: H_s^{delta} >= H_{1+theta} + log(delta)/theta.
  VerificationReport markov = Named("spectral_markov");
  for (int i = 0; i < instances; ++i) {
    InstanceGenerator gen(config.seed ^ (0xA5A5A5A5ull + i));
    const std::size_t xs = 2 + gen.UniformIndex(7);
    const std::size_t zs = 2 + gen.UniformIndex(7);
    const JointTable p = gen.Table(xs, zs);
    const MarginalTable r = gen.Reference(zs);
    for (double delta : {1e-6, 0.01, 0.2}) {
      for (double theta : {0.1, 0.5, 1.0}) {
        const double lhs = HSpectral(p, r, delta).value;
        const double rhs = HRenyi(p, r, theta).value + std::log(delta) / theta;
        Track(markov, lhs - rhs, 1e-9,
              {{"table", ToJson(p)},
               {"reference", std::vector<double>(r.probs().begin(),
                                                 r.probs().end())},
               {"delta", delta},
               {"theta", theta}});
      }
    }
  }
  reports.push_back(markov);

  // Binomial CDF against direct summation, and quantile round trips.
  VerificationReport cdf = Named("binomial_cdf");
  VerificationReport quantile = Named("binomial_quantile");
  for (int n = 1; n <= 30; ++n) {
    for (double q : {0.11, 0.25, 0.5}) {
      const BinomialModel model(n, q);
      for (int k = 0; k <= n; ++k) {
        const long double exact = DirectBinomCdf(n, q, k);
        const double got = std::exp(LogBinomCdf(model, k).value);
        const double rel =
            static_cast<double>(std::fabs((got - exact) / exact));
        Track(cdf, 1e-12 - rel, 0.0, {{"n", n}, {"q", q}, {"k", k}});
        const double level = std::exp(LogBinomCdf(model, k - 1).value);
        if (level > 0.0 && level < 1.0 && got > level) {
          const int back = BinomCdfInverse(model, level);
          Track(quantile, back == k ? 0.0 : -1.0, 0.0,
                {{"n", n}, {"q", q}, {"k", k}, {"inverse", back}});
        }
      }
    }
  }
  reports.push_back(cdf);
  reports.push_back(quantile);

  nlohmann::json out;
  out["seed"] = config.seed;
  out["level"] = full ? "full" : "quick";
  bool pass = true;
  out["reports"] = nlohmann::json::array();
  for (const auto& r : reports) {
    pass = pass && r.pass;
    out["reports"].push_back(ToJson(r));
  }
  out["pass"] = pass;
  return out;
}

int RunVerify(const VerifyConfig& config, std::ostream& out) {
  const nlohmann::json report = VerifyReport(config);
  out << report.dump(2) << '\n';
  return report["pass"].get<bool>() ? kExitOk : kExitVerificationFailed;
}

}  // namespace pabound::cli
