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

#include "pabound/numeric.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pabound/errors.h"

namespace pabound {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Terms more than this many nats below the largest one are dropped from a
// tail sum; e^-60 * 10^6 terms is far below double resolution.
constexpr double kTailCutoff = 60.0;

}  // namespace

BinomialModel::BinomialModel(int n, double q) : n_(n), q_(q) {
  if (n < 1) throw ParameterError("binomial n must be positive");
  if (!(q > 0.0 && q < 1.0)) {
    throw ParameterError("binomial q must lie in (0, 1)");
  }
  log_q_ = std::log(q);
  log_1mq_ = std::log1p(-q);
  mode_ = std::clamp(static_cast<int>(std::floor((n + 1) * q)), 0, n);
  log_factorial_.resize(static_cast<std::size_t>(n) + 1);
  long double acc = 0.0L;
  log_factorial_[0] = 0.0;
  for (int k = 1; k <= n; ++k) {
    acc += std::log(static_cast<long double>(k));
    log_factorial_[k] = static_cast<double>(acc);
  }
}

double BinomialModel::LogPmf(int k) const {
  if (k < 0 || k > n_) return kNegInf;
  return log_factorial_[n_] - log_factorial_[k] - log_factorial_[n_ - k] +
         k * log_q_ + (n_ - k) * log_1mq_;
}

LogProb LogBinomCdf(const BinomialModel& model, int k) {
  const int n = model.n();
  if (k < -1 || k > n) {
    throw RangeError("binomial CDF index " + std::to_string(k) +
                     " outside [-1, " + std::to_string(n) + "]");
  }
  if (k == -1) return {kNegInf};
  if (k == n) return {0.0};

  // Scale by the largest term among j <= k, which is at min(k, mode) since
  // the pmf is unimodal.
  const int peak = std::min(k, model.mode_);
  const double log_peak = model.LogPmf(peak);
  int lo = peak;
  while (lo > 0 && model.LogPmf(lo - 1) >= log_peak - kTailCutoff) --lo;
  double sum = 0.0;
  for (int j = lo; j <= k; ++j) {
    const double t = model.LogPmf(j) - log_peak;
    if (j > peak && t < -kTailCutoff) break;
    sum += std::exp(t);
  }
  return {std::min(0.0, log_peak + std::log(sum))};
}

int BinomCdfInverse(const BinomialModel& model, double eps,
                    QuantileConvention convention) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ParameterError("binomial quantile level must lie in (0, 1)");
  }
  // Invariant: B(lo) <= eps < B(hi), with B(-1) = 0 and B(n) = 1.
  int lo = -1;
  int hi = model.n();
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (std::exp(LogBinomCdf(model, mid).value) <= eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return convention == QuantileConvention::kFirstExceeding ? hi : lo;
}

double NormalCdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

namespace {

// Wichura's AS 241 (PPND16) rational approximations, relative accuracy
// about 1e-16 before refinement. Valid for 0 < p <= 0.5.
double LowerQuantileAs241(double p) {
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.495278852545925 + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = std::sqrt(-std::log(p));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) *
                    r + 0.24178072517745061177) * r +
                1.27045825245236838258) * r + 3.64784832476320460504) * r +
              5.7694972214606914055) * r + 4.6303378461565452959) * r +
           1.42343711074968357734) /
          (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) *
                    r + 0.0151986665636164571966) * r +
                0.14810397642748007459) * r + 0.68976733498510000455) * r +
              1.6763848301838038494) * r + 2.05319162663775882187) * r +
           1.0);
  } else {
    r -= 5.0;
    val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) *
                    r + 0.0012426609473880784386) * r +
                0.026532189526576123093) * r + 0.29656057182850489123) * r +
              1.7848265399172913358) * r + 5.4637849111641143699) * r +
           6.6579046435011037772) /
          (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) *
                    r + 1.8463183175100546818e-5) * r +
                7.868691311456132591e-4) * r + 0.0148753612908506148525) *
              r + 0.13692988092273580531) * r + 0.59983220655588793769) * r +
           1.0);
  }
  return -val;
}

}  // namespace

double NormalQuantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw RangeError("normal quantile needs 0 < p < 1");
  }
  // 1 - p is exact for p >= 1/2, so the upper half mirrors the lower.
  if (p > 0.5) return -NormalQuantile(1.0 - p);
  double x = LowerQuantileAs241(p);
  // One Halley step on Phi(x) - p.
  const double e = NormalCdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

}  // namespace pabound
