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

// Log-domain binomial CDF and quantile, and the standard normal CDF and
// quantile. Tail sums always run from the k = 0 side; no complementary
// subtraction is used, so lower tails down to 1e-15 keep full relative
// precision at n up to 10^6.

#ifndef PABOUND_NUMERIC_H_
#define PABOUND_NUMERIC_H_

#include <vector>

namespace pabound {

// Log of a probability in nats; -inf allowed.
struct LogProb {
  double value = 0.0;
};

// Binomial(n, q) with 0 < q < 1. Holds its own log-factorial table of n+1
// entries, so a model is immutable and safe to share between threads.
class BinomialModel {
 public:
  BinomialModel(int n, double q);

  int n() const { return n_; }
  double q() const { return q_; }

  double LogPmf(int k) const;

 private:
  int n_;
  double q_;
  double log_q_;
  double log_1mq_;
  int mode_;
  std::vector<double> log_factorial_;

  friend LogProb LogBinomCdf(const BinomialModel& model, int k);
};

// log B(n, q, k) = log sum_{j<=k} C(n,j) q^j (1-q)^(n-j). k = -1 gives -inf.
// Throws RangeError for k < -1 or k > n.
LogProb LogBinomCdf(const BinomialModel& model, int k);

enum class QuantileConvention {
  // 1 + max{k >= -1 : B(k) <= eps}: the first k with B(k) > eps.
  kFirstExceeding,
  // max{k >= -1 : B(k) <= eps}, one less; for sensitivity checks only.
  kLastNotExceeding,
};

// Binomial quantile B^{-1}(n, q, eps) for eps in (0, 1), by bisection on k.
int BinomCdfInverse(
    const BinomialModel& model, double eps,
    QuantileConvention convention = QuantileConvention::kFirstExceeding);

double NormalCdf(double x);
// Throws RangeError unless 0 < p < 1.
double NormalQuantile(double p);

}  // namespace pabound

#endif  // PABOUND_NUMERIC_H_
