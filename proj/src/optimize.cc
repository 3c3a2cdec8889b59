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

#include "pabound/optimize.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pabound/errors.h"

namespace pabound {

ScalarMax MaximizeGridGolden(const std::function<double(double)>& f,
                             double lo, double hi,
                             GridGoldenOptions options) {
  if (!(lo <= hi) || options.grid_points < 2) {
    throw ParameterError("invalid maximization interval or grid");
  }
  const int m = options.grid_points;
  std::vector<double> xs(m);
  std::vector<double> fs(m);
  int best = 0;
  for (int i = 0; i < m; ++i) {
    xs[i] = i + 1 == m ? hi : lo + (hi - lo) * i / (m - 1);
    fs[i] = f(xs[i]);
    if (fs[i] > fs[best]) best = i;
  }
  ScalarMax result{xs[best], fs[best]};

  double a = xs[std::max(best - 1, 0)];
  double b = xs[std::min(best + 1, m - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > options.tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = fc >= fd ? c : d;
  const double fx = std::max(fc, fd);
  if (fx > result.value) result = {x, fx};
  return result;
}

}  // namespace pabound
