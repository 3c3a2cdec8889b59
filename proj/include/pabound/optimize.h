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

#ifndef PABOUND_OPTIMIZE_H_
#define PABOUND_OPTIMIZE_H_

#include <functional>

namespace pabound {

struct ScalarMax {
  double arg = 0.0;
  double value = 0.0;
};

struct GridGoldenOptions {
  int grid_points = 64;
  double tolerance = 1e-8;  // final bracket width
};

// Maximizes f on [lo, hi]: evaluates an evenly spaced grid including both
// endpoints, then runs golden-section search on the bracket around the best
// grid point. The objective need not be concave; the grid picks the basin.
// Ties go to the smaller argument. The result is never worse than the best
// grid point.
ScalarMax MaximizeGridGolden(const std::function<double(double)>& f,
                             double lo, double hi,
                             GridGoldenOptions options = {});

}  // namespace pabound

#endif  // PABOUND_OPTIMIZE_H_
