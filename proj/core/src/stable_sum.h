// Copyright 2026 The asdpool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASDPOOL_SRC_STABLE_SUM_H_
#define ASDPOOL_SRC_STABLE_SUM_H_

#include <algorithm>
#include <cmath>
#include <span>

namespace asdpool::internal {

// Neumaier-compensated sum in the given order.
inline double CompensatedSum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      carry += (sum - t) + v;
    else
      carry += (v - t) + sum;
    sum = t;
  }
  return sum + carry;
}

// Sorts `values` in place, then sums. The result depends only on the multiset
// of inputs, never on their order.
inline double OrderFreeSum(std::span<double> values) {
  std::sort(values.begin(), values.end());
  return CompensatedSum(values);
}

}  // namespace asdpool::internal

#endif  // ASDPOOL_SRC_STABLE_SUM_H_
