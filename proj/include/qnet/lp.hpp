// Copyright 2026 The qnetsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <limits>
#include <span>
#include <vector>

// Small dense linear programming.
namespace qnet::lp {

struct Solution {
  enum class Status { Optimal, Unbounded };
  Status status;
  double value;
  std::vector<double> x;
};

/// Maximizes c.x subject to A x <= b and x >= 0, for b >= 0 (the origin is
/// feasible). Primal simplex with Bland's rule. `a` is row-major, one row per
/// constraint. Throws UsageError on shape mismatch or negative b.
Solution maximize(const std::vector<std::vector<double>>& a,
                  std::span<const double> b, std::span<const double> c);

}  // namespace qnet::lp
