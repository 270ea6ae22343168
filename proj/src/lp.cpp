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

#include "qnet/lp.hpp"

#include <cmath>

#include "qnet/errors.hpp"

namespace qnet::lp {

namespace {
constexpr double kEps = 1e-12;
}

Solution maximize(const std::vector<std::vector<double>>& a,
                  std::span<const double> b, std::span<const double> c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw UsageError("LP: b has the wrong length");
  for (const auto& row : a) {
    if (row.size() != n) throw UsageError("LP: ragged constraint matrix");
  }
  for (double v : b) {
    if (v < 0.0) throw UsageError("LP: right-hand side must be nonnegative");
  }

  // Tableau columns: n structural, m slack, then the right-hand side. The
  // last row holds reduced costs.
  const std::size_t cols = n + m + 1;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1.0;
    t[i][cols - 1] = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];

  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (t[m][j] < -kEps) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;

    std::size_t leave = m;
    double best = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= kEps) continue;
      const double ratio = t[i][cols - 1] / t[i][enter];
      if (leave == m || ratio < best - kEps ||
          (std::abs(ratio - best) <= kEps && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) return {Solution::Status::Unbounded, INFINITY, {}};

    const double pivot = t[leave][enter];
    for (double& v : t[leave]) v /= pivot;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = t[i][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  Solution sol{Solution::Status::Optimal, t[m][cols - 1],
               std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) sol.x[basis[i]] = t[i][cols - 1];
  }
  return sol;
}

}  // namespace qnet::lp
