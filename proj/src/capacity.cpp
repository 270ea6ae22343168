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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "qnet/control.hpp"
#include "qnet/errors.hpp"
#include "qnet/lp.hpp"

namespace qnet::control {

namespace {

using Point = std::vector<double>;

constexpr double kTol = 1e-12;
constexpr std::size_t kMaxEdges = 16;
constexpr std::size_t kPruneAbove = 64;
constexpr std::size_t kMaxFacetCombinations = 2000000;

// Largest t such that t * direction lies in the dominance closure of
// conv(points) (the origin is always included).
double scaling_lp(const std::vector<Point>& points,
                  std::span<const double> direction) {
  const std::size_t d = direction.size();
  bool zero = true;
  for (double v : direction) {
    if (v < 0.0) throw UsageError("direction must be nonnegative");
    if (v > 0.0) zero = false;
  }
  if (zero) return INFINITY;
  if (points.empty()) return 0.0;
  // Variables: theta_1..theta_k, t. Rows: t*dir_i - sum theta_v v_i <= 0 and
  // sum theta_v <= 1.
  const std::size_t k = points.size();
  std::vector<std::vector<double>> a(d + 1, std::vector<double>(k + 1, 0.0));
  std::vector<double> b(d + 1, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t v = 0; v < k; ++v) a[i][v] = -points[v][i];
    a[i][k] = direction[i];
  }
  for (std::size_t v = 0; v < k; ++v) a[d][v] = 1.0;
  b[d] = 1.0;
  std::vector<double> c(k + 1, 0.0);
  c[k] = 1.0;
  const auto sol = lp::maximize(a, b, c);
  return sol.status == lp::Solution::Status::Unbounded ? INFINITY : sol.value;
}

bool dominated_by(const Point& a, const Point& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i] + kTol) return false;
  }
  return true;
}

// Drops duplicates and points dominated by another point.
void prune_dominated(std::vector<Point>& pts) {
  std::sort(pts.begin(), pts.end(), std::greater<>());
  std::vector<Point> kept;
  for (auto& p : pts) {
    bool drop = false;
    for (const auto& q : kept) {
      if (dominated_by(p, q)) {
        drop = true;
        break;
      }
    }
    if (!drop) kept.push_back(std::move(p));
  }
  pts = std::move(kept);
}

// Drops points inside the dominance closure of the hull of the others.
void prune_interior(std::vector<Point>& pts) {
  for (std::size_t i = 0; i < pts.size();) {
    std::vector<Point> others;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != i) others.push_back(pts[j]);
    }
    if (scaling_lp(others, pts[i]) >= 1.0 - 1e-10) {
      pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
}

std::vector<HalfSpace> facets(const std::vector<Point>& vertices,
                              std::size_t d) {
  std::vector<HalfSpace> out;
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < d; ++i) {
    double mx = 0.0;
    for (const auto& v : vertices) mx = std::max(mx, v[i]);
    if (mx > kTol) {
      active.push_back(i);
    } else {
      HalfSpace h{std::vector<double>(d, 0.0), 0.0};
      h.normal[i] = 1.0;
      out.push_back(std::move(h));
    }
  }
  const std::size_t k = active.size();
  if (k == 0) return out;

  // Vertices restricted to active coordinates, with every coordinate
  // projection, span the full-dimensional region in that subspace.
  std::vector<Eigen::VectorXd> pts;
  for (const auto& v : vertices) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      Eigen::VectorXd p(static_cast<Eigen::Index>(k));
      for (std::size_t j = 0; j < k; ++j) {
        p(static_cast<Eigen::Index>(j)) = (mask >> j) & 1 ? 0.0 : v[active[j]];
      }
      bool dup = false;
      for (const auto& q : pts) {
        if ((q - p).cwiseAbs().maxCoeff() <= kTol) {
          dup = true;
          break;
        }
      }
      if (!dup) pts.push_back(std::move(p));
    }
  }

  double combos = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    combos *= static_cast<double>(pts.size() - j) / static_cast<double>(j + 1);
  }
  if (combos > static_cast<double>(kMaxFacetCombinations)) {
    throw SizeError("capacity region has too many vertices for facet search");
  }

  std::vector<std::pair<Eigen::VectorXd, double>> found;
  std::vector<std::size_t> idx(k);
  const auto ik = static_cast<Eigen::Index>(k);
  auto consider = [&] {
    Eigen::MatrixXd m(ik, ik + 1);
    for (Eigen::Index r = 0; r < ik; ++r) {
      m.row(r).head(ik) = pts[idx[static_cast<std::size_t>(r)]].transpose();
      m(r, ik) = -1.0;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-10);
    if (lu.dimensionOfKernel() != 1) return;
    Eigen::VectorXd ker = lu.kernel().col(0);
    Eigen::VectorXd n = ker.head(ik);
    double b = ker(ik);
    const double scale = n.cwiseAbs().maxCoeff();
    if (scale <= 1e-10) return;
    n /= scale;
    b /= scale;
    bool above = false;
    bool below = false;
    for (const auto& p : pts) {
      const double s = n.dot(p) - b;
      if (s > 1e-9) above = true;
      if (s < -1e-9) below = true;
    }
    if (above && below) return;
    if (above) {
      n = -n;
      b = -b;
    }
    if (n.minCoeff() < -1e-9) return;  // orthant face
    for (Eigen::Index j = 0; j < ik; ++j) n(j) = std::max(n(j), 0.0);
    for (const auto& [fn, fb] : found) {
      if ((fn - n).cwiseAbs().maxCoeff() <= 1e-9 && std::abs(fb - b) <= 1e-9) {
        return;
      }
    }
    found.emplace_back(n, b);
  };
  // Lexicographic walk over k-subsets.
  for (std::size_t j = 0; j < k; ++j) idx[j] = j;
  if (pts.size() >= k) {
    for (;;) {
      consider();
      std::size_t j = k;
      while (j > 0 && idx[j - 1] == pts.size() - k + (j - 1)) --j;
      if (j == 0) break;
      ++idx[j - 1];
      for (std::size_t l = j; l < k; ++l) idx[l] = idx[l - 1] + 1;
    }
  }
  for (const auto& [n, b] : found) {
    HalfSpace h{std::vector<double>(d, 0.0), b};
    for (std::size_t j = 0; j < k; ++j) {
      h.normal[active[j]] = n(static_cast<Eigen::Index>(j));
    }
    out.push_back(std::move(h));
  }
  std::sort(out.begin(), out.end(), [](const HalfSpace& a, const HalfSpace& b) {
    if (a.normal != b.normal) return a.normal > b.normal;
    return a.bound < b.bound;
  });
  return out;
}

}  // namespace

double CapacityRegion::max_scaling(std::span<const double> direction) const {
  if (direction.size() != commodity_ids.size()) {
    throw UsageError("rate vector has " + std::to_string(direction.size()) +
                     " entries, expected " +
                     std::to_string(commodity_ids.size()));
  }
  return scaling_lp(vertices, direction);
}

bool CapacityRegion::contains(std::span<const double> lambda,
                              double tol) const {
  for (double v : lambda) {
    if (v < -tol) return false;
  }
  std::vector<double> clipped(lambda.begin(), lambda.end());
  for (double& v : clipped) v = std::max(v, 0.0);
  return max_scaling(clipped) >= 1.0 - tol;
}

bool CapacityRegion::satisfies_halfspaces(std::span<const double> lambda,
                                          double tol) const {
  if (lambda.size() != commodity_ids.size()) {
    throw UsageError("rate vector has the wrong number of entries");
  }
  for (double v : lambda) {
    if (v < -tol) return false;
  }
  for (const auto& h : halfspaces) {
    double s = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) s += h.normal[i] * lambda[i];
    if (s > h.bound + tol) return false;
  }
  return true;
}

CapacityRegion estimate_capacity_region(const Network& net) {
  const auto& params = net.params();
  if (params.fidelity.cutoff_age != std::optional<std::int64_t>{1}) {
    throw UnsupportedRegime(
        "capacity estimation requires cutoff_age = 1; use a stability sweep "
        "to bound other regimes");
  }
  const auto& edges = net.topology().edges();
  if (edges.size() > kMaxEdges) {
    throw SizeError("capacity estimation supports at most " +
                    std::to_string(kMaxEdges) + " edges");
  }
  const std::size_t d = net.commodities().size();
  CapacityRegion region;
  for (const auto& c : net.commodities()) region.commodity_ids.push_back(c.id);

  std::vector<Point> acc{Point(d, 0.0)};
  const std::uint64_t saturated = std::max<std::uint64_t>(edges.size(), 1);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges.size()); ++mask) {
    double prob = 1.0;
    SlotState state = netsim::initial_state(net);
    state.queues.assign(d, saturated);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const bool up = (mask >> e) & 1;
      prob *= up ? edges[e].p_gen : 1.0 - edges[e].p_gen;
      if (up) {
        state.live_lles.push_back({state.next_lle_id++, e, 0, edges[e].f0});
      }
    }
    if (prob == 0.0) continue;

    const auto configs = netsim::feasible_configurations(net, state);
    std::vector<Point> services;
    for (const auto& cfg : configs) {
      const auto served = cfg.served_per_commodity(d);
      services.emplace_back(served.begin(), served.end());
    }
    prune_dominated(services);

    std::vector<Point> next;
    next.reserve(acc.size() * services.size());
    for (const auto& v : acc) {
      for (const auto& s : services) {
        Point p(d);
        for (std::size_t i = 0; i < d; ++i) p[i] = v[i] + prob * s[i];
        next.push_back(std::move(p));
      }
    }
    prune_dominated(next);
    if (next.size() > kPruneAbove) prune_interior(next);
    acc = std::move(next);
  }
  prune_dominated(acc);
  prune_interior(acc);
  if (acc.empty()) acc.push_back(Point(d, 0.0));
  std::sort(acc.begin(), acc.end());
  region.vertices = std::move(acc);
  region.halfspaces = facets(region.vertices, d);
  return region;
}

}  // namespace qnet::control
