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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qnet/netsim.hpp"

// Scheduling policies, capacity-region estimation and stability sweeps.
namespace qnet::control {

using netsim::Network;
using netsim::ServiceConfiguration;
using netsim::SlotState;

// Uniform choice among the maximal feasible configurations. Beyond the
// enumeration budget it builds a maximal configuration in random order.
ServiceConfiguration policy_random(const SlotState& state, const Network& net,
                                   Rng& rng);

// Longest queue first. Ties go to the lower commodity id, then the shorter
// path, then the lexicographically smaller path.
ServiceConfiguration policy_greedy(const SlotState& state, const Network& net);

// argmax over feasible configurations of sum_c Q_c * served_c; ties go to the
// lexicographically smallest configuration. Beyond the enumeration budget it
// falls back to policy_greedy when `fallback` is set, else throws SizeError.
ServiceConfiguration policy_maxweight(const SlotState& state,
                                      const Network& net, bool fallback);

class RandomPolicy final : public netsim::Policy {
 public:
  std::string name() const override { return "random"; }
  ServiceConfiguration decide(const SlotState& state, const Network& net,
                              Rng& rng) const override {
    return policy_random(state, net, rng);
  }
};

class GreedyPolicy final : public netsim::Policy {
 public:
  std::string name() const override { return "greedy"; }
  ServiceConfiguration decide(const SlotState& state, const Network& net,
                              Rng&) const override {
    return policy_greedy(state, net);
  }
};

class MaxWeightPolicy final : public netsim::Policy {
 public:
  explicit MaxWeightPolicy(bool fallback = true) : fallback_(fallback) {}
  std::string name() const override { return "maxweight"; }
  ServiceConfiguration decide(const SlotState& state, const Network& net,
                              Rng&) const override {
    return policy_maxweight(state, net, fallback_);
  }

 private:
  bool fallback_;
};

// "random", "greedy" or "maxweight"; throws UsageError otherwise.
std::unique_ptr<netsim::Policy> make_policy(const std::string& name,
                                            bool fallback = true);

struct HalfSpace {
  std::vector<double> normal;  // nonnegative
  double bound;                // normal . lambda <= bound
};

/// Arrival-rate region supportable with memoryless (cutoff 1) pairs.
///
/// Stored twice: as the Pareto-extreme expected service vectors, whose
/// convex hull closed under coordinate-wise dominance is the region, and as
/// the supporting half-spaces with nonnegative normals (the orthant
/// constraints lambda >= 0 are implicit).
struct CapacityRegion {
  std::vector<int> commodity_ids;
  std::vector<std::vector<double>> vertices;
  std::vector<HalfSpace> halfspaces;
  bool dominance_closed = true;

  // Largest t with t * direction in the region (linear program over the
  // vertices). Infinite for the zero direction.
  double max_scaling(std::span<const double> direction) const;
  // Membership through max_scaling.
  bool contains(std::span<const double> lambda, double tol = 1e-9) const;
  // Membership through the half-space description.
  bool satisfies_halfspaces(std::span<const double> lambda,
                            double tol = 1e-9) const;
};

// Enumerates every pair realization and every maximal configuration of it.
// Throws UnsupportedRegime unless the cutoff age is 1, SizeError when the
// instance is too large.
CapacityRegion estimate_capacity_region(const Network& net);

// Least-squares slope of the total backlog over the second half of a run.
double queue_growth_slope(const netsim::Metrics& metrics);

struct SweepOptions {
  std::int64_t horizon = 100000;
  std::vector<std::uint64_t> seeds{1};
  double slope_epsilon = 1e-3;
  // 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
};

struct SweepPoint {
  double rho = 0.0;
  std::vector<double> rates;
  std::vector<double> slopes;  // one per seed
  double mean_slope = 0.0;
  std::size_t stable_seeds = 0;
  // Stable when every seed's slope is below epsilon.
  bool stable = true;
};

/// Runs the network at arrival rates rho * direction for each rho and
/// classifies each point with the backlog slope test. Results are ordered
/// like `rho_grid` regardless of how work is spread across threads.
std::vector<SweepPoint> stability_sweep(const Network& net,
                                        const netsim::Policy& policy,
                                        std::span<const double> direction,
                                        std::span<const double> rho_grid,
                                        const SweepOptions& options);

}  // namespace qnet::control
