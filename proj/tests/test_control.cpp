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

#include <gtest/gtest.h>

#include <cmath>

#include "nets.hpp"
#include "qnet/config.hpp"
#include "qnet/control.hpp"
#include "qnet/errors.hpp"
#include "qnet/lp.hpp"

namespace qnet::control {
namespace {

using netsim::EdgeId;
using netsim::Network;
using netsim::SlotState;
using nets::chain;
using nets::cutoff;

std::string fixture(const std::string& name) {
  return std::string(QNET_SOURCE_DIR) + "/configs/" + name;
}

SlotState full_state(const Network& net, std::vector<std::uint64_t> queues) {
  SlotState s;
  s.queues = std::move(queues);
  const auto& edges = net.topology().edges();
  for (EdgeId e = 0; e < edges.size(); ++e) {
    if (edges[e].p_gen > 0) s.live_lles.push_back({s.next_lle_id++, e, 0, edges[e].f0});
  }
  return s;
}

// a-b-c, commodity 1 a->c over both pairs, commodity 2 a->b over the first
Network contention() {
  return Network(chain({1.0, 1.0}), {{1, 0, 2, 0.5}, {2, 0, 1, 0.5}}, cutoff(1));
}

TEST(Random, EmptyWhenNoPairs) {
  Network net = nets::line2(0.5, 0.2);
  SlotState s = netsim::initial_state(net);
  s.queues = {3};
  Rng rng(1);
  EXPECT_TRUE(policy_random(s, net, rng).assignments.empty());
}

TEST(Random, ForcedChoice) {
  Network net = nets::line2(1.0, 0.2);
  SlotState s = full_state(net, {1});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    EXPECT_EQ(policy_random(s, net, rng).assignments.size(), 1u);
  }
}

TEST(Random, SymmetricOptionsSplitEvenly) {
  Network net = contention();
  SlotState s = full_state(net, {1, 1});
  Rng rng(2024);
  int first = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    auto c = policy_random(s, net, rng);
    ASSERT_EQ(c.assignments.size(), 1u);
    first += c.assignments[0].commodity == 0;
  }
  EXPECT_NEAR(static_cast<double>(first) / draws, 0.5, 0.02);
}

TEST(Random, FallsBackBeyondBudget) {
  netsim::SimParams p = cutoff(1);
  p.enumeration_budget = 1;
  Network net(chain({1.0, 1.0}), {{1, 0, 2, 0.5}, {2, 0, 1, 0.5}}, p);
  SlotState s = full_state(net, {1, 1});
  Rng rng(3);
  auto c = policy_random(s, net, rng);
  EXPECT_EQ(c.assignments.size(), 1u);
  EXPECT_EQ(netsim::check_configuration(net, s, c), "");
}

TEST(Greedy, LongestQueueFirst) {
  Network net = contention();
  auto c = policy_greedy(full_state(net, {5, 0}), net);
  ASSERT_EQ(c.assignments.size(), 1u);
  EXPECT_EQ(c.assignments[0].commodity, 0u);
  auto d = policy_greedy(full_state(net, {1, 4}), net);
  ASSERT_EQ(d.assignments.size(), 1u);
  EXPECT_EQ(d.assignments[0].commodity, 1u);
}

TEST(Greedy, TiesGoToLowerId) {
  Network net = contention();
  auto c = policy_greedy(full_state(net, {2, 2}), net);
  ASSERT_EQ(c.assignments.size(), 1u);
  EXPECT_EQ(c.assignments[0].commodity, 0u);
}

TEST(Greedy, Fig5Contention) {
  // queue 2 (c1->c2) holds 3 and queue 3 (c3->c2) holds 1; they share B-c2
  auto cfg = cli::load_config(fixture("fig5.json"));
  Network net = cfg.network();
  SlotState s = full_state(net, {0, 3, 1});
  auto c = policy_greedy(s, net);
  ASSERT_EQ(c.assignments.size(), 1u);
  EXPECT_EQ(c.assignments[0].commodity, 1u);
  EXPECT_EQ(c.assignments[0].lle_ids.size(), 3u);
  auto flipped = policy_greedy(full_state(net, {0, 1, 3}), net);
  ASSERT_EQ(flipped.assignments.size(), 1u);
  EXPECT_EQ(flipped.assignments[0].commodity, 2u);
}

TEST(MaxWeight, EmptyQueuesGiveEmpty) {
  Network net = contention();
  EXPECT_TRUE(policy_maxweight(full_state(net, {0, 0}), net, true).assignments.empty());
}

TEST(MaxWeight, ServesPositiveQueue) {
  Network net = nets::line2(1.0, 0.2);
  EXPECT_EQ(policy_maxweight(full_state(net, {1}), net, true).assignments.size(), 1u);
}

TEST(MaxWeight, PicksHeavierQueue) {
  Network net = contention();
  auto c = policy_maxweight(full_state(net, {10, 1}), net, true);
  ASSERT_EQ(c.assignments.size(), 1u);
  EXPECT_EQ(c.assignments[0].commodity, 0u);
  auto d = policy_maxweight(full_state(net, {1, 10}), net, true);
  EXPECT_EQ(d.assignments[0].commodity, 1u);
}

TEST(MaxWeight, ScaleInvariant) {
  auto cfg = cli::load_config(fixture("fig5.json"));
  Network net = cfg.network();
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint64_t> q(3);
    for (auto& v : q) v = rng.below(6);
    SlotState s = full_state(net, q);
    // drop a random subset of pairs so different slots look different
    std::erase_if(s.live_lles, [&](const netsim::LLE&) { return rng.bernoulli(0.3); });
    const auto base = policy_maxweight(s, net, true);
    for (std::uint64_t k : {2u, 3u, 7u}) {
      SlotState scaled = s;
      for (auto& v : scaled.queues) v *= k;
      // scaling also lets a commodity take more pairs, so compare only when
      // the queues already exceed the available pairs
      bool saturated = true;
      for (auto v : s.queues) saturated = saturated && (v == 0 || v >= s.live_lles.size());
      if (!saturated) continue;
      EXPECT_EQ(policy_maxweight(scaled, net, true), base);
    }
  }
}

TEST(MaxWeight, BudgetWithoutFallback) {
  netsim::SimParams p = cutoff(1);
  p.enumeration_budget = 1;
  Network net(chain({1.0, 1.0}), {{1, 0, 2, 0.5}, {2, 0, 1, 0.5}}, p);
  SlotState s = full_state(net, {3, 1});
  EXPECT_THROW(policy_maxweight(s, net, false), SizeError);
  EXPECT_EQ(policy_maxweight(s, net, true), policy_greedy(s, net));
}

TEST(Policies, Factory) {
  EXPECT_EQ(make_policy("random")->name(), "random");
  EXPECT_EQ(make_policy("greedy")->name(), "greedy");
  EXPECT_EQ(make_policy("maxweight")->name(), "maxweight");
  EXPECT_THROW(make_policy("fifo"), UsageError);
}

TEST(Lp, SmallProblems) {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6
  auto s = lp::maximize({{1, 2}, {3, 1}}, std::vector<double>{4, 6},
                        std::vector<double>{1, 1});
  ASSERT_EQ(s.status, lp::Solution::Status::Optimal);
  EXPECT_NEAR(s.value, 2.8, 1e-12);
  EXPECT_NEAR(s.x[0], 1.6, 1e-12);
  EXPECT_NEAR(s.x[1], 1.2, 1e-12);
  auto u = lp::maximize({{1, -1}}, std::vector<double>{1}, std::vector<double>{0, 1});
  EXPECT_EQ(u.status, lp::Solution::Status::Unbounded);
  auto z = lp::maximize({{1, 1}}, std::vector<double>{0}, std::vector<double>{1, 1});
  EXPECT_NEAR(z.value, 0.0, 1e-12);
}

TEST(Capacity, SingleEdge) {
  for (double p : {0.3, 0.5, 1.0}) {
    Network net(chain({p}), {{1, 0, 1, 0.1}}, cutoff(1));
    auto region = estimate_capacity_region(net);
    ASSERT_EQ(region.vertices.size(), 1u);
    EXPECT_NEAR(region.vertices[0][0], p, 1e-12);
    const double dir[1] = {1.0};
    EXPECT_NEAR(region.max_scaling(dir), p, 1e-12);
    const double in[1] = {p};
    const double out[1] = {p + 1e-6};
    EXPECT_TRUE(region.contains(in));
    EXPECT_FALSE(region.contains(out));
  }
}

TEST(Capacity, TwoHopIsPSquared) {
  for (double p : {0.5, 0.8}) {
    auto region = estimate_capacity_region(nets::line2(p, 0.1));
    const double dir[1] = {1.0};
    EXPECT_NEAR(region.max_scaling(dir), p * p, 1e-12);
  }
}

TEST(Capacity, TwoHopWithSingleHopCommodity) {
  const double p = 0.5;
  Network net(chain({p, p}), {{1, 0, 2, 0.1}, {2, 0, 1, 0.1}}, cutoff(1));
  auto region = estimate_capacity_region(net);
  // corner points: all-e2e (p^2, p(1-p)) and all-one-hop (0, p)
  const double a[2] = {p * p, p * (1 - p)};
  const double b[2] = {0.0, p};
  EXPECT_TRUE(region.contains(a));
  EXPECT_TRUE(region.contains(b));
  const double beyond_a[2] = {p * p + 1e-6, p * (1 - p)};
  const double beyond_b[2] = {1e-6, p};
  EXPECT_FALSE(region.contains(beyond_a));
  EXPECT_FALSE(region.contains(beyond_b));
  ASSERT_EQ(region.vertices.size(), 2u);
  // the facet through both corners is l1 + l2 <= p
  bool found = false;
  for (const auto& h : region.halfspaces) {
    if (std::abs(h.normal[0] - h.normal[1]) < 1e-9 && h.normal[0] > 0) {
      EXPECT_NEAR(h.bound / h.normal[0], p, 1e-9);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Capacity, CornerAgreesWithLongSimulation) {
  // along (1,1) both facets meet at t = p^2 = p/2 = 0.25
  const double p = 0.5;
  Network net(chain({p, p}), {{1, 0, 2, 0.1}, {2, 0, 1, 0.1}}, cutoff(1));
  const double dir[2] = {1.0, 1.0};
  const double t = estimate_capacity_region(net).max_scaling(dir);
  EXPECT_NEAR(t, 0.25, 1e-12);
  MaxWeightPolicy policy;
  SweepOptions opt;
  opt.horizon = 1000000;
  opt.seeds = {3};
  const double scaled[2] = {t, t};
  const double rho[2] = {0.97, 1.03};
  auto pts = stability_sweep(net, policy, scaled, rho, opt);
  EXPECT_TRUE(pts[0].stable) << pts[0].mean_slope;
  EXPECT_FALSE(pts[1].stable) << pts[1].mean_slope;
}

TEST(Capacity, DownwardClosedAndHalfspacesAgree) {
  auto cfg = cli::load_config(fixture("fig5.json"));
  netsim::Topology topo = cfg.topology;
  // give B-C a chance so all three commodities matter
  std::vector<netsim::Edge> edges = topo.edges();
  for (auto& e : edges) e.p_gen = 0.6;
  Network net(netsim::Topology(topo.nodes(), edges), cfg.commodities, cfg.params);
  auto region = estimate_capacity_region(net);
  Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> l(3);
    for (auto& v : l) v = 0.7 * rng.uniform();
    const bool in = region.contains(l);
    EXPECT_EQ(in, region.satisfies_halfspaces(l, 1e-7)) << l[0] << "," << l[1] << "," << l[2];
    if (in) {
      std::vector<double> lower = l;
      for (auto& v : lower) v *= rng.uniform();
      EXPECT_TRUE(region.contains(lower));
    }
  }
  const double origin[3] = {0, 0, 0};
  EXPECT_TRUE(region.contains(origin));
}

TEST(Capacity, Fig5QueueOneHasNoCapacity) {
  auto cfg = cli::load_config(fixture("fig5.json"));
  auto region = estimate_capacity_region(cfg.network());
  const double only_one[3] = {1.0, 0.0, 0.0};
  EXPECT_NEAR(region.max_scaling(only_one), 0.0, 1e-12);
  const double shared[3] = {0.0, 1.0, 1.0};
  EXPECT_NEAR(region.max_scaling(shared), 0.5, 1e-12);
}

TEST(Capacity, RequiresCutoffOne) {
  EXPECT_THROW(estimate_capacity_region(nets::line2(0.5, 0.1, cutoff(2))), UnsupportedRegime);
  EXPECT_THROW(estimate_capacity_region(nets::line2(0.5, 0.1, cutoff(std::nullopt))),
               UnsupportedRegime);
}

TEST(Capacity, WrongDimension) {
  auto region = estimate_capacity_region(nets::line2(0.5, 0.1));
  const double two[2] = {0.1, 0.1};
  EXPECT_THROW(region.max_scaling(two), UsageError);
}

TEST(Slope, LinearGrowth) {
  netsim::Metrics m;
  for (int t = 0; t < 100; ++t) {
    netsim::SlotRecord r;
    r.queues = {static_cast<std::uint64_t>(3 * t), 7};
    m.slots.push_back(r);
  }
  EXPECT_NEAR(queue_growth_slope(m), 3.0, 1e-12);
}

TEST(Sweep, LineFlipsAroundBoundary) {
  Network net = nets::line2(0.5, 0.25);
  MaxWeightPolicy policy;
  SweepOptions opt;
  opt.horizon = 40000;
  opt.seeds = {1, 2, 3};
  const double dir[1] = {0.25};
  const double rho[3] = {0.0, 0.8, 1.2};
  auto pts = stability_sweep(net, policy, dir, rho, opt);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_TRUE(pts[0].stable);
  EXPECT_TRUE(pts[1].stable);
  EXPECT_FALSE(pts[2].stable);
  EXPECT_NEAR(pts[2].mean_slope, 0.3 - 0.25, 0.01);
  EXPECT_EQ(pts[1].slopes.size(), 3u);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  Network net = nets::line2(0.5, 0.25);
  GreedyPolicy policy;
  SweepOptions opt;
  opt.horizon = 5000;
  opt.seeds = {4, 5};
  const double dir[1] = {0.25};
  const double rho[3] = {0.5, 1.0, 1.5};
  opt.threads = 1;
  auto serial = stability_sweep(net, policy, dir, rho, opt);
  opt.threads = 4;
  auto parallel = stability_sweep(net, policy, dir, rho, opt);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(serial[i].slopes, parallel[i].slopes);
}

TEST(Sweep, RandomNeverBeatsMaxWeight) {
  // two commodities competing for the first pair of a two-hop line
  Network net(chain({0.5, 0.5}), {{1, 0, 2, 0.1}, {2, 0, 1, 0.1}}, cutoff(1));
  SweepOptions opt;
  opt.horizon = 30000;
  opt.seeds = {1, 2};
  const double dir[2] = {0.25, 0.25};
  const double rho[4] = {0.6, 0.8, 0.95, 1.1};
  MaxWeightPolicy mw;
  RandomPolicy rnd;
  auto a = stability_sweep(net, mw, dir, rho, opt);
  auto b = stability_sweep(net, rnd, dir, rho, opt);
  auto flip = [](const std::vector<SweepPoint>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (!pts[i].stable) return i;
    return pts.size();
  };
  EXPECT_LE(flip(b), flip(a));
}

TEST(Sweep, BadDirection) {
  Network net = nets::line2(0.5, 0.25);
  MaxWeightPolicy policy;
  const double two[2] = {0.1, 0.1};
  const double rho[1] = {1.0};
  EXPECT_THROW(stability_sweep(net, policy, two, rho, {}), UsageError);
  const double neg[1] = {-0.1};
  EXPECT_THROW(stability_sweep(net, policy, neg, rho, {}), UsageError);
}

}  // namespace
}  // namespace qnet::control
