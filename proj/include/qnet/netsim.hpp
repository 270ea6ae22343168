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
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qnet/fidelity.hpp"
#include "qnet/rng.hpp"

// Discrete-time network control model.
//
// Every slot runs the same phase order: age and expire pairs, generate new
// link-level pairs, draw request arrivals, ask the policy for a service
// configuration, apply it, record metrics.
namespace qnet::netsim {

using NodeId = std::size_t;
using EdgeId = std::size_t;
using Path = std::vector<NodeId>;

enum class NodeRole { Client, Switch };

struct Node {
  std::string name;
  NodeRole role = NodeRole::Client;
  // Maximum number of pair halves held at once; empty means unbounded.
  std::optional<std::int64_t> memory_capacity;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double p_gen = 0.0;
  double f0 = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

class Topology {
 public:
  Topology() = default;
  // Throws ConfigError listing every invalid node or edge.
  Topology(std::vector<Node> nodes, std::vector<Edge> edges);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::optional<NodeId> find_node(const std::string& name) const;
  std::optional<EdgeId> edge_between(NodeId a, NodeId b) const;
  std::string edge_label(EdgeId e) const;

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  // Dense node x node table of edge index + 1 (0 = no edge).
  std::vector<std::size_t> adjacency_;
};

struct Commodity {
  int id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  // Bernoulli arrival probability per slot.
  double rate = 0.0;

  friend bool operator==(const Commodity&, const Commodity&) = default;
};

struct SimParams {
  fidelity::FidelityParams fidelity;
  // Served requests must reach this end-to-end fidelity when set.
  std::optional<double> min_service_fidelity;
  std::size_t max_path_hops = 6;
  std::size_t enumeration_budget = 200000;

  friend bool operator==(const SimParams&, const SimParams&) = default;
};

struct CandidatePath {
  Path nodes;
  std::vector<EdgeId> edges;
};

/// Topology plus commodities plus the precomputed candidate paths of each
/// commodity (all simple paths within the hop cap, shortest first, then
/// lexicographic by node index).
class Network {
 public:
  // Throws ConfigError listing every problem found.
  Network(Topology topology, std::vector<Commodity> commodities,
          SimParams params);

  const Topology& topology() const { return topology_; }
  const std::vector<Commodity>& commodities() const { return commodities_; }
  const SimParams& params() const { return params_; }
  const std::vector<CandidatePath>& paths(std::size_t commodity) const {
    return paths_[commodity];
  }

 private:
  Topology topology_;
  std::vector<Commodity> commodities_;
  SimParams params_;
  std::vector<std::vector<CandidatePath>> paths_;
};

// Link-level entanglement.
struct LLE {
  std::uint64_t id = 0;
  EdgeId edge = 0;
  std::int64_t created_slot = 0;
  double fidelity = 1.0;
};

struct SlotState {
  // Index of the next slot to execute.
  std::int64_t slot = 0;
  // Sorted by id, which is also creation order.
  std::vector<LLE> live_lles;
  // Backlog per commodity, indexed like Network::commodities().
  std::vector<std::uint64_t> queues;
  std::uint64_t next_lle_id = 0;
};

SlotState initial_state(const Network& net);

struct Assignment {
  // Index into Network::commodities().
  std::size_t commodity = 0;
  Path path;
  // One pair per path edge, in path order.
  std::vector<std::uint64_t> lle_ids;

  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

struct ServiceConfiguration {
  std::vector<Assignment> assignments;

  std::vector<std::uint64_t> served_per_commodity(std::size_t count) const;

  friend auto operator<=>(const ServiceConfiguration&,
                          const ServiceConfiguration&) = default;
};

/// Hands out live pairs edge by edge, oldest first. Used by every component
/// that builds configurations so that the pair chosen for an edge is a
/// deterministic function of what has already been taken.
class LleAllocator {
 public:
  LleAllocator(const Network& net, const SlotState& state);

  std::size_t available(EdgeId e) const;
  // Path fidelity with the pairs `take` would use; empty if an edge is dry.
  std::optional<double> peek_fidelity(const CandidatePath& path) const;
  bool can_serve(const CandidatePath& path) const;
  Assignment take(std::size_t commodity, const CandidatePath& path);
  void give_back(const CandidatePath& path);

 private:
  const Network* net_;
  std::vector<std::vector<const LLE*>> per_edge_;
  std::vector<std::size_t> cursor_;
};

// Empty string when feasible, otherwise the first reason it is not.
std::string check_configuration(const Network& net, const SlotState& state,
                                const ServiceConfiguration& config);

/// Every maximal feasible configuration for the current pairs and queues,
/// sorted lexicographically (commodity index, then path). Throws SizeError
/// once the search visits more than `budget` nodes.
std::vector<ServiceConfiguration> feasible_configurations(
    const Network& net, const SlotState& state, std::size_t budget);

std::vector<ServiceConfiguration> feasible_configurations(
    const Network& net, const SlotState& state);

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual ServiceConfiguration decide(const SlotState& state,
                                      const Network& net, Rng& rng) const = 0;
};

// Independent random streams of one run.
struct Streams {
  Rng generation;
  Rng arrivals;
  Rng policy;

  static Streams from_seed(std::uint64_t seed) {
    Rng root(seed);
    return {root.split(1), root.split(2), root.split(3)};
  }
};

struct SlotRecord {
  std::int64_t slot = 0;
  std::vector<std::uint64_t> queues;
  std::vector<std::uint64_t> arrivals;
  std::vector<std::uint64_t> services;
  std::uint64_t generated = 0;
  std::uint64_t expired = 0;
  std::uint64_t consumed = 0;
  std::uint64_t live = 0;
  std::uint64_t rejected = 0;
  std::vector<double> delivered_fidelities;
  std::vector<std::uint64_t> consumed_ids;
};

struct Metrics {
  std::vector<int> commodity_ids;
  std::vector<std::uint64_t> initial_queues;
  std::vector<SlotRecord> slots;
};

struct StepOutput {
  SlotState state;
  SlotRecord record;
};

StepOutput step(const SlotState& state, const Policy& policy,
                const Network& net, Streams& streams);

using SlotObserver = std::function<void(
    const SlotState& before, const SlotState& after, const SlotRecord&)>;

// Throws UsageError when horizon < 1.
Metrics run(const Network& net, const Policy& policy, std::int64_t horizon,
            std::uint64_t seed, const SlotObserver& observer = {});
Metrics run_from(const Network& net, const Policy& policy, SlotState initial,
                 std::int64_t horizon, std::uint64_t seed,
                 const SlotObserver& observer = {});

/// Checks the model's slot-level invariants as an observer: single-use
/// pairs, memory caps, cutoff ages, the queue recursion and per-commodity
/// conservation. Violations are collected, never thrown.
class InvariantMonitor {
 public:
  explicit InvariantMonitor(const Network& net);

  void observe(const SlotState& before, const SlotState& after,
               const SlotRecord& record);
  SlotObserver observer();

  const std::vector<std::string>& violations() const { return violations_; }
  std::uint64_t slots_checked() const { return slots_; }

 private:
  void fail(std::int64_t slot, const std::string& what);

  const Network* net_;
  std::vector<std::uint64_t> consumed_;  // sorted
  std::vector<std::uint64_t> cum_arrivals_;
  std::vector<std::uint64_t> cum_services_;
  std::vector<std::uint64_t> start_queues_;
  bool started_ = false;
  std::vector<std::string> violations_;
  std::uint64_t slots_ = 0;
};

}  // namespace qnet::netsim
