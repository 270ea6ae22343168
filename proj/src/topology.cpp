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

#include <algorithm>
#include <string>

#include "qnet/errors.hpp"
#include "qnet/netsim.hpp"

namespace qnet::netsim {

Topology::Topology(std::vector<Node> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::vector<std::string> problems;
  const std::size_t n = nodes_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = nodes_[i];
    if (node.name.empty()) {
      problems.push_back("node " + std::to_string(i) + ": empty name");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (nodes_[j].name == node.name) {
        problems.push_back("node '" + node.name + "': duplicate name");
        break;
      }
    }
    if (node.memory_capacity && *node.memory_capacity < 1) {
      problems.push_back("node '" + node.name +
                         "': memory capacity must be at least 1");
    }
  }
  adjacency_.assign(n * n, 0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& edge = edges_[e];
    const std::string label = "edge " + std::to_string(e);
    if (edge.u >= n || edge.v >= n) {
      problems.push_back(label + ": endpoint is not a defined node");
      continue;
    }
    const std::string named = "edge " + nodes_[edge.u].name + "-" +
                              nodes_[edge.v].name;
    if (edge.u == edge.v) problems.push_back(named + ": self loop");
    if (!(edge.p_gen >= 0.0 && edge.p_gen <= 1.0)) {
      problems.push_back(named + ": p_gen " + std::to_string(edge.p_gen) +
                         " outside [0, 1]");
    }
    if (!(edge.f0 >= fidelity::kFloor && edge.f0 <= 1.0)) {
      problems.push_back(named + ": f0 " + std::to_string(edge.f0) +
                         " outside [1/4, 1]");
    }
    auto& slot = adjacency_[edge.u * n + edge.v];
    if (slot != 0) {
      problems.push_back(named + ": duplicate edge");
      continue;
    }
    slot = e + 1;
    adjacency_[edge.v * n + edge.u] = e + 1;
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

std::optional<NodeId> Topology::find_node(const std::string& name) const {
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<EdgeId> Topology::edge_between(NodeId a, NodeId b) const {
  const std::size_t n = nodes_.size();
  if (a >= n || b >= n) return std::nullopt;
  const std::size_t slot = adjacency_[a * n + b];
  if (slot == 0) return std::nullopt;
  return slot - 1;
}

std::string Topology::edge_label(EdgeId e) const {
  const auto& edge = edges_.at(e);
  return nodes_.at(edge.u).name + "-" + nodes_.at(edge.v).name;
}

namespace {

void collect_paths(const Topology& topo, NodeId dst, std::size_t max_hops,
                   Path& current, std::vector<bool>& on_path,
                   std::vector<Path>& out) {
  const NodeId here = current.back();
  if (here == dst) {
    out.push_back(current);
    return;
  }
  if (current.size() - 1 >= max_hops) return;
  for (NodeId next = 0; next < topo.nodes().size(); ++next) {
    if (on_path[next] || !topo.edge_between(here, next)) continue;
    on_path[next] = true;
    current.push_back(next);
    collect_paths(topo, dst, max_hops, current, on_path, out);
    current.pop_back();
    on_path[next] = false;
  }
}

}  // namespace

Network::Network(Topology topology, std::vector<Commodity> commodities,
                 SimParams params)
    : topology_(std::move(topology)),
      commodities_(std::move(commodities)),
      params_(params) {
  std::vector<std::string> problems;
  try {
    fidelity::validate(params_.fidelity);
  } catch (const DomainError& e) {
    problems.push_back(std::string("fidelity: ") + e.what());
  }
  if (params_.min_service_fidelity &&
      !(*params_.min_service_fidelity >= fidelity::kFloor &&
        *params_.min_service_fidelity <= 1.0)) {
    problems.push_back("fidelity: min_service_fidelity outside [1/4, 1]");
  }
  if (params_.max_path_hops < 1) {
    problems.push_back("policy: max_path_hops must be at least 1");
  }
  std::sort(commodities_.begin(), commodities_.end(),
            [](const Commodity& a, const Commodity& b) { return a.id < b.id; });
  const auto& nodes = topology_.nodes();
  for (std::size_t i = 0; i < commodities_.size(); ++i) {
    const auto& c = commodities_[i];
    const std::string label = "commodity " + std::to_string(c.id);
    if (i > 0 && commodities_[i - 1].id == c.id) {
      problems.push_back(label + ": duplicate id");
    }
    if (c.src >= nodes.size() || c.dst >= nodes.size()) {
      problems.push_back(label + ": endpoint is not a defined node");
      continue;
    }
    if (c.src == c.dst) problems.push_back(label + ": src equals dst");
    if (nodes[c.src].role != NodeRole::Client ||
        nodes[c.dst].role != NodeRole::Client) {
      problems.push_back(label + ": endpoints must be clients");
    }
    if (!(c.rate >= 0.0 && c.rate <= 1.0)) {
      problems.push_back(label + ": rate " + std::to_string(c.rate) +
                         " outside [0, 1]");
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));

  paths_.resize(commodities_.size());
  for (std::size_t i = 0; i < commodities_.size(); ++i) {
    const auto& c = commodities_[i];
    std::vector<Path> found;
    Path current{c.src};
    std::vector<bool> on_path(nodes.size(), false);
    on_path[c.src] = true;
    collect_paths(topology_, c.dst, params_.max_path_hops, current, on_path,
                  found);
    std::sort(found.begin(), found.end(), [](const Path& a, const Path& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });
    for (auto& p : found) {
      CandidatePath cp;
      for (std::size_t k = 0; k + 1 < p.size(); ++k) {
        cp.edges.push_back(*topology_.edge_between(p[k], p[k + 1]));
      }
      cp.nodes = std::move(p);
      paths_[i].push_back(std::move(cp));
    }
  }
}

SlotState initial_state(const Network& net) {
  SlotState s;
  s.queues.assign(net.commodities().size(), 0);
  return s;
}

}  // namespace qnet::netsim
