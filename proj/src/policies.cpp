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

#include "qnet/control.hpp"
#include "qnet/errors.hpp"

namespace qnet::control {

using netsim::CandidatePath;
using netsim::LleAllocator;

namespace {

ServiceConfiguration random_maximal(const SlotState& state, const Network& net,
                                    Rng& rng) {
  struct Option {
    std::size_t commodity;
    const CandidatePath* path;
  };
  LleAllocator alloc(net, state);
  std::vector<std::uint64_t> remaining = state.queues;
  remaining.resize(net.commodities().size(), 0);
  ServiceConfiguration out;
  for (;;) {
    std::vector<Option> open;
    for (std::size_t c = 0; c < net.commodities().size(); ++c) {
      if (remaining[c] == 0) continue;
      for (const auto& p : net.paths(c)) {
        if (alloc.can_serve(p)) open.push_back({c, &p});
      }
    }
    if (open.empty()) break;
    const Option& pick = open[rng.below(open.size())];
    out.assignments.push_back(alloc.take(pick.commodity, *pick.path));
    --remaining[pick.commodity];
  }
  std::sort(out.assignments.begin(), out.assignments.end());
  return out;
}

}  // namespace

ServiceConfiguration policy_random(const SlotState& state, const Network& net,
                                   Rng& rng) {
  std::vector<ServiceConfiguration> configs;
  try {
    configs = netsim::feasible_configurations(net, state);
  } catch (const SizeError&) {
    return random_maximal(state, net, rng);
  }
  if (configs.size() == 1) return configs.front();
  return configs[rng.below(configs.size())];
}

ServiceConfiguration policy_greedy(const SlotState& state, const Network& net) {
  const std::size_t ncom = net.commodities().size();
  LleAllocator alloc(net, state);
  std::vector<std::uint64_t> remaining = state.queues;
  remaining.resize(ncom, 0);
  ServiceConfiguration out;
  for (;;) {
    std::size_t best = ncom;
    const CandidatePath* best_path = nullptr;
    for (std::size_t c = 0; c < ncom; ++c) {
      if (remaining[c] == 0) continue;
      if (best != ncom && remaining[c] <= remaining[best]) continue;
      // Candidate paths are already ordered shortest first, then lexically.
      for (const auto& p : net.paths(c)) {
        if (alloc.can_serve(p)) {
          best = c;
          best_path = &p;
          break;
        }
      }
    }
    if (best == ncom) break;
    out.assignments.push_back(alloc.take(best, *best_path));
    --remaining[best];
  }
  return out;
}

ServiceConfiguration policy_maxweight(const SlotState& state,
                                      const Network& net, bool fallback) {
  std::vector<ServiceConfiguration> configs;
  try {
    configs = netsim::feasible_configurations(net, state);
  } catch (const SizeError&) {
    if (!fallback) throw;
    return policy_greedy(state, net);
  }
  const std::size_t ncom = net.commodities().size();
  const ServiceConfiguration* best = nullptr;
  unsigned __int128 best_weight = 0;
  // Configurations arrive sorted, so the first maximizer is the smallest.
  for (const auto& cfg : configs) {
    unsigned __int128 w = 0;
    for (const auto& a : cfg.assignments) {
      if (a.commodity < ncom && a.commodity < state.queues.size()) {
        w += state.queues[a.commodity];
      }
    }
    if (!best || w > best_weight) {
      best = &cfg;
      best_weight = w;
    }
  }
  return best ? *best : ServiceConfiguration{};
}

std::unique_ptr<netsim::Policy> make_policy(const std::string& name,
                                            bool fallback) {
  if (name == "random") return std::make_unique<RandomPolicy>();
  if (name == "greedy") return std::make_unique<GreedyPolicy>();
  if (name == "maxweight") return std::make_unique<MaxWeightPolicy>(fallback);
  throw UsageError("unknown policy '" + name +
                   "' (expected random, greedy or maxweight)");
}

}  // namespace qnet::control
