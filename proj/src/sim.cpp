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

StepOutput step(const SlotState& state, const Policy& policy,
                const Network& net, Streams& streams) {
  const auto& topo = net.topology();
  const auto& params = net.params();
  const std::size_t ncom = net.commodities().size();

  StepOutput out;
  SlotState& next = out.state;
  SlotRecord& rec = out.record;
  next.slot = state.slot;
  next.next_lle_id = state.next_lle_id;
  next.queues = state.queues;
  next.queues.resize(ncom, 0);
  rec.slot = state.slot;
  rec.arrivals.assign(ncom, 0);
  rec.services.assign(ncom, 0);

  // (1) age, decay, expire
  std::vector<std::int64_t> held(topo.nodes().size(), 0);
  for (const auto& lle : state.live_lles) {
    const std::int64_t age = state.slot - lle.created_slot;
    if (params.fidelity.cutoff_age && age >= *params.fidelity.cutoff_age) {
      ++rec.expired;
      continue;
    }
    LLE aged = lle;
    if (age > 0) aged.fidelity = fidelity::decay(lle.fidelity, 1.0, params.fidelity);
    const auto& e = topo.edges()[lle.edge];
    ++held[e.u];
    ++held[e.v];
    next.live_lles.push_back(aged);
  }

  // (2) generation, at most one pair per edge per slot
  for (EdgeId id = 0; id < topo.edges().size(); ++id) {
    const auto& e = topo.edges()[id];
    if (!streams.generation.bernoulli(e.p_gen)) continue;
    const auto& cap_u = topo.nodes()[e.u].memory_capacity;
    const auto& cap_v = topo.nodes()[e.v].memory_capacity;
    if ((cap_u && held[e.u] >= *cap_u) || (cap_v && held[e.v] >= *cap_v)) {
      continue;
    }
    ++held[e.u];
    ++held[e.v];
    next.live_lles.push_back({next.next_lle_id++, id, state.slot, e.f0});
    ++rec.generated;
  }

  // (3) arrivals
  for (std::size_t c = 0; c < ncom; ++c) {
    if (streams.arrivals.bernoulli(net.commodities()[c].rate)) {
      ++next.queues[c];
      rec.arrivals[c] = 1;
    }
  }

  // (4) decide, (5) serve
  const ServiceConfiguration config = policy.decide(next, net, streams.policy);
  if (!check_configuration(net, next, config).empty()) {
    rec.rejected = 1;
  } else {
    for (const auto& a : config.assignments) {
      std::vector<double> fids;
      for (std::uint64_t id : a.lle_ids) {
        auto it = std::find_if(next.live_lles.begin(), next.live_lles.end(),
                               [id](const LLE& l) { return l.id == id; });
        fids.push_back(it->fidelity);
        next.live_lles.erase(it);
        rec.consumed_ids.push_back(id);
      }
      rec.delivered_fidelities.push_back(fidelity::chain_fidelity(fids));
      --next.queues[a.commodity];
      ++rec.services[a.commodity];
    }
    rec.consumed = rec.consumed_ids.size();
  }

  // (6) record
  rec.queues = next.queues;
  rec.live = next.live_lles.size();
  ++next.slot;
  return out;
}

Metrics run_from(const Network& net, const Policy& policy, SlotState initial,
                 std::int64_t horizon, std::uint64_t seed,
                 const SlotObserver& observer) {
  if (horizon < 1) throw UsageError("horizon must be at least 1 slot");
  initial.queues.resize(net.commodities().size(), 0);
  Metrics metrics;
  for (const auto& c : net.commodities()) metrics.commodity_ids.push_back(c.id);
  metrics.initial_queues = initial.queues;
  metrics.slots.reserve(static_cast<std::size_t>(horizon));
  Streams streams = Streams::from_seed(seed);
  SlotState state = std::move(initial);
  for (std::int64_t t = 0; t < horizon; ++t) {
    StepOutput out = step(state, policy, net, streams);
    if (observer) observer(state, out.state, out.record);
    metrics.slots.push_back(std::move(out.record));
    state = std::move(out.state);
  }
  return metrics;
}

Metrics run(const Network& net, const Policy& policy, std::int64_t horizon,
            std::uint64_t seed, const SlotObserver& observer) {
  return run_from(net, policy, initial_state(net), horizon, seed, observer);
}

InvariantMonitor::InvariantMonitor(const Network& net) : net_(&net) {
  cum_arrivals_.assign(net.commodities().size(), 0);
  cum_services_.assign(net.commodities().size(), 0);
}

SlotObserver InvariantMonitor::observer() {
  return [this](const SlotState& before, const SlotState& after,
                const SlotRecord& record) { observe(before, after, record); };
}

void InvariantMonitor::fail(std::int64_t slot, const std::string& what) {
  violations_.push_back("slot " + std::to_string(slot) + ": " + what);
}

void InvariantMonitor::observe(const SlotState& before, const SlotState& after,
                               const SlotRecord& record) {
  ++slots_;
  const auto& topo = net_->topology();
  const auto& params = net_->params();
  const std::size_t ncom = net_->commodities().size();
  const std::int64_t slot = record.slot;
  if (!started_) {
    start_queues_ = before.queues;
    start_queues_.resize(ncom, 0);
    started_ = true;
  }

  // Single use: consumed ids are unique and never come back.
  for (std::uint64_t id : record.consumed_ids) {
    auto it = std::lower_bound(consumed_.begin(), consumed_.end(), id);
    if (it != consumed_.end() && *it == id) {
      fail(slot, "pair " + std::to_string(id) + " consumed twice");
    } else {
      consumed_.insert(it, id);
    }
  }
  std::vector<std::int64_t> held(topo.nodes().size(), 0);
  for (const auto& lle : after.live_lles) {
    if (std::binary_search(consumed_.begin(), consumed_.end(), lle.id)) {
      fail(slot, "consumed pair " + std::to_string(lle.id) + " is live");
    }
    const auto& e = topo.edges()[lle.edge];
    ++held[e.u];
    ++held[e.v];
    // Ages are measured at the slot in which the pair can be used.
    const std::int64_t age = slot - lle.created_slot;
    if (params.fidelity.cutoff_age && age >= *params.fidelity.cutoff_age) {
      fail(slot, "pair " + std::to_string(lle.id) + " outlived the cutoff");
    }
    if (!(lle.fidelity >= fidelity::kFloor && lle.fidelity <= 1.0)) {
      fail(slot, "pair fidelity out of range");
    }
  }
  for (NodeId n = 0; n < topo.nodes().size(); ++n) {
    const auto& cap = topo.nodes()[n].memory_capacity;
    if (cap && held[n] > *cap) {
      fail(slot, "node " + topo.nodes()[n].name + " exceeds memory capacity");
    }
  }

  // Queue recursion and conservation.
  for (std::size_t c = 0; c < ncom; ++c) {
    const std::uint64_t q0 = c < before.queues.size() ? before.queues[c] : 0;
    const std::uint64_t a = record.arrivals[c];
    const std::uint64_t s = record.services[c];
    if (s > q0 + a) fail(slot, "served more than backlog plus arrivals");
    if (after.queues[c] + s != q0 + a) fail(slot, "queue recursion broken");
    if (record.queues[c] != after.queues[c]) fail(slot, "recorded queue differs");
    cum_arrivals_[c] += a;
    cum_services_[c] += s;
    if (start_queues_[c] + cum_arrivals_[c] != after.queues[c] + cum_services_[c]) {
      fail(slot, "conservation broken for commodity " +
                     std::to_string(net_->commodities()[c].id));
    }
  }
  if (record.rejected) fail(slot, "policy decision rejected");
}

}  // namespace qnet::netsim
