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

namespace {

constexpr double kFidelitySlack = 1e-12;

const LLE* find_lle(const SlotState& state, std::uint64_t id) {
  auto it = std::lower_bound(
      state.live_lles.begin(), state.live_lles.end(), id,
      [](const LLE& l, std::uint64_t v) { return l.id < v; });
  if (it == state.live_lles.end() || it->id != id) return nullptr;
  return &*it;
}

}  // namespace

std::vector<std::uint64_t> ServiceConfiguration::served_per_commodity(
    std::size_t count) const {
  std::vector<std::uint64_t> out(count, 0);
  for (const auto& a : assignments) {
    if (a.commodity < count) ++out[a.commodity];
  }
  return out;
}

LleAllocator::LleAllocator(const Network& net, const SlotState& state)
    : net_(&net),
      per_edge_(net.topology().edges().size()),
      cursor_(net.topology().edges().size(), 0) {
  for (const auto& lle : state.live_lles) {
    if (lle.edge < per_edge_.size()) per_edge_[lle.edge].push_back(&lle);
  }
}

std::size_t LleAllocator::available(EdgeId e) const {
  return per_edge_[e].size() - cursor_[e];
}

std::optional<double> LleAllocator::peek_fidelity(
    const CandidatePath& path) const {
  std::vector<double> fids;
  fids.reserve(path.edges.size());
  for (EdgeId e : path.edges) {
    if (available(e) == 0) return std::nullopt;
    fids.push_back(per_edge_[e][cursor_[e]]->fidelity);
  }
  return fidelity::chain_fidelity(fids);
}

bool LleAllocator::can_serve(const CandidatePath& path) const {
  for (EdgeId e : path.edges) {
    if (available(e) == 0) return false;
  }
  const auto& min = net_->params().min_service_fidelity;
  if (!min) return true;
  return *peek_fidelity(path) >= *min - kFidelitySlack;
}

Assignment LleAllocator::take(std::size_t commodity,
                              const CandidatePath& path) {
  Assignment a{commodity, path.nodes, {}};
  a.lle_ids.reserve(path.edges.size());
  for (EdgeId e : path.edges) {
    a.lle_ids.push_back(per_edge_[e][cursor_[e]++]->id);
  }
  return a;
}

void LleAllocator::give_back(const CandidatePath& path) {
  for (EdgeId e : path.edges) --cursor_[e];
}

std::string check_configuration(const Network& net, const SlotState& state,
                                const ServiceConfiguration& config) {
  const auto& commodities = net.commodities();
  std::vector<std::uint64_t> used;
  std::vector<std::uint64_t> served(commodities.size(), 0);
  for (const auto& a : config.assignments) {
    if (a.commodity >= commodities.size()) return "unknown commodity index";
    const auto& paths = net.paths(a.commodity);
    auto path = std::find_if(paths.begin(), paths.end(),
                             [&](const CandidatePath& p) {
                               return p.nodes == a.path;
                             });
    const std::string who =
        "commodity " + std::to_string(commodities[a.commodity].id);
    if (path == paths.end()) return who + ": path is not a candidate path";
    if (a.lle_ids.size() != path->edges.size()) {
      return who + ": need one pair per path edge";
    }
    std::vector<double> fids;
    for (std::size_t k = 0; k < a.lle_ids.size(); ++k) {
      const LLE* lle = find_lle(state, a.lle_ids[k]);
      if (!lle) return who + ": pair " + std::to_string(a.lle_ids[k]) + " is not live";
      if (lle->edge != path->edges[k]) {
        return who + ": pair " + std::to_string(lle->id) +
               " does not lie on edge " + net.topology().edge_label(path->edges[k]);
      }
      fids.push_back(lle->fidelity);
      used.push_back(lle->id);
    }
    const auto& min = net.params().min_service_fidelity;
    if (min && fidelity::chain_fidelity(fids) < *min - kFidelitySlack) {
      return who + ": end-to-end fidelity below the service minimum";
    }
    ++served[a.commodity];
  }
  std::sort(used.begin(), used.end());
  if (std::adjacent_find(used.begin(), used.end()) != used.end()) {
    return "a pair is assigned twice";
  }
  for (std::size_t c = 0; c < commodities.size(); ++c) {
    const std::uint64_t q = c < state.queues.size() ? state.queues[c] : 0;
    if (served[c] > q) {
      return "commodity " + std::to_string(commodities[c].id) +
             ": serves more requests than queued";
    }
  }
  return {};
}

namespace {

struct Option {
  std::size_t commodity;
  const CandidatePath* path;
};

class Enumerator {
 public:
  Enumerator(const Network& net, const SlotState& state, std::size_t budget)
      : alloc_(net, state), remaining_(state.queues), budget_(budget) {
    remaining_.resize(net.commodities().size(), 0);
    for (std::size_t c = 0; c < net.commodities().size(); ++c) {
      if (remaining_[c] == 0) continue;
      for (const auto& p : net.paths(c)) options_.push_back({c, &p});
    }
  }

  std::vector<ServiceConfiguration> run() {
    visit(0);
    std::sort(out_.begin(), out_.end());
    return std::move(out_);
  }

 private:
  bool can_add(const Option& o) const {
    return remaining_[o.commodity] > 0 && alloc_.can_serve(*o.path);
  }

  void visit(std::size_t i) {
    if (++visited_ > budget_) {
      throw SizeError(
          "configuration enumeration exceeded its budget of " +
          std::to_string(budget_) + " nodes; use a greedy policy instead");
    }
    if (i == options_.size()) {
      for (const auto& o : options_) {
        if (can_add(o)) return;
      }
      out_.push_back({stack_});
      return;
    }
    const Option& o = options_[i];
    visit(i + 1);
    std::size_t taken = 0;
    while (can_add(o)) {
      stack_.push_back(alloc_.take(o.commodity, *o.path));
      --remaining_[o.commodity];
      ++taken;
      visit(i + 1);
    }
    for (; taken > 0; --taken) {
      stack_.pop_back();
      alloc_.give_back(*o.path);
      ++remaining_[o.commodity];
    }
  }

  LleAllocator alloc_;
  std::vector<std::uint64_t> remaining_;
  std::size_t budget_;
  std::size_t visited_ = 0;
  std::vector<Option> options_;
  std::vector<Assignment> stack_;
  std::vector<ServiceConfiguration> out_;
};

}  // namespace

std::vector<ServiceConfiguration> feasible_configurations(
    const Network& net, const SlotState& state, std::size_t budget) {
  return Enumerator(net, state, budget).run();
}

std::vector<ServiceConfiguration> feasible_configurations(
    const Network& net, const SlotState& state) {
  return feasible_configurations(net, state, net.params().enumeration_budget);
}

}  // namespace qnet::netsim
