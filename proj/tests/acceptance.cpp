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

// Acceptance gate. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "golden.hpp"
#include "oracle.hpp"
#include "qnet/config.hpp"
#include "qnet/control.hpp"
#include "qnet/fidelity.hpp"
#include "qnet/kernel.hpp"
#include "qnet/netsim.hpp"
#include "qnet/protocols.hpp"

namespace {

using namespace qnet;
using kernel::MeasurementBasis;
using kernel::StateVector;

constexpr double kTol = 1e-10;

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  const char* id;
  const char* title;
  double time_limit_s;  // 0 means no runtime bound
  std::function<Verdict()> body;
};

std::string fixture(const std::string& name) {
  return std::string(QNET_SOURCE_DIR) + "/configs/" + name;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Verdict swap_circuit() {
  Rng rng(1);
  int equal = 0;
  const int shots = 10000;
  for (int i = 0; i < shots; ++i) {
    auto r = protocols::entanglement_swap(rng);
    auto m0 = kernel::measure(r.state, 0, MeasurementBasis::z(), rng);
    auto m3 = kernel::measure(m0.state, 3, MeasurementBasis::z(), rng);
    equal += m0.bit == m3.bit;
  }
  const auto t = protocols::swap_circuit_table();
  double worst = 0.0;
  for (int i = 0; i < 16; ++i) {
    const int q0 = i & 1, q1 = (i >> 1) & 1, q2 = (i >> 2) & 1, q3 = (i >> 3) & 1;
    const double want[4] = {(q1 == 0 && q2 == 0) ? 0.25 : 0.0,
                            (q0 == q1 && q2 == q3) ? 0.25 : 0.0,
                            ((q0 ^ q3) == q2) ? 0.125 : 0.0, (q0 == q3) ? 0.125 : 0.0};
    for (int s = 0; s < 4; ++s) worst = std::max(worst, std::abs(t.steps[s][i] - want[s]));
  }
  return {equal == shots && worst <= kTol,
          fmt("equal-outcome rate %.6f over 10000 shots, table max error %.2e",
              static_cast<double>(equal) / shots, worst)};
}

Verdict teleportation() {
  Rng rng(2);
  double worst_overlap = 0.0, worst_mixed = 0.0;
  const protocols::BsmOutcome all[4] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (int trial = 0; trial < 100; ++trial) {
    const double theta = std::acos(1.0 - 2.0 * rng.uniform());
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    Eigen::VectorXcd v(2);
    v << std::cos(theta / 2), std::polar(std::sin(theta / 2), phase);
    const StateVector in = StateVector::from_amplitudes(v);
    for (auto o : all) {
      auto r = protocols::teleport_branch(in, o);
      const double ov = r ? kernel::overlap(in, r->output) : 0.0;
      worst_overlap = std::max(worst_overlap, std::abs(1.0 - ov));
    }
    auto rho = protocols::teleport_output_before_correction(in);
    worst_mixed = std::max(
        worst_mixed, (rho.matrix() - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).norm());
  }
  return {worst_overlap <= kTol && worst_mixed <= kTol,
          fmt("max |1-|<in|out>|| %.2e, max ||rho_pre - I/2|| %.2e", worst_overlap,
              worst_mixed)};
}

Verdict e91() {
  protocols::E91Config cfg;
  cfg.n = 100000;
  Rng rng(3);
  auto clean = protocols::e91_run(cfg, 1.0, rng);
  const double sifted = static_cast<double>(clean.sifted_count) / cfg.n;
  cfg.eavesdropper = protocols::Eavesdropper::InterceptResend;
  auto eve = protocols::e91_run(cfg, 1.0, rng);
  const bool ok = clean.qber_estimate == 0.0 && std::abs(sifted - 0.5) <= 0.01 &&
                  !clean.aborted && eve.qber_estimate >= 0.23 &&
                  eve.qber_estimate <= 0.27 && eve.aborted;
  return {ok, fmt("clean QBER %.6f sifted %.4f; intercept QBER %.4f", clean.qber_estimate,
                  sifted, eve.qber_estimate) +
                  (eve.aborted ? " (aborted)" : " (not aborted)")};
}

Verdict oracle_equivalence() {
  const double grid[5] = {0.25, 0.4, 0.6, 0.8, 1.0};
  double worst = 0.0;
  for (double f1 : grid) {
    for (double f2 : grid) {
      const double s = fidelity::swap_fidelity(f1, f2);
      const double s_gate = kernel::fidelity_to_bell(protocols::entanglement_swap_dm(
          kernel::make_werner(f1), kernel::make_werner(f2)));
      const double s_brute = oracle::fidelity(oracle::swap_dm(f1, f2));
      worst = std::max({worst, std::abs(s - s_gate), std::abs(s - s_brute)});
      const auto d = fidelity::distill_fidelity(f1, f2);
      const auto d_gate =
          protocols::bbpssw_evaluate(kernel::make_werner(f1), kernel::make_werner(f2));
      const auto d_brute = oracle::bbpssw(f1, f2);
      worst = std::max({worst, std::abs(d.fidelity - d_gate.fidelity),
                        std::abs(d.success_probability - d_gate.success_probability),
                        std::abs(d.fidelity - d_brute.fidelity),
                        std::abs(d.success_probability - d_brute.probability)});
    }
  }
  fidelity::FidelityParams p;
  p.coherence_time = 10.0;
  for (int k = 0; k < 20; ++k) {
    const double elapsed = 0.75 * k;
    for (double f : {1.0, 0.7}) {
      worst = std::max(worst, std::abs(fidelity::decay(f, elapsed, p) -
                                       oracle::depolarize(f, elapsed, 10.0, 7)));
    }
  }
  return {worst <= kTol, fmt("max deviation %.2e over 5x5 grid and 20 decay points", worst)};
}

Verdict distillation_condition() {
  bool ok = true;
  std::ostringstream detail;
  for (double f : {0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95}) {
    ok = ok && fidelity::distill_fidelity(f, f).fidelity > f;
  }
  for (double f : {0.3, 0.4, 0.5}) {
    ok = ok && fidelity::distill_fidelity(f, f).fidelity <= f;
  }
  detail << "F'(0.55)=" << fidelity::distill_fidelity(0.55, 0.55).fidelity
         << " F'(0.5)=" << fidelity::distill_fidelity(0.5, 0.5).fidelity;
  return {ok, detail.str()};
}

Verdict fig5_feasibility() {
  const auto cfg = cli::load_config(fixture("fig5.json"));
  const netsim::Network net = cfg.network();
  const auto& edges = net.topology().edges();
  bool queue1_served = false;
  std::set<std::vector<std::uint64_t>> full_services;
  bool shape_ok = true;
  // every reachable pattern of live pairs: one pair or none on each edge
  // that can generate at all
  std::vector<netsim::EdgeId> live_edges;
  for (netsim::EdgeId e = 0; e < edges.size(); ++e) {
    if (edges[e].p_gen > 0) live_edges.push_back(e);
  }
  const unsigned full = (1u << live_edges.size()) - 1;
  for (unsigned mask = 0; mask <= full; ++mask) {
    netsim::SlotState s;
    s.queues = {3, 3, 3};
    for (std::size_t k = 0; k < live_edges.size(); ++k) {
      if (mask & (1u << k)) s.live_lles.push_back({live_edges[k], live_edges[k], 0, 1.0});
    }
    s.next_lle_id = edges.size();
    for (const auto& c : netsim::feasible_configurations(net, s)) {
      for (const auto& a : c.assignments) {
        if (a.commodity == 0) queue1_served = true;
        if (a.commodity == 1) {
          shape_ok = shape_ok && a.lle_ids.size() == 3 && a.path.size() == 4;
          if (mask == full) full_services.insert(a.lle_ids);
        }
      }
    }
  }
  const bool ok = !queue1_served && shape_ok && full_services.size() == 1;
  return {ok, std::string("queue 1 ") + (queue1_served ? "served" : "never served") +
                  "; queue 2 services " + std::to_string(full_services.size()) +
                  (shape_ok ? " (3 pairs, 2 swaps)" : " (wrong shape)")};
}

Verdict capacity_boundary() {
  const auto cfg = cli::load_config(fixture("line2.json"));
  const netsim::Network net = cfg.network();
  const double dir[1] = {1.0};
  const double boundary = control::estimate_capacity_region(net).max_scaling(dir);
  control::MaxWeightPolicy policy;
  control::SweepOptions opt;
  opt.horizon = 100000;
  opt.seeds = {1, 2, 3, 4, 5};
  const double direction[1] = {boundary};
  const double rho[2] = {0.9, 1.1};
  const auto pts = control::stability_sweep(net, policy, direction, rho, opt);
  const bool ok = std::abs(boundary - 0.25) <= 1e-12 && pts[0].stable && !pts[1].stable;
  return {ok, fmt("boundary %.12f; mean slope %.2e at rho 0.9, %.2e at rho 1.1", boundary,
                  pts[0].mean_slope, pts[1].mean_slope)};
}

Verdict invariants() {
  std::uint64_t slots = 0, violations = 0;
  std::string first;
  for (const char* name : {"line2.json", "fig5.json"}) {
    const auto cfg = cli::load_config(fixture(name));
    const netsim::Network net = cfg.network();
    for (const char* pol : {"random", "greedy", "maxweight"}) {
      auto policy = control::make_policy(pol);
      netsim::InvariantMonitor monitor(net);
      netsim::run(net, *policy, 100000, cfg.seed, monitor.observer());
      slots += monitor.slots_checked();
      violations += monitor.violations().size();
      if (first.empty() && !monitor.violations().empty()) first = monitor.violations().front();
    }
  }
  return {violations == 0 && slots == 600000,
          std::to_string(violations) + " violations over " + std::to_string(slots) +
              " slots (2 fixtures x 3 policies)" + (first.empty() ? "" : ": " + first)};
}

Verdict determinism() {
  std::size_t matched = 0;
  std::string problem;
  for (const auto& c : golden::cases()) {
    const auto dir = golden::scratch("acc-" + c.name);
    const auto a = golden::run_cli(c.args, dir, c.files);
    const auto b = golden::run_cli(c.args, dir, c.files);
    std::string why = golden::compare(c, a);
    if (why.empty() && a.outputs != b.outputs) why = c.name + ": repeat run differs";
    if (why.empty()) {
      ++matched;
    } else if (problem.empty()) {
      problem = why;
    }
    std::filesystem::remove_all(dir);
  }
  const std::size_t total = golden::cases().size();
  return {matched == total, std::to_string(matched) + "/" + std::to_string(total) +
                                " subcommand runs byte-identical to golden files" +
                                (problem.empty() ? "" : " (" + problem + ")")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "swap circuit reproduction", 1.0, swap_circuit},
      {"AC2", "teleportation", 1.0, teleportation},
      {"AC3", "E91 completeness and soundness", 10.0, e91},
      {"AC4", "closed forms vs density-matrix oracle", 5.0, oracle_equivalence},
      {"AC5", "distillation condition", 0.0, distillation_condition},
      {"AC6", "fig5 feasibility", 0.0, fig5_feasibility},
      {"AC7", "capacity boundary and stability flip", 120.0, capacity_boundary},
      {"AC8", "invariant suite at horizon 1e5", 0.0, invariants},
      {"AC9", "determinism via golden files", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = v.pass;
    std::string timing = fmt("%.3fs", secs);
    if (c.time_limit_s > 0) {
      timing += fmt(" (limit %.0fs)", c.time_limit_s);
      if (secs >= c.time_limit_s) pass = false;
    }
    failed += !pass;
    std::printf("[%s] %s %s: %s [%s]\n", pass ? "PASS" : "FAIL", c.id, c.title,
                v.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
