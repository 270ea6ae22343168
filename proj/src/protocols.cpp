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

#include "qnet/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qnet/errors.hpp"

namespace qnet::protocols {

using kernel::Gate;
using kernel::MeasurementBasis;

namespace {

void apply_corrections(StateVector& state, int qubit, BsmOutcome outcome) {
  if (outcome.bit2) state.apply(Gate::x(qubit));
  if (outcome.bit1) state.apply(Gate::z(qubit));
}

void apply_corrections(DensityMatrix& dm, int qubit, BsmOutcome outcome) {
  if (outcome.bit2) dm.apply(Gate::x(qubit));
  if (outcome.bit1) dm.apply(Gate::z(qubit));
}

// Projects qa and qb onto the computational outcome pair. Returns the joint
// probability and the collapsed state when it is nonzero.
std::optional<std::pair<double, StateVector>> project_pair(
    const StateVector& state, int qa, int qb, BsmOutcome outcome) {
  const auto z = MeasurementBasis::z();
  auto first = kernel::project(state, qa, z, outcome.bit1);
  if (!first.state) return std::nullopt;
  auto second = kernel::project(*first.state, qb, z, outcome.bit2);
  if (!second.state) return std::nullopt;
  return std::make_pair(first.probability * second.probability,
                        std::move(*second.state));
}

std::optional<std::pair<double, DensityMatrix>> project_pair(
    const DensityMatrix& dm, int qa, int qb, BsmOutcome outcome) {
  const auto z = MeasurementBasis::z();
  auto first = kernel::dm_project(dm, qa, z, outcome.bit1);
  if (!first.state) return std::nullopt;
  auto second = kernel::dm_project(*first.state, qb, z, outcome.bit2);
  if (!second.state) return std::nullopt;
  return std::make_pair(first.probability * second.probability,
                        std::move(*second.state));
}

constexpr std::array<BsmOutcome, 4> kAllOutcomes{
    BsmOutcome{0, 0}, BsmOutcome{0, 1}, BsmOutcome{1, 0}, BsmOutcome{1, 1}};

std::array<double, 16> distribution(const StateVector& s) {
  std::array<double, 16> out{};
  for (std::size_t i = 0; i < 16; ++i) out[i] = std::norm(s.amplitude(i));
  return out;
}

StateVector embed_input(const StateVector& input) {
  if (input.num_qubits() != 1) {
    throw DomainError("teleport input must be a single-qubit state");
  }
  if (std::abs(input.norm() - 1.0) > kernel::kStateTol) {
    throw DomainError("teleport input is not normalized");
  }
  // Qubit 0 holds the input, qubits 1 and 2 start in |0>.
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(8);
  amps(0) = input.amplitude(0);
  amps(1) = input.amplitude(1);
  auto reg = StateVector::from_amplitudes(std::move(amps));
  reg.apply(Gate::h(1));
  reg.apply(Gate::cnot(1, 2));
  return reg;
}

StateVector receiver_qubit(const StateVector& reg, BsmOutcome outcome) {
  const std::size_t base = static_cast<std::size_t>(outcome.bit1) |
                           (static_cast<std::size_t>(outcome.bit2) << 1);
  Eigen::VectorXcd out(2);
  out(0) = reg.amplitude(base);
  out(1) = reg.amplitude(base | 4);
  out /= out.norm();
  return StateVector::from_amplitudes(std::move(out));
}

}  // namespace

void bsm_rotate(StateVector& state, int qa, int qb) {
  state.apply(Gate::cnot(qa, qb));
  state.apply(Gate::h(qa));
}

BsmResult bsm(const StateVector& state, int qa, int qb, Rng& rng) {
  if (qa == qb) throw UsageError("BSM needs two distinct qubits");
  StateVector s = state;
  bsm_rotate(s, qa, qb);
  const auto z = MeasurementBasis::z();
  auto first = kernel::measure(s, qa, z, rng);
  auto second = kernel::measure(first.state, qb, z, rng);
  return {{first.bit, second.bit}, std::move(second.state)};
}

SwapResult entanglement_swap(Rng& rng) {
  StateVector s = kernel::new_register(4);
  s.apply(Gate::h(0));
  s.apply(Gate::h(3));
  s.apply(Gate::cnot(0, 1));
  s.apply(Gate::cnot(3, 2));
  auto result = bsm(s, 1, 2, rng);
  apply_corrections(result.state, 3, result.outcome);
  return {std::move(result.state), result.outcome};
}

SwapCircuitTable swap_circuit_table() {
  SwapCircuitTable table{};
  StateVector s = kernel::new_register(4);
  s.apply(Gate::h(0));
  s.apply(Gate::h(3));
  table.steps[0] = distribution(s);
  s.apply(Gate::cnot(0, 1));
  s.apply(Gate::cnot(3, 2));
  table.steps[1] = distribution(s);
  bsm_rotate(s, 1, 2);
  table.steps[2] = distribution(s);
  table.steps[3].fill(0.0);
  for (BsmOutcome outcome : kAllOutcomes) {
    auto branch = project_pair(s, 1, 2, outcome);
    if (!branch) continue;
    apply_corrections(branch->second, 3, outcome);
    const auto d = distribution(branch->second);
    for (std::size_t i = 0; i < 16; ++i) {
      table.steps[3][i] += branch->first * d[i];
    }
  }
  return table;
}

DensityMatrix entanglement_swap_dm(const DensityMatrix& left,
                                   const DensityMatrix& right) {
  if (left.num_qubits() != 2 || right.num_qubits() != 2) {
    throw UsageError("swap expects two two-qubit states");
  }
  DensityMatrix joint = kernel::tensor(left, right);
  joint.apply(Gate::cnot(1, 2));
  joint.apply(Gate::h(1));
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(4, 4);
  for (BsmOutcome outcome : kAllOutcomes) {
    auto branch = project_pair(joint, 1, 2, outcome);
    if (!branch) continue;
    apply_corrections(branch->second, 3, outcome);
    acc += branch->first * kernel::partial_trace(branch->second, {1, 2}).matrix();
  }
  return DensityMatrix::from_matrix(std::move(acc));
}

TeleportResult teleport(const StateVector& input, Rng& rng) {
  StateVector reg = embed_input(input);
  auto result = bsm(reg, 0, 1, rng);
  apply_corrections(result.state, 2, result.outcome);
  StateVector out = receiver_qubit(result.state, result.outcome);
  return {std::move(out), result.outcome, std::move(result.state)};
}

std::optional<TeleportResult> teleport_branch(const StateVector& input,
                                              BsmOutcome outcome) {
  StateVector reg = embed_input(input);
  bsm_rotate(reg, 0, 1);
  auto branch = project_pair(reg, 0, 1, outcome);
  if (!branch) return std::nullopt;
  apply_corrections(branch->second, 2, outcome);
  StateVector out = receiver_qubit(branch->second, outcome);
  return TeleportResult{std::move(out), outcome, std::move(branch->second)};
}

DensityMatrix teleport_output_before_correction(const StateVector& input) {
  StateVector reg = embed_input(input);
  bsm_rotate(reg, 0, 1);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(2, 2);
  for (BsmOutcome outcome : kAllOutcomes) {
    auto branch = project_pair(reg, 0, 1, outcome);
    if (!branch) continue;
    acc += branch->first *
           kernel::partial_trace(DensityMatrix(branch->second), {0, 1}).matrix();
  }
  return DensityMatrix::from_matrix(std::move(acc));
}

E91Result e91_run(const E91Config& cfg, double channel_fidelity, Rng& rng) {
  if (cfg.n < 1) throw UsageError("E91 needs at least one pair");
  if (cfg.basis_set.empty()) throw UsageError("E91 basis set is empty");
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
    throw UsageError("test_fraction must lie in (0, 1)");
  }
  if (!(cfg.abort_threshold >= 0.0 && cfg.abort_threshold < 1.0)) {
    throw UsageError("abort_threshold must lie in [0, 1)");
  }
  if (!(channel_fidelity >= 0.25 && channel_fidelity <= 1.0)) {
    throw DomainError("channel fidelity must lie in [1/4, 1]");
  }

  const auto& bases = cfg.basis_set;
  const std::uint64_t k = bases.size();
  const bool eve = cfg.eavesdropper == Eavesdropper::InterceptResend;
  const bool pure = channel_fidelity == 1.0;
  const DensityMatrix werner = kernel::make_werner(channel_fidelity);

  std::vector<std::uint8_t> alice(cfg.n), bob(cfg.n);
  std::vector<std::size_t> sifted;
  for (std::size_t round = 0; round < cfg.n; ++round) {
    const std::size_t a = rng.below(k);
    const std::size_t b = rng.below(k);
    if (pure) {
      StateVector s = kernel::make_bell_pair();
      if (eve) {
        // Eve measures Bob's half in transit and resends the eigenstate she
        // observed, which is exactly the collapsed state.
        s = kernel::measure(s, 1, bases[rng.below(k)], rng).state;
      }
      auto ma = kernel::measure(s, 0, bases[a], rng);
      auto mb = kernel::measure(ma.state, 1, bases[b], rng);
      alice[round] = static_cast<std::uint8_t>(ma.bit);
      bob[round] = static_cast<std::uint8_t>(mb.bit);
    } else {
      DensityMatrix s = werner;
      if (eve) s = kernel::dm_measure(s, 1, bases[rng.below(k)], rng).state;
      auto ma = kernel::dm_measure(s, 0, bases[a], rng);
      auto mb = kernel::dm_measure(ma.state, 1, bases[b], rng);
      alice[round] = static_cast<std::uint8_t>(ma.bit);
      bob[round] = static_cast<std::uint8_t>(mb.bit);
    }
    if (a == b) sifted.push_back(round);
  }

  E91Result result;
  result.sifted_count = sifted.size();
  const auto tested = static_cast<std::size_t>(
      std::floor(cfg.test_fraction * static_cast<double>(sifted.size())));
  if (tested == 0) {
    throw ProtocolError("too few sifted rounds (" +
                        std::to_string(sifted.size()) +
                        ") to populate the test subset");
  }
  result.tested_count = tested;

  // Partial Fisher-Yates: the first `tested` slots become the test subset.
  std::vector<std::size_t> order(sifted.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < tested; ++i) {
    const std::size_t j = i + rng.below(order.size() - i);
    std::swap(order[i], order[j]);
  }
  std::vector<bool> is_test(sifted.size(), false);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < tested; ++i) {
    is_test[order[i]] = true;
    const std::size_t round = sifted[order[i]];
    if (alice[round] != bob[round]) ++mismatches;
  }
  result.qber_estimate =
      static_cast<double>(mismatches) / static_cast<double>(tested);
  result.aborted = result.qber_estimate > cfg.abort_threshold;
  if (result.aborted) return result;

  for (std::size_t i = 0; i < sifted.size(); ++i) {
    if (is_test[i]) continue;
    result.key_alice.push_back(alice[sifted[i]]);
    result.key_bob.push_back(bob[sifted[i]]);
  }
  return result;
}

BbpsswEvaluation bbpssw_evaluate(const DensityMatrix& pair1,
                                 const DensityMatrix& pair2) {
  if (pair1.num_qubits() != 2 || pair2.num_qubits() != 2) {
    throw UsageError("BBPSSW expects two two-qubit states");
  }
  DensityMatrix joint = kernel::tensor(pair1, pair2);
  // Alice holds 0 and 2, Bob holds 1 and 3.
  joint.apply(Gate::cnot(0, 2));
  joint.apply(Gate::cnot(1, 3));
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(4, 4);
  double success = 0.0;
  for (BsmOutcome agree : {BsmOutcome{0, 0}, BsmOutcome{1, 1}}) {
    auto branch = project_pair(joint, 2, 3, agree);
    if (!branch) continue;
    success += branch->first;
    acc += branch->first * kernel::partial_trace(branch->second, {2, 3}).matrix();
  }
  if (success < 1e-15) return {0.0, std::nullopt, 0.0};
  auto surviving = DensityMatrix::from_matrix(acc / success);
  const double f = kernel::fidelity_to_bell(surviving);
  return {success, std::move(surviving), f};
}

DistillResult distill_bbpssw(const DensityMatrix& pair1,
                             const DensityMatrix& pair2, Rng& rng) {
  if (!kernel::is_werner(pair1) || !kernel::is_werner(pair2)) {
    throw DomainError("BBPSSW inputs must be Werner states");
  }
  const auto eval = bbpssw_evaluate(pair1, pair2);
  if (!rng.bernoulli(eval.success_probability)) return {false, std::nullopt};
  return {true, kernel::make_werner(std::clamp(eval.fidelity, 0.25, 1.0))};
}

}  // namespace qnet::protocols
