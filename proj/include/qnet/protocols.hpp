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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qnet/kernel.hpp"
#include "qnet/rng.hpp"

// Gate-level network primitives executed on the exact kernel.
//
// The canonical entangled pair is |Phi+> = (|00> + |11>)/sqrt(2): both halves
// always read the same bit in any shared real basis.
namespace qnet::protocols {

using kernel::DensityMatrix;
using kernel::StateVector;

/// Classical result of a Bell-state measurement.
///
/// `bit1` is read from the control qubit after the Hadamard and flags a phase
/// flip; `bit2` is read from the target and flags a bit flip. |Phi+> gives
/// (0,0), |Phi-> (1,0), |Psi+> (0,1) and |Psi-> (1,1).
struct BsmOutcome {
  int bit1 = 0;
  int bit2 = 0;

  friend bool operator==(const BsmOutcome&, const BsmOutcome&) = default;
};

struct BsmResult {
  BsmOutcome outcome;
  StateVector state;
};

// CNOT(qa -> qb), H(qa), then Z-measure qa and qb.
BsmResult bsm(const StateVector& state, int qa, int qb, Rng& rng);

// Applies CNOT(qa -> qb) and H(qa) only.
void bsm_rotate(StateVector& state, int qa, int qb);

struct SwapResult {
  StateVector state;
  BsmOutcome outcome;
};

// Four-qubit swap circuit from |0000>: pairs (0,1) and (3,2) are entangled,
// qubits 1 and 2 go through a BSM, and qubit 3 receives X^bit2 then Z^bit1.
// Qubits 0 and 3 end in |Phi+>.
SwapResult entanglement_swap(Rng& rng);

// Joint outcome distribution over the 16 basis states of the swap circuit
// after each stage: (a) Hadamards, (b) CNOTs, (c) BSM gates, (d) BSM
// measurement plus corrections, averaged over measurement outcomes.
struct SwapCircuitTable {
  std::array<std::array<double, 16>, 4> steps;
};
SwapCircuitTable swap_circuit_table();

// Swaps two two-qubit states held on (0,1) and (2,3) with a BSM on (1,2) and
// full corrections on 3, averaged over the four outcomes. Returns the state of
// the outer pair (0,3).
DensityMatrix entanglement_swap_dm(const DensityMatrix& left,
                                   const DensityMatrix& right);

struct TeleportResult {
  StateVector output;
  BsmOutcome outcome;
  // Three-qubit register after corrections: 0 = source, 1 = sender's half,
  // 2 = receiver's half.
  StateVector state;
};

// Throws DomainError unless `input` is a normalized single-qubit state.
TeleportResult teleport(const StateVector& input, Rng& rng);

// Deterministic branch of teleport for a fixed BSM outcome; empty when the
// branch has zero probability.
std::optional<TeleportResult> teleport_branch(const StateVector& input,
                                              BsmOutcome outcome);

// Receiver's reduced state after the BSM but before any correction, averaged
// over the unknown outcome.
DensityMatrix teleport_output_before_correction(const StateVector& input);

enum class Eavesdropper { None, InterceptResend };

struct E91Config {
  std::size_t n = 1000;
  std::vector<kernel::MeasurementBasis> basis_set{
      kernel::MeasurementBasis::z(), kernel::MeasurementBasis::x()};
  double test_fraction = 0.5;
  double abort_threshold = 0.05;
  Eavesdropper eavesdropper = Eavesdropper::None;
};

struct E91Result {
  std::vector<std::uint8_t> key_alice;
  std::vector<std::uint8_t> key_bob;
  double qber_estimate = 0.0;
  bool aborted = false;
  std::size_t sifted_count = 0;
  std::size_t tested_count = 0;
};

// One E91 session over a Werner channel. Bases of every round are disclosed
// for sifting; outcomes are disclosed only for the test subset, which is
// removed from the key.
E91Result e91_run(const E91Config& cfg, double channel_fidelity, Rng& rng);

struct BbpsswEvaluation {
  double success_probability;
  // Surviving pair conditioned on success, before twirling.
  std::optional<DensityMatrix> surviving;
  double fidelity;
};

// Exact evaluation of one BBPSSW round on the four-qubit joint state. Pair 1
// sits on qubits (0,1) and survives; pair 2 sits on (2,3) and is measured.
BbpsswEvaluation bbpssw_evaluate(const DensityMatrix& pair1,
                                 const DensityMatrix& pair2);

struct DistillResult {
  bool success = false;
  // Werner-twirled surviving pair when `success`.
  std::optional<DensityMatrix> pair;
};

// Throws DomainError when either input is not a Werner state.
DistillResult distill_bbpssw(const DensityMatrix& pair1,
                             const DensityMatrix& pair2, Rng& rng);

}  // namespace qnet::protocols
