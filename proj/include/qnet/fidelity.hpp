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

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>

// Scalar fidelity algebra for Werner pairs.
namespace qnet::fidelity {

inline constexpr double kFloor = 0.25;

struct FidelityParams {
  // Coherence time in slots; infinity disables decay.
  double coherence_time = std::numeric_limits<double>::infinity();
  // Age (in slots) at which a pair is discarded; empty means never.
  std::optional<std::int64_t> cutoff_age = 1;

  friend bool operator==(const FidelityParams&,
                         const FidelityParams&) = default;
};

// Throws DomainError on T <= 0 or cutoff < 1.
void validate(const FidelityParams& params);

/// Depolarizing decay towards the maximally mixed state:
/// 1/4 + (F - 1/4) exp(-elapsed / T).
double decay(double f, double elapsed, const FidelityParams& params);

/// Fidelity of the outer pair after swapping two Werner pairs:
/// F1 F2 + (1 - F1)(1 - F2) / 3.
double swap_fidelity(double f1, double f2);

struct DistillOutcome {
  double fidelity;
  double success_probability;
};

/// One BBPSSW round on two Werner pairs, with the output twirled back to
/// Werner form.
DistillOutcome distill_fidelity(double f1, double f2);

/// Left fold of swap_fidelity along a path. Throws UsageError when empty.
double chain_fidelity(std::span<const double> fidelities);

}  // namespace qnet::fidelity
