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

#include "qnet/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qnet/errors.hpp"

namespace qnet::fidelity {

namespace {

void check(double f) {
  if (!(f >= kFloor && f <= 1.0)) {
    throw DomainError("fidelity must lie in [1/4, 1], got " +
                      std::to_string(f));
  }
}

}  // namespace

void validate(const FidelityParams& params) {
  if (!(params.coherence_time > 0.0)) {
    throw DomainError("coherence time must be positive");
  }
  if (params.cutoff_age && *params.cutoff_age < 1) {
    throw DomainError("cutoff age must be at least 1");
  }
}

double decay(double f, double elapsed, const FidelityParams& params) {
  check(f);
  if (!(elapsed >= 0.0)) throw DomainError("elapsed time must be nonnegative");
  validate(params);
  if (std::isinf(params.coherence_time)) return f;
  return kFloor + (f - kFloor) * std::exp(-elapsed / params.coherence_time);
}

double swap_fidelity(double f1, double f2) {
  check(f1);
  check(f2);
  return std::clamp(f1 * f2 + (1.0 - f1) * (1.0 - f2) / 3.0, kFloor, 1.0);
}

DistillOutcome distill_fidelity(double f1, double f2) {
  check(f1);
  check(f2);
  // Bell-diagonal weights: Phi+ = F, every other Bell state (1 - F) / 3.
  // Success keeps pairs of equal parity; the survivor is Phi+ when the
  // phases also agree, i.e. Phi+Phi+ or Phi-Phi-.
  const double n1 = (1.0 - f1) / 3.0;
  const double n2 = (1.0 - f2) / 3.0;
  const double p = (f1 + n1) * (f2 + n2) + (2.0 * n1) * (2.0 * n2);
  return {std::clamp((f1 * f2 + n1 * n2) / p, kFloor, 1.0), p};
}

double chain_fidelity(std::span<const double> fidelities) {
  if (fidelities.empty()) throw UsageError("chain of zero links");
  double acc = fidelities.front();
  check(acc);
  for (auto it = fidelities.begin() + 1; it != fidelities.end(); ++it) {
    acc = swap_fidelity(acc, *it);
  }
  return acc;
}

}  // namespace qnet::fidelity
