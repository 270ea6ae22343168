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

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "qnet/rng.hpp"

// Exact simulation of small registers.
//
// Qubit 0 is the least significant bit of the amplitude-array index, so the
// basis state |q_{n-1} ... q_1 q_0> sits at index sum_k q_k * 2^k.
namespace qnet::kernel {

using Complex = std::complex<double>;

inline constexpr double kStateTol = 1e-10;
inline constexpr double kMatrixTol = 1e-12;
inline constexpr double kEigenTol = 1e-9;

inline constexpr int kMaxStateQubits = 6;
inline constexpr int kMaxDensityQubits = 4;

enum class GateKind { H, X, Z, CNOT };

struct Gate {
  GateKind kind;
  // One qubit for H/X/Z; {control, target} for CNOT.
  std::vector<int> qubits;

  static Gate h(int q) { return {GateKind::H, {q}}; }
  static Gate x(int q) { return {GateKind::X, {q}}; }
  static Gate z(int q) { return {GateKind::Z, {q}}; }
  static Gate cnot(int control, int target) {
    return {GateKind::CNOT, {control, target}};
  }
};

// Matrix of a gate kind in its own local ordering. For CNOT the control is
// local bit 0 and the target local bit 1.
Eigen::MatrixXcd gate_matrix(GateKind kind);

/// Measurement axis in the X-Z plane of the Bloch sphere.
///
/// The outcome-0 eigenvector is cos(a/2)|0> + sin(a/2)|1> and the outcome-1
/// eigenvector is sin(a/2)|0> - cos(a/2)|1>, so angle 0 is the computational
/// (Z) basis and angle pi/2 is the X basis with |+> read as 0. Angles are
/// reduced modulo pi on construction.
class MeasurementBasis {
 public:
  explicit MeasurementBasis(double angle = 0.0);

  static MeasurementBasis z() { return MeasurementBasis(0.0); }
  static MeasurementBasis x();

  double angle() const { return angle_; }

  // Real 2x2 rotation taking the basis eigenvectors to |0>, |1>. It is
  // symmetric and its own inverse.
  Eigen::Matrix2cd rotation() const;

  friend bool operator==(const MeasurementBasis&,
                         const MeasurementBasis&) = default;

 private:
  double angle_;
};

class StateVector {
 public:
  // |0...0> on n qubits.
  explicit StateVector(int num_qubits);

  // Takes ownership of the amplitudes. Throws DomainError when the length is
  // not a power of two in range or the norm differs from 1 by more than
  // kStateTol.
  static StateVector from_amplitudes(Eigen::VectorXcd amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Complex amplitude(std::size_t index) const { return amps_(index); }
  double norm() const { return amps_.norm(); }

  void apply(const Gate& gate);
  // Applies an arbitrary 2x2 matrix to one qubit. No unitarity check.
  void apply_single(int qubit, const Eigen::Matrix2cd& m);

 private:
  StateVector(int num_qubits, Eigen::VectorXcd amps)
      : num_qubits_(num_qubits), amps_(std::move(amps)) {}

  void check_qubit(int qubit) const;

  int num_qubits_;
  Eigen::VectorXcd amps_;
};

struct OutcomeProbabilities {
  double p0;
  double p1;
};

struct Measurement {
  int bit;
  StateVector state;
};

// Result of projecting onto one outcome without sampling. `state` is empty
// when the outcome has zero probability.
struct Projection {
  double probability;
  std::optional<StateVector> state;
};

StateVector new_register(int num_qubits);
StateVector apply_gate(StateVector state, const Gate& gate);
StateVector make_bell_pair();

OutcomeProbabilities born_probabilities(const StateVector& state, int qubit,
                                        const MeasurementBasis& basis);
Projection project(const StateVector& state, int qubit,
                   const MeasurementBasis& basis, int bit);
Measurement measure(const StateVector& state, int qubit,
                    const MeasurementBasis& basis, Rng& rng);

// |<a|b>|
double overlap(const StateVector& a, const StateVector& b);

class DensityMatrix {
 public:
  // |0...0><0...0| on n qubits.
  explicit DensityMatrix(int num_qubits);
  explicit DensityMatrix(const StateVector& pure);

  // Validates trace, hermiticity and positivity; throws DomainError.
  static DensityMatrix from_matrix(Eigen::MatrixXcd m);
  static DensityMatrix maximally_mixed(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return m_; }

  double trace() const { return m_.trace().real(); }
  double purity() const { return (m_ * m_).trace().real(); }
  double min_eigenvalue() const;

  void apply(const Gate& gate);
  // rho -> U rho U^dagger for a full-register operator.
  void conjugate(const Eigen::MatrixXcd& u);

 private:
  DensityMatrix(int num_qubits, Eigen::MatrixXcd m)
      : num_qubits_(num_qubits), m_(std::move(m)) {}

  friend DensityMatrix tensor(const DensityMatrix&, const DensityMatrix&);
  friend DensityMatrix partial_trace(const DensityMatrix&, std::vector<int>);
  friend struct DensityProjection dm_project(const DensityMatrix&, int,
                                            const MeasurementBasis&, int);

  int num_qubits_;
  Eigen::MatrixXcd m_;
};

struct DensityMeasurement {
  int bit;
  DensityMatrix state;
};

struct DensityProjection {
  double probability;
  std::optional<DensityMatrix> state;
};

// Full 2^n x 2^n operator of a gate acting on an n-qubit register.
Eigen::MatrixXcd full_operator(const Gate& gate, int num_qubits);

DensityMatrix dm_apply(DensityMatrix dm, const Gate& gate);
DensityProjection dm_project(const DensityMatrix& dm, int qubit,
                             const MeasurementBasis& basis, int bit);
DensityMeasurement dm_measure(const DensityMatrix& dm, int qubit,
                              const MeasurementBasis& basis, Rng& rng);

// Traces out `traced` qubits. Remaining qubits keep their relative order and
// are renumbered from 0.
DensityMatrix partial_trace(const DensityMatrix& dm, std::vector<int> traced);

// Joint state with `low` on qubits [0, low.n) and `high` above it.
DensityMatrix tensor(const DensityMatrix& low, const DensityMatrix& high);

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

StateVector bell_state(BellState which);
DensityMatrix bell_projector(BellState which);

// F |Phi+><Phi+| + (1-F)/3 (other Bell projectors). F in [1/4, 1].
DensityMatrix make_werner(double fidelity);

// <Phi+|rho|Phi+> for a two-qubit state.
double fidelity_to_bell(const DensityMatrix& dm);

// True when the two-qubit state equals make_werner(fidelity_to_bell(dm))
// within `tol`.
bool is_werner(const DensityMatrix& dm, double tol = 1e-9);

}  // namespace qnet::kernel
