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

#include "qnet/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qnet/errors.hpp"

namespace qnet::kernel {

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

void apply_single_raw(Eigen::VectorXcd& v, int q, const Eigen::Matrix2cd& m) {
  const Eigen::Index bit = Eigen::Index{1} << q;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = v(i);
    const Complex a1 = v(i | bit);
    v(i) = m(0, 0) * a0 + m(0, 1) * a1;
    v(i | bit) = m(1, 0) * a0 + m(1, 1) * a1;
  }
}

void apply_cnot_raw(Eigen::VectorXcd& v, int control, int target) {
  const Eigen::Index cbit = Eigen::Index{1} << control;
  const Eigen::Index tbit = Eigen::Index{1} << target;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(v(i), v(i | tbit));
  }
}

Eigen::Matrix2cd single_matrix(GateKind kind) {
  Eigen::Matrix2cd m;
  switch (kind) {
    case GateKind::H:
      m << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
      break;
    case GateKind::X:
      m << 0, 1, 1, 0;
      break;
    case GateKind::Z:
      m << 1, 0, 0, -1;
      break;
    case GateKind::CNOT:
      throw UsageError("CNOT is not a single-qubit gate");
  }
  return m;
}

void check_gate(const Gate& gate, int num_qubits) {
  const std::size_t arity = gate.kind == GateKind::CNOT ? 2 : 1;
  if (gate.qubits.size() != arity) {
    throw UsageError("gate expects " + std::to_string(arity) + " qubit(s)");
  }
  for (int q : gate.qubits) {
    if (q < 0 || q >= num_qubits) {
      throw UsageError("gate qubit " + std::to_string(q) +
                       " out of range for " + std::to_string(num_qubits) +
                       "-qubit register");
    }
  }
  if (arity == 2 && gate.qubits[0] == gate.qubits[1]) {
    throw UsageError("CNOT control and target must differ");
  }
}

void apply_raw(Eigen::VectorXcd& v, const Gate& gate) {
  if (gate.kind == GateKind::CNOT) {
    apply_cnot_raw(v, gate.qubits[0], gate.qubits[1]);
  } else {
    apply_single_raw(v, gate.qubits[0], single_matrix(gate.kind));
  }
}

Eigen::MatrixXcd single_operator(int qubit, const Eigen::Matrix2cd& m,
                                 int num_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    Eigen::VectorXcd col = u.col(c);
    apply_single_raw(col, qubit, m);
    u.col(c) = col;
  }
  return u;
}

// Projector onto outcome `bit` of `basis` on one qubit, as a full operator.
Eigen::MatrixXcd outcome_projector(int qubit, const MeasurementBasis& basis,
                                   int bit, int num_qubits) {
  const Eigen::Matrix2cd r = basis.rotation();
  Eigen::Matrix2cd p = Eigen::Matrix2cd::Zero();
  p(bit, bit) = 1.0;
  return single_operator(qubit, r * p * r, num_qubits);
}

void check_qubit_index(int qubit, int num_qubits) {
  if (qubit < 0 || qubit >= num_qubits) {
    throw UsageError("qubit index " + std::to_string(qubit) +
                     " out of range for " + std::to_string(num_qubits) +
                     "-qubit register");
  }
}

void check_bit(int bit) {
  if (bit != 0 && bit != 1) throw UsageError("outcome bit must be 0 or 1");
}

int qubits_for_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return (Eigen::Index{1} << n) == dim ? n : -1;
}

}  // namespace

Eigen::MatrixXcd gate_matrix(GateKind kind) {
  if (kind != GateKind::CNOT) return single_matrix(kind);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
  m(1, 1) = m(3, 3) = 0.0;
  m(1, 3) = m(3, 1) = 1.0;
  return m;
}

MeasurementBasis::MeasurementBasis(double angle) {
  double a = std::fmod(angle, std::numbers::pi);
  if (a < 0) a += std::numbers::pi;
  if (a >= std::numbers::pi) a = 0.0;
  angle_ = a;
}

MeasurementBasis MeasurementBasis::x() {
  return MeasurementBasis(std::numbers::pi / 2);
}

Eigen::Matrix2cd MeasurementBasis::rotation() const {
  const double c = std::cos(angle_ / 2);
  const double s = std::sin(angle_ / 2);
  Eigen::Matrix2cd r;
  r << c, s, s, -c;
  return r;
}

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxStateQubits) {
    throw UsageError("register size must be in [1, " +
                     std::to_string(kMaxStateQubits) + "], got " +
                     std::to_string(num_qubits));
  }
  amps_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << num_qubits);
  amps_(0) = 1.0;
}

StateVector StateVector::from_amplitudes(Eigen::VectorXcd amplitudes) {
  const int n = qubits_for_dim(amplitudes.size());
  if (n < 1 || n > kMaxStateQubits) {
    throw DomainError("amplitude count must be 2^n with 1 <= n <= 6");
  }
  if (std::abs(amplitudes.norm() - 1.0) > kStateTol) {
    throw DomainError("state is not normalized");
  }
  return StateVector(n, std::move(amplitudes));
}

void StateVector::check_qubit(int qubit) const {
  check_qubit_index(qubit, num_qubits_);
}

void StateVector::apply(const Gate& gate) {
  check_gate(gate, num_qubits_);
  apply_raw(amps_, gate);
}

void StateVector::apply_single(int qubit, const Eigen::Matrix2cd& m) {
  check_qubit(qubit);
  apply_single_raw(amps_, qubit, m);
}

StateVector new_register(int num_qubits) { return StateVector(num_qubits); }

StateVector apply_gate(StateVector state, const Gate& gate) {
  state.apply(gate);
  return state;
}

StateVector make_bell_pair() {
  StateVector s(2);
  s.apply(Gate::h(0));
  s.apply(Gate::cnot(0, 1));
  return s;
}

OutcomeProbabilities born_probabilities(const StateVector& state, int qubit,
                                        const MeasurementBasis& basis) {
  check_qubit_index(qubit, state.num_qubits());
  Eigen::VectorXcd v = state.amplitudes();
  apply_single_raw(v, qubit, basis.rotation());
  const Eigen::Index bit = Eigen::Index{1} << qubit;
  double p1 = 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double p = std::norm(v(i));
    total += p;
    if (i & bit) p1 += p;
  }
  p1 /= total;
  return {1.0 - p1, p1};
}

Projection project(const StateVector& state, int qubit,
                   const MeasurementBasis& basis, int bit) {
  check_qubit_index(qubit, state.num_qubits());
  check_bit(bit);
  const Eigen::Matrix2cd r = basis.rotation();
  Eigen::VectorXcd v = state.amplitudes();
  apply_single_raw(v, qubit, r);
  const Eigen::Index mask = Eigen::Index{1} << qubit;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (((i & mask) != 0) != (bit == 1)) v(i) = 0.0;
  }
  const double prob = v.squaredNorm();
  if (prob < 1e-15) return {0.0, std::nullopt};
  v /= std::sqrt(prob);
  apply_single_raw(v, qubit, r);
  return {prob, StateVector::from_amplitudes(std::move(v))};
}

Measurement measure(const StateVector& state, int qubit,
                    const MeasurementBasis& basis, Rng& rng) {
  const auto probs = born_probabilities(state, qubit, basis);
  int bit = rng.uniform() < probs.p0 ? 0 : 1;
  auto proj = project(state, qubit, basis, bit);
  if (!proj.state) {
    bit ^= 1;
    proj = project(state, qubit, basis, bit);
  }
  return {bit, std::move(*proj.state)};
}

double overlap(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw UsageError("overlap of unequal registers");
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

DensityMatrix::DensityMatrix(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxDensityQubits) {
    throw UsageError("density matrix size must be in [1, " +
                     std::to_string(kMaxDensityQubits) + "] qubits");
  }
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  m_ = Eigen::MatrixXcd::Zero(dim, dim);
  m_(0, 0) = 1.0;
}

DensityMatrix::DensityMatrix(const StateVector& pure)
    : DensityMatrix(pure.num_qubits()) {
  m_ = pure.amplitudes() * pure.amplitudes().adjoint();
}

DensityMatrix DensityMatrix::from_matrix(Eigen::MatrixXcd m) {
  if (m.rows() != m.cols()) throw DomainError("density matrix must be square");
  const int n = qubits_for_dim(m.rows());
  if (n < 1 || n > kMaxDensityQubits) {
    throw DomainError("density matrix dimension must be 2^n, 1 <= n <= 4");
  }
  if (std::abs(m.trace() - Complex(1.0)) > kStateTol) {
    throw DomainError("density matrix trace differs from 1");
  }
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kStateTol) {
    throw DomainError("density matrix is not Hermitian");
  }
  DensityMatrix dm(n, std::move(m));
  if (dm.min_eigenvalue() < -kEigenTol) {
    throw DomainError("density matrix has a negative eigenvalue");
  }
  return dm;
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  DensityMatrix dm(num_qubits);
  dm.m_ = Eigen::MatrixXcd::Identity(dm.m_.rows(), dm.m_.cols()) /
          static_cast<double>(dm.m_.rows());
  return dm;
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      m_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityMatrix::apply(const Gate& gate) {
  conjugate(full_operator(gate, num_qubits_));
}

void DensityMatrix::conjugate(const Eigen::MatrixXcd& u) {
  if (u.rows() != m_.rows() || u.cols() != m_.cols()) {
    throw UsageError("operator dimension does not match density matrix");
  }
  m_ = u * m_ * u.adjoint();
}

Eigen::MatrixXcd full_operator(const Gate& gate, int num_qubits) {
  check_gate(gate, num_qubits);
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    Eigen::VectorXcd col = u.col(c);
    apply_raw(col, gate);
    u.col(c) = col;
  }
  return u;
}

DensityMatrix dm_apply(DensityMatrix dm, const Gate& gate) {
  dm.apply(gate);
  return dm;
}

DensityProjection dm_project(const DensityMatrix& dm, int qubit,
                             const MeasurementBasis& basis, int bit) {
  check_qubit_index(qubit, dm.num_qubits());
  check_bit(bit);
  const Eigen::MatrixXcd p =
      outcome_projector(qubit, basis, bit, dm.num_qubits());
  Eigen::MatrixXcd post = p * dm.m_ * p;
  const double prob = post.trace().real();
  if (prob < 1e-15) return {0.0, std::nullopt};
  post /= prob;
  return {prob, DensityMatrix(dm.num_qubits(), std::move(post))};
}

DensityMeasurement dm_measure(const DensityMatrix& dm, int qubit,
                              const MeasurementBasis& basis, Rng& rng) {
  auto zero = dm_project(dm, qubit, basis, 0);
  int bit = rng.uniform() < zero.probability ? 0 : 1;
  if (bit == 0 && zero.state) return {0, std::move(*zero.state)};
  auto one = dm_project(dm, qubit, basis, 1);
  if (one.state) return {1, std::move(*one.state)};
  return {0, std::move(*zero.state)};
}

DensityMatrix partial_trace(const DensityMatrix& dm, std::vector<int> traced) {
  const int n = dm.num_qubits();
  std::sort(traced.begin(), traced.end());
  traced.erase(std::unique(traced.begin(), traced.end()), traced.end());
  for (int q : traced) check_qubit_index(q, n);
  if (static_cast<int>(traced.size()) >= n) {
    throw UsageError("cannot trace out every qubit");
  }
  std::vector<int> kept;
  for (int q = 0; q < n; ++q) {
    if (!std::binary_search(traced.begin(), traced.end(), q)) kept.push_back(q);
  }

  auto scatter = [](Eigen::Index packed, const std::vector<int>& positions) {
    Eigen::Index out = 0;
    for (std::size_t k = 0; k < positions.size(); ++k) {
      if (packed & (Eigen::Index{1} << k)) out |= Eigen::Index{1} << positions[k];
    }
    return out;
  };

  const Eigen::Index kdim = Eigen::Index{1} << kept.size();
  const Eigen::Index tdim = Eigen::Index{1} << traced.size();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kdim, kdim);
  for (Eigen::Index i = 0; i < kdim; ++i) {
    const Eigen::Index ri = scatter(i, kept);
    for (Eigen::Index j = 0; j < kdim; ++j) {
      const Eigen::Index rj = scatter(j, kept);
      Complex sum = 0.0;
      for (Eigen::Index t = 0; t < tdim; ++t) {
        const Eigen::Index rt = scatter(t, traced);
        sum += dm.m_(ri | rt, rj | rt);
      }
      out(i, j) = sum;
    }
  }
  return DensityMatrix(static_cast<int>(kept.size()), std::move(out));
}

DensityMatrix tensor(const DensityMatrix& low, const DensityMatrix& high) {
  const int n = low.num_qubits() + high.num_qubits();
  if (n > kMaxDensityQubits) {
    throw UsageError("joint density matrix exceeds 4 qubits");
  }
  const Eigen::Index dl = low.m_.rows();
  const Eigen::Index dh = high.m_.rows();
  Eigen::MatrixXcd out(dl * dh, dl * dh);
  for (Eigen::Index hi = 0; hi < dh; ++hi) {
    for (Eigen::Index hj = 0; hj < dh; ++hj) {
      out.block(hi * dl, hj * dl, dl, dl) = high.m_(hi, hj) * low.m_;
    }
  }
  return DensityMatrix(n, std::move(out));
}

StateVector bell_state(BellState which) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  switch (which) {
    case BellState::PhiPlus:
      v(0) = kInvSqrt2;
      v(3) = kInvSqrt2;
      break;
    case BellState::PhiMinus:
      v(0) = kInvSqrt2;
      v(3) = -kInvSqrt2;
      break;
    case BellState::PsiPlus:
      v(1) = kInvSqrt2;
      v(2) = kInvSqrt2;
      break;
    case BellState::PsiMinus:
      v(1) = kInvSqrt2;
      v(2) = -kInvSqrt2;
      break;
  }
  return StateVector::from_amplitudes(std::move(v));
}

DensityMatrix bell_projector(BellState which) {
  return DensityMatrix(bell_state(which));
}

DensityMatrix make_werner(double fidelity) {
  if (!(fidelity >= 0.25 - kMatrixTol && fidelity <= 1.0 + kMatrixTol)) {
    throw DomainError("Werner fidelity must lie in [1/4, 1], got " +
                      std::to_string(fidelity));
  }
  fidelity = std::clamp(fidelity, 0.25, 1.0);
  const double noise = (1.0 - fidelity) / 3.0;
  // Sum of the four Bell projectors is the identity.
  Eigen::MatrixXcd m = noise * Eigen::MatrixXcd::Identity(4, 4) +
                       (fidelity - noise) *
                           bell_projector(BellState::PhiPlus).matrix();
  return DensityMatrix::from_matrix(std::move(m));
}

double fidelity_to_bell(const DensityMatrix& dm) {
  if (dm.num_qubits() != 2) {
    throw UsageError("Bell fidelity needs a two-qubit state");
  }
  const Eigen::VectorXcd phi = bell_state(BellState::PhiPlus).amplitudes();
  return (phi.adjoint() * dm.matrix() * phi)(0, 0).real();
}

bool is_werner(const DensityMatrix& dm, double tol) {
  if (dm.num_qubits() != 2) return false;
  const double f = fidelity_to_bell(dm);
  if (f < 0.25 - tol || f > 1.0 + tol) return false;
  const auto ref = make_werner(std::clamp(f, 0.25, 1.0));
  return (dm.matrix() - ref.matrix()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace qnet::kernel
