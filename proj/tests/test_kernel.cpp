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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "qnet/errors.hpp"
#include "qnet/kernel.hpp"

namespace qnet::kernel {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Register, FreshRegisterIsAllZero) {
  for (int n = 1; n <= kMaxStateQubits; ++n) {
    StateVector s = new_register(n);
    EXPECT_EQ(s.dim(), std::size_t{1} << n);
    EXPECT_NEAR(std::abs(s.amplitude(0)), 1.0, kStateTol);
    EXPECT_NEAR(s.norm(), 1.0, kStateTol);
  }
}

TEST(Register, SizeBounds) {
  EXPECT_THROW(new_register(0), UsageError);
  EXPECT_THROW(new_register(7), UsageError);
}

TEST(Register, FromAmplitudesRejectsUnnormalized) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(4);
  EXPECT_THROW(StateVector::from_amplitudes(v), DomainError);
  EXPECT_THROW(StateVector::from_amplitudes(Eigen::VectorXcd::Ones(3) / std::sqrt(3.0)),
               DomainError);
}

TEST(Gates, MatricesAreUnitary) {
  for (GateKind k : {GateKind::H, GateKind::X, GateKind::Z, GateKind::CNOT}) {
    Eigen::MatrixXcd u = gate_matrix(k);
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    EXPECT_LT((u.adjoint() * u - id).norm(), kMatrixTol);
  }
}

TEST(Gates, FullOperatorsMatchKroneckerOracle) {
  using oracle::op;
  const int n = 3;
  for (int q = 0; q < n; ++q) {
    EXPECT_LT((full_operator(Gate::h(q), n) - op(n, {{q, oracle::H()}})).norm(), kMatrixTol);
    EXPECT_LT((full_operator(Gate::x(q), n) - op(n, {{q, oracle::X()}})).norm(), kMatrixTol);
    EXPECT_LT((full_operator(Gate::z(q), n) - op(n, {{q, oracle::Z()}})).norm(), kMatrixTol);
    for (int t = 0; t < n; ++t) {
      if (t == q) continue;
      EXPECT_LT((full_operator(Gate::cnot(q, t), n) - oracle::cnot(n, q, t)).norm(),
                kMatrixTol);
    }
  }
}

TEST(Gates, GateThenInverseRestoresState) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXcd v(8);
    for (int i = 0; i < 8; ++i) v(i) = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
    v.normalize();
    const StateVector s = StateVector::from_amplitudes(v);
    for (const Gate& g : {Gate::h(0), Gate::x(1), Gate::z(2), Gate::cnot(2, 0),
                          Gate::cnot(0, 1)}) {
      StateVector t = apply_gate(apply_gate(s, g), g);  // all self-inverse
      EXPECT_LT((t.amplitudes() - s.amplitudes()).norm(), kStateTol);
      EXPECT_NEAR(apply_gate(s, g).norm(), 1.0, kStateTol);
    }
  }
}

TEST(Gates, XFlipsQubitZero) {
  StateVector s = apply_gate(new_register(2), Gate::x(0));
  EXPECT_NEAR(std::abs(s.amplitude(1)), 1.0, kStateTol);
}

TEST(Gates, BellConstruction) {
  StateVector s = make_bell_pair();
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(s.amplitude(0).real(), r, kStateTol);
  EXPECT_NEAR(s.amplitude(3).real(), r, kStateTol);
  EXPECT_NEAR(std::abs(s.amplitude(1)), 0.0, kStateTol);
  EXPECT_NEAR(std::abs(s.amplitude(2)), 0.0, kStateTol);
  EXPECT_LT((s.amplitudes() - oracle::phi_plus()).norm(), kStateTol);
}

TEST(Gates, InvalidTargets) {
  StateVector s = new_register(2);
  EXPECT_THROW(s.apply(Gate::h(2)), UsageError);
  EXPECT_THROW(s.apply(Gate::cnot(1, 1)), UsageError);
  EXPECT_THROW(s.apply(Gate{GateKind::CNOT, {0}}), UsageError);
}

TEST(Basis, AngleReducedModPi) {
  EXPECT_NEAR(MeasurementBasis(kPi + 0.3).angle(), 0.3, 1e-12);
  EXPECT_NEAR(MeasurementBasis(-0.3).angle(), kPi - 0.3, 1e-12);
  EXPECT_EQ(MeasurementBasis(kPi).angle(), 0.0);
}

TEST(Born, ZeroAndPlus) {
  auto p = born_probabilities(new_register(1), 0, MeasurementBasis::z());
  EXPECT_NEAR(p.p0, 1.0, kStateTol);
  auto plus = apply_gate(new_register(1), Gate::h(0));
  auto q = born_probabilities(plus, 0, MeasurementBasis::z());
  EXPECT_NEAR(q.p0, 0.5, kStateTol);
  auto r = born_probabilities(plus, 0, MeasurementBasis::x());
  EXPECT_NEAR(r.p0, 1.0, kStateTol);
}

TEST(Born, PartnerAfterCollapse) {
  // first qubit Z-measured to 0; P(partner = 0) at angle t is cos^2(t/2)
  const double expected[3] = {1.0, 0.85355339059327373, 0.5};
  const double angles[3] = {0.0, kPi / 4, kPi / 2};
  for (int i = 0; i < 3; ++i) {
    auto pr = project(make_bell_pair(), 0, MeasurementBasis::z(), 0);
    ASSERT_TRUE(pr.state);
    auto p = born_probabilities(*pr.state, 1, MeasurementBasis(angles[i]));
    EXPECT_NEAR(p.p0, expected[i], kStateTol);
  }
}

TEST(Born, CorrelationCurveMatchesOracle) {
  const Eigen::VectorXcd phi = oracle::phi_plus();
  for (int k = 0; k < 20; ++k) {
    const double a = 0.37 * k;
    const double b = kPi * k / 20.0;
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        // a basis is an axis: angles are taken mod pi before labelling outcomes
        const Eigen::VectorXcd v = oracle::kron(oracle::basis_vec(b, y),
                                                oracle::basis_vec(std::fmod(a, kPi), x));
        const double want = std::norm(v.dot(phi));
        auto first = project(make_bell_pair(), 0, MeasurementBasis(a), x);
        double got = 0.0;
        if (first.state) {
          got = first.probability *
                project(*first.state, 1, MeasurementBasis(b), y).probability;
        }
        EXPECT_NEAR(got, want, kStateTol) << "k=" << k << " x=" << x << " y=" << y;
      }
    }
  }
}

TEST(Measure, Idempotent) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const MeasurementBasis basis(0.13 * static_cast<double>(seed));
    StateVector s = make_bell_pair();
    s.apply(Gate::h(1));
    auto m1 = measure(s, 1, basis, rng);
    auto m2 = measure(m1.state, 1, basis, rng);
    EXPECT_EQ(m1.bit, m2.bit);
    EXPECT_NEAR(m2.state.norm(), 1.0, kStateTol);
  }
}

TEST(Measure, ImpossibleOutcomeHasNoState) {
  auto pr = project(new_register(1), 0, MeasurementBasis::z(), 1);
  EXPECT_NEAR(pr.probability, 0.0, kStateTol);
  EXPECT_FALSE(pr.state.has_value());
}

TEST(Measure, CollapseBreaksEntanglement) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const MeasurementBasis basis(0.21 * static_cast<double>(seed));
    auto m = measure(make_bell_pair(), 0, basis, rng);
    DensityMatrix partner = partial_trace(DensityMatrix(m.state), {0});
    EXPECT_NEAR(partner.purity(), 1.0, kStateTol);
    DensityMatrix self = partial_trace(DensityMatrix(m.state), {1});
    EXPECT_NEAR(self.purity(), 1.0, kStateTol);
  }
}

TEST(Measure, BadArguments) {
  Rng rng(1);
  EXPECT_THROW(measure(new_register(1), 1, MeasurementBasis::z(), rng), UsageError);
  EXPECT_THROW(project(new_register(1), 0, MeasurementBasis::z(), 2), UsageError);
}

TEST(Density, PartialTraceOfBellIsMixed) {
  DensityMatrix bell(make_bell_pair());
  for (int q : {0, 1}) {
    DensityMatrix r = partial_trace(bell, {q});
    EXPECT_LT((r.matrix() - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).norm(), kStateTol);
  }
}

TEST(Density, PartialTraceOfProduct) {
  DensityMatrix r = partial_trace(DensityMatrix(new_register(2)), {1});
  EXPECT_NEAR(r.matrix()(0, 0).real(), 1.0, kStateTol);
  EXPECT_NEAR(r.purity(), 1.0, kStateTol);
}

TEST(Density, PartialTraceKeepsOrderAgainstOracle) {
  Rng rng(3);
  Eigen::VectorXcd v(8);
  for (int i = 0; i < 8; ++i) v(i) = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
  v.normalize();
  DensityMatrix dm(StateVector::from_amplitudes(v));
  DensityMatrix r = partial_trace(dm, {1});
  Eigen::MatrixXcd want = oracle::keep_two(v * v.adjoint(), 3, 0, 2);
  EXPECT_LT((r.matrix() - want).norm(), kStateTol);
}

TEST(Density, XOnBellGivesPsiPlus) {
  DensityMatrix d = dm_apply(DensityMatrix(make_bell_pair()), Gate::x(0));
  EXPECT_LT((d.matrix() - bell_projector(BellState::PsiPlus).matrix()).norm(), kStateTol);
  EXPECT_NEAR(fidelity_to_bell(d), 0.0, kStateTol);
  EXPECT_NEAR(d.trace(), 1.0, kStateTol);
}

TEST(Density, MeasurementAgreesWithStatevector) {
  StateVector s = apply_gate(make_bell_pair(), Gate::h(0));
  const MeasurementBasis basis(0.7);
  for (int bit = 0; bit < 2; ++bit) {
    auto sv = project(s, 1, basis, bit);
    auto dm = dm_project(DensityMatrix(s), 1, basis, bit);
    EXPECT_NEAR(sv.probability, dm.probability, kStateTol);
    ASSERT_TRUE(sv.state && dm.state);
    EXPECT_LT((DensityMatrix(*sv.state).matrix() - dm.state->matrix()).norm(), kStateTol);
    EXPECT_NEAR(dm.state->trace(), 1.0, kStateTol);
  }
}

TEST(Density, TensorPlacesLowFactorOnLowQubits) {
  DensityMatrix one = DensityMatrix(apply_gate(new_register(1), Gate::x(0)));
  DensityMatrix zero = DensityMatrix(new_register(1));
  DensityMatrix t = tensor(one, zero);
  EXPECT_NEAR(t.matrix()(1, 1).real(), 1.0, kStateTol);
}

TEST(Density, DimensionErrors) {
  DensityMatrix d(2);
  EXPECT_THROW(d.apply(Gate::x(2)), UsageError);
  EXPECT_THROW(partial_trace(d, {2}), UsageError);
  EXPECT_THROW(fidelity_to_bell(DensityMatrix(3)), UsageError);
  EXPECT_THROW(DensityMatrix(5), UsageError);
}

TEST(Werner, FidelityRoundTrip) {
  for (double f : {0.25, 0.4, 0.7, 1.0}) {
    DensityMatrix w = make_werner(f);
    EXPECT_NEAR(fidelity_to_bell(w), f, kStateTol);
    EXPECT_NEAR(w.trace(), 1.0, kStateTol);
    EXPECT_TRUE(is_werner(w));
    EXPECT_LT((w.matrix() - oracle::werner(f)).norm(), kStateTol);
  }
  EXPECT_LT((make_werner(0.25).matrix() - DensityMatrix::maximally_mixed(2).matrix()).norm(),
            kStateTol);
  EXPECT_NEAR(make_werner(1.0).purity(), 1.0, kStateTol);
}

TEST(Werner, OutOfRange) {
  EXPECT_THROW(make_werner(0.2), DomainError);
  EXPECT_THROW(make_werner(1.01), DomainError);
  EXPECT_FALSE(is_werner(bell_projector(BellState::PsiPlus)));
}

TEST(Werner, BellStatesAreOrthonormal) {
  const BellState all[4] = {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus,
                            BellState::PsiMinus};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_NEAR(overlap(bell_state(all[i]), bell_state(all[j])), i == j ? 1.0 : 0.0,
                  kStateTol);
}

}  // namespace
}  // namespace qnet::kernel
