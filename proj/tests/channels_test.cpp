// Copyright 2026 The bangbang Authors
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

#include "bangbang/channels.hpp"

#include <algorithm>

#include <gtest/gtest.h>

#include "bangbang/presets.hpp"
#include "test_util.hpp"

using namespace bb;
using bb::testing::max_abs_diff;

namespace {

CMatrix pauli_x() {
  CMatrix s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

Eigen::VectorXd spectrum(const CMatrix& m) {
  return Eigen::SelfAdjointEigenSolver<CMatrix>(m).eigenvalues();
}

}  // namespace

TEST(channels, density_validation) {
  EXPECT_THROW(DensityMatrix(CMatrix::Identity(2, 2), StateKind::UnitTrace), std::invalid_argument);
  EXPECT_NO_THROW(DensityMatrix(0.5 * CMatrix::Identity(2, 2), StateKind::UnitTrace));
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(DensityMatrix(a, StateKind::TracelessDeviation), std::invalid_argument);
  EXPECT_THROW(DensityMatrix(0.5 * CMatrix::Identity(2, 2), StateKind::TracelessDeviation), std::invalid_argument);
}

TEST(channels, deviation_is_idempotent) {
  std::mt19937_64 rng(3);
  const DensityMatrix rho = bb::testing::random_density(4, rng);
  const DensityMatrix d = rho.deviation();
  EXPECT_EQ(d.kind(), StateKind::TracelessDeviation);
  EXPECT_NEAR(std::abs(d.matrix().trace()), 0.0, 1e-14);
  EXPECT_LT(max_abs_diff(d.deviation().matrix(), d.matrix()), 1e-15);
}

TEST(channels, density_text_round_trip) {
  std::mt19937_64 rng(4);
  const DensityMatrix rho = bb::testing::random_density(4, rng);
  for (const DensityMatrix& m : {rho, rho.deviation()}) {
    const DensityMatrix back = parse_density(format_density(m));
    EXPECT_EQ(back.kind(), m.kind());
    EXPECT_EQ(back.matrix(), m.matrix());
  }
}

TEST(channels, unitary_fidelity_examples) {
  std::mt19937_64 rng(5);
  const CMatrix u = bb::testing::random_unitary(4, rng);
  EXPECT_NEAR(unitary_fidelity(u, u), 1.0, 1e-14);
  EXPECT_NEAR(unitary_fidelity(u, std::polar(1.0, 0.83) * u), 1.0, 1e-14);
  EXPECT_NEAR(unitary_fidelity(CMatrix::Identity(2, 2), pauli_x()), 0.0, 1e-15);
  EXPECT_THROW(unitary_fidelity(u, CMatrix::Identity(2, 2)), std::invalid_argument);
}

TEST(channels, unitary_fidelity_one_iff_global_phase) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    const CMatrix ut = bb::testing::random_unitary(4, rng);
    const CMatrix u = bb::testing::random_unitary(4, rng);
    const double f = unitary_fidelity(ut, u);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-12);
    // Reconstruct the phase from the overlap and compare.
    const CMatrix v = std::polar(1.0, 0.3 * i) * ut;
    const Complex ov = (ut.adjoint() * v).trace();
    EXPECT_NEAR(unitary_fidelity(ut, v), 1.0, 1e-12);
    EXPECT_LT(max_abs_diff(std::polar(1.0, std::arg(ov)) * ut, v), 1e-9);
    EXPECT_LT(f, 1.0 - 1e-6);
  }
}

TEST(channels, state_fidelity_examples) {
  std::mt19937_64 rng(7);
  const DensityMatrix rho = bb::testing::random_density(4, rng);
  EXPECT_NEAR(state_fidelity(rho, rho), 1.0, 1e-14);
  const DensityMatrix p0 = DensityMatrix::pure(CVector::Unit(4, 0));
  const DensityMatrix p3 = DensityMatrix::pure(CVector::Unit(4, 3));
  EXPECT_NEAR(state_fidelity(p0, p3), 0.0, 1e-15);
  const DensityMatrix q0 = DensityMatrix::pure(CVector::Unit(2, 0));
  const DensityMatrix mixed(0.5 * CMatrix::Identity(2, 2), StateKind::UnitTrace);
  EXPECT_THROW(state_fidelity(q0.deviation(), mixed.deviation()), std::domain_error);
  EXPECT_THROW(state_fidelity(q0, q0.deviation()), std::invalid_argument);
}

TEST(channels, state_fidelity_symmetry_and_covariance) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix a = bb::testing::random_density(4, rng).deviation();
    const DensityMatrix b = bb::testing::random_density(4, rng).deviation();
    const CMatrix u = bb::testing::random_unitary(4, rng);
    const double f = state_fidelity(a, b);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-12);
    EXPECT_NEAR(f, state_fidelity(b, a), 1e-14);
    EXPECT_NEAR(f, state_fidelity(evolve(a, u), evolve(b, u)), 1e-12);
  }
}

TEST(channels, twirl_examples) {
  const CMatrix diag = Eigen::Vector4cd(0.1, 0.2, 0.3, 0.4).asDiagonal();
  const DensityMatrix d(diag, StateKind::UnitTrace);
  EXPECT_EQ(twirl(d).matrix(), diag);
  CVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  EXPECT_LT(max_abs_diff(twirl(DensityMatrix::pure(plus)).matrix(), 0.5 * CMatrix::Identity(2, 2)), 1e-15);
}

TEST(channels, twirl_properties) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix rho = bb::testing::random_density(8, rng);
    const DensityMatrix t = twirl(rho);
    EXPECT_EQ(twirl(t).matrix(), t.matrix());
    EXPECT_NEAR(std::abs(t.matrix().trace() - rho.matrix().trace()), 0.0, 1e-14);
    EXPECT_GE(spectrum(t.matrix()).minCoeff(), -1e-14);
    CMatrix sigma = CMatrix::Zero(8, 8);
    for (int b = 0; b < 8; ++b) sigma(b, b) = n(rng);
    EXPECT_NEAR(std::abs((t.matrix() * sigma).trace() - (rho.matrix() * sigma).trace()), 0.0, 1e-13);
  }
}

TEST(channels, evolve_properties) {
  std::mt19937_64 rng(10);
  const DensityMatrix rho = bb::testing::random_density(4, rng);
  EXPECT_LT(max_abs_diff(evolve(rho, CMatrix::Identity(4, 4)).matrix(), rho.matrix()), 1e-15);
  const CMatrix u = bb::testing::random_unitary(4, rng);
  const DensityMatrix out = evolve(rho, u);
  EXPECT_LT((spectrum(out.matrix()) - spectrum(rho.matrix())).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(max_abs_diff(evolve(out, u.adjoint()).matrix(), rho.matrix()), 1e-10);
  EXPECT_THROW(evolve(rho, CMatrix::Identity(2, 2)), std::invalid_argument);
}

TEST(channels, twirled_evolution) {
  std::mt19937_64 rng(11);
  const SpinSystem sys = desk_two_spin();
  const PropagatorCache cache = build_cache(sys);
  BBSequence seq = bb::testing::random_single_channel_sequence(2, 200, 0.3, cache.dt(), rng);
  const DensityMatrix rho = bb::testing::random_density(4, rng);

  const DensityMatrix plain = bb_evolve_with_twirls(cache, seq, rho);
  EXPECT_LT(max_abs_diff(plain.matrix(), evolve(rho, bb_propagator(cache, seq).matrix()).matrix()), 1e-12);

  BBSequence first = seq;
  first.set_twirl_boundaries({0});
  const DensityMatrix tw0 = bb_evolve_with_twirls(cache, first, rho);
  EXPECT_LT(max_abs_diff(tw0.matrix(), evolve(twirl(rho), bb_propagator(cache, seq).matrix()).matrix()), 1e-12);

  seq.set_twirl_boundaries({50, 120, 200});
  const DensityMatrix out = bb_evolve_with_twirls(cache, seq, rho);
  EXPECT_NEAR(std::abs(out.matrix().trace() - 1.0), 0.0, 1e-10);
  // Final twirl leaves a diagonal state.
  EXPECT_EQ((out.matrix() - CMatrix(out.matrix().diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0);
}

TEST(channels, robust_fidelity) {
  std::mt19937_64 rng(12);
  const SpinSystem sys = desk_two_spin();
  const PropagatorCache cache = build_cache(sys);
  const BBSequence seq = bb::testing::random_single_channel_sequence(2, 100, 0.4, cache.dt(), rng);
  const CMatrix u = bb_propagator(cache, seq).matrix();

  const FidelityReport one = robust_unitary_fidelity(sys, seq, u, {1.0});
  ASSERT_EQ(one.fidelities.size(), 1u);
  EXPECT_NEAR(one.mean, 1.0, 1e-12);

  const FidelityReport grid = robust_unitary_fidelity(sys, seq, u);
  EXPECT_EQ(grid.scales, kDefaultRfScales);
  EXPECT_LE(grid.mean, *std::max_element(grid.fidelities.begin(), grid.fidelities.end()));
  EXPECT_LT(grid.mean, 1.0);
  for (double f : grid.fidelities) {
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-9);
  }

  const BBSequence delays(cache.dt(), 100, 2);
  const FidelityReport flat = robust_unitary_fidelity(sys, delays, u);
  for (double f : flat.fidelities) EXPECT_EQ(f, flat.fidelities[0]);
  EXPECT_THROW(robust_unitary_fidelity(sys, seq, u, {}), std::invalid_argument);
  EXPECT_THROW(robust_unitary_fidelity(sys, seq, u, {-1.0}), std::invalid_argument);
}

TEST(channels, robust_state_fidelity_consistent) {
  std::mt19937_64 rng(13);
  const SpinSystem sys = desk_two_spin();
  const PropagatorCache cache = build_cache(sys);
  BBSequence seq = bb::testing::random_single_channel_sequence(2, 100, 0.4, cache.dt(), rng);
  seq.set_twirl_boundaries({40});
  const DensityMatrix rho = bb::testing::random_density(4, rng).deviation();
  const DensityMatrix out = bb_evolve_with_twirls(cache, seq, rho);
  const FidelityReport rep = robust_state_fidelity(sys, seq, rho, out, {1.0, 1.1});
  EXPECT_NEAR(rep.fidelities[0], 1.0, 1e-12);
  EXPECT_LE(rep.fidelities[1], 1.0 + 1e-9);
}
