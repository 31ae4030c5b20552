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

#include "bangbang/spinsys.hpp"

#include <gtest/gtest.h>

#include "bangbang/presets.hpp"
#include "test_util.hpp"

using namespace bb;
using bb::testing::max_abs_diff;

namespace {

SpinSystem uniform_system(int n, int n_species, double offset_step = 0.0, double j = 0.0) {
  std::vector<Species> species(n_species);
  for (int s = 0; s < n_species; ++s) species[s].label = "S" + std::to_string(s);
  std::vector<double> offsets;
  RMatrix jm = RMatrix::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    species[r % n_species].spins.push_back(r);
    offsets.push_back(offset_step * (r + 1));
    for (int s = r + 1; s < n; ++s) jm(r, s) = jm(s, r) = j * (1 + r + 2 * s);
  }
  return SpinSystem(n, species, offsets, jm, RMatrix::Zero(n, n), true);
}

}  // namespace

TEST(spinsys, iz_single_spin) {
  const auto sys = uniform_system(1, 1);
  const CMatrix iz = spin_operator(sys, 0, Axis::Z).matrix();
  EXPECT_EQ(iz, CMatrix(Eigen::Vector2cd(0.5, -0.5).asDiagonal()));
}

TEST(spinsys, iz_second_of_two) {
  const auto sys = uniform_system(2, 1);
  const CMatrix iz = spin_operator(sys, 1, Axis::Z).matrix();
  EXPECT_EQ(iz, CMatrix(Eigen::Vector4cd(0.5, -0.5, 0.5, -0.5).asDiagonal()));
}

TEST(spinsys, spin_operator_traces) {
  for (int n = 1; n <= 4; ++n) {
    const auto sys = uniform_system(n, 1);
    for (int r = 0; r < n; ++r) {
      for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
        const Operator op = spin_operator(sys, r, a);
        EXPECT_TRUE(op.hermitian());
        EXPECT_NEAR(std::abs(op.matrix().trace()), 0.0, 1e-15);
        EXPECT_NEAR((op.matrix() * op.matrix()).trace().real(), std::ldexp(1.0, n - 2), 1e-12);
      }
    }
  }
}

TEST(spinsys, pauli_algebra) {
  const auto sys = uniform_system(3, 1);
  for (int r = 0; r < 3; ++r) {
    const CMatrix x = spin_operator(sys, r, Axis::X).matrix();
    const CMatrix y = spin_operator(sys, r, Axis::Y).matrix();
    const CMatrix z = spin_operator(sys, r, Axis::Z).matrix();
    EXPECT_LT(max_abs_diff(x * y - y * x, Complex(0, 1) * z), 1e-15);
    EXPECT_LT(max_abs_diff(x * x, 0.25 * CMatrix::Identity(8, 8)), 1e-15);
  }
}

TEST(spinsys, spin_operator_rejects_bad_index) {
  const auto sys = uniform_system(2, 1);
  EXPECT_THROW(spin_operator(sys, 2, Axis::Z), std::out_of_range);
  EXPECT_THROW(spin_operator(sys, -1, Axis::X), std::out_of_range);
}

TEST(spinsys, collective_single_member_matches_spin_operator) {
  const auto sys = uniform_system(3, 3);
  for (int j = 0; j < 3; ++j) {
    EXPECT_EQ(collective_operator(sys, j, Axis::X).matrix(), spin_operator(sys, j, Axis::X).matrix());
  }
}

TEST(spinsys, collective_z_two_spins) {
  const auto sys = uniform_system(2, 1);
  EXPECT_EQ(collective_operator(sys, 0, Axis::Z).matrix(),
            CMatrix(Eigen::Vector4cd(1.0, 0.0, 0.0, -1.0).asDiagonal()));
  EXPECT_EQ(collective_z_diagonal(sys, 0), Eigen::Vector4d(1.0, 0.0, 0.0, -1.0));
}

TEST(spinsys, collective_commutator) {
  for (int n = 1; n <= 3; ++n) {
    const auto sys = uniform_system(n, 1);
    const CMatrix sx = collective_operator(sys, 0, Axis::X).matrix();
    const CMatrix sy = collective_operator(sys, 0, Axis::Y).matrix();
    const CMatrix sz = collective_operator(sys, 0, Axis::Z).matrix();
    EXPECT_LT(max_abs_diff(sz * sx - sx * sz, Complex(0, 1) * sy), 1e-12);
  }
}

TEST(spinsys, collective_rejects_unknown_species) {
  const auto sys = uniform_system(2, 2);
  EXPECT_THROW(collective_operator(sys, 2, Axis::Z), std::out_of_range);
}

TEST(spinsys, hamiltonian_zero) {
  const auto sys = uniform_system(3, 2);
  EXPECT_EQ(internal_hamiltonian(sys).matrix(), CMatrix::Zero(8, 8));
}

TEST(spinsys, hamiltonian_single_offset) {
  const SpinSystem sys = bb::testing::single_spin(kTwoPi * 100.0, 0.0);
  const CMatrix h = internal_hamiltonian(sys).matrix();
  EXPECT_NEAR(h(0, 0).real(), -kPi * 100.0, 1e-12);
  EXPECT_NEAR(h(1, 1).real(), kPi * 100.0, 1e-12);
  EXPECT_EQ(h(0, 1), Complex(0.0));
}

TEST(spinsys, hamiltonian_scalar_coupling) {
  const double w0 = kTwoPi * 300.0, w1 = kTwoPi * -120.0;
  const SpinSystem sys = bb::testing::two_species_pair(10.0, true, w0, w1);
  const CMatrix h = internal_hamiltonian(sys).matrix();
  // 2 pi J Iz Iz = +-5 pi; Zeeman -w0 Iz0 - w1 Iz1.
  const double zz[4] = {5 * kPi, -5 * kPi, -5 * kPi, 5 * kPi};
  const double z0[4] = {0.5, 0.5, -0.5, -0.5};
  const double z1[4] = {0.5, -0.5, 0.5, -0.5};
  for (int b = 0; b < 4; ++b) EXPECT_NEAR(h(b, b).real(), zz[b] - w0 * z0[b] - w1 * z1[b], 1e-10);
  EXPECT_EQ((h - CMatrix(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0);
}

TEST(spinsys, hamiltonian_flip_flop_and_dipolar) {
  RMatrix j = RMatrix::Zero(2, 2), d = RMatrix::Zero(2, 2);
  j(0, 1) = j(1, 0) = 7.0;
  d(0, 1) = d(1, 0) = -40.0;
  const SpinSystem sys(2, {{"19F", 0.0, {0, 1}}}, {0.0, 0.0}, j, d, false);
  const CMatrix h = internal_hamiltonian(sys).matrix();
  const CMatrix expected = kTwoPi * (j(0, 1) + 2 * d(0, 1)) *
                               (spin_operator(sys, 0, Axis::Z) * spin_operator(sys, 1, Axis::Z)).matrix() +
                           kTwoPi * (j(0, 1) - d(0, 1)) *
                               ((spin_operator(sys, 0, Axis::X) * spin_operator(sys, 1, Axis::X)).matrix() +
                                (spin_operator(sys, 0, Axis::Y) * spin_operator(sys, 1, Axis::Y)).matrix());
  EXPECT_LT(max_abs_diff(h, expected), 1e-12);
}

TEST(spinsys, weak_coupling_hamiltonian_commutes_with_species_sz) {
  for (int n = 2; n <= 4; ++n) {
    const auto sys = uniform_system(n, 2, kTwoPi * 77.0, 13.0);
    const CMatrix h = internal_hamiltonian(sys).matrix();
    for (int j = 0; j < sys.n_species(); ++j) {
      const CMatrix sz = collective_operator(sys, j, Axis::Z).matrix();
      EXPECT_LT((h * sz - sz * h).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(spinsys, hamiltonian_permutation_invariance) {
  // Swap spins 0 and 2 of a strongly coupled 3-spin system.
  RMatrix j(3, 3), d(3, 3);
  j << 0, 11, 5, 11, 0, 3, 5, 3, 0;
  d << 0, -60, 25, -60, 0, 90, 25, 90, 0;
  const std::vector<double> w{kTwoPi * 100, kTwoPi * -250, kTwoPi * 40};
  const SpinSystem sys(3, {{"19F", 0.0, {0, 1, 2}}}, w, j, d, false);
  const int perm[3] = {2, 1, 0};
  RMatrix jp(3, 3), dp(3, 3);
  std::vector<double> wp(3);
  for (int r = 0; r < 3; ++r) {
    wp[perm[r]] = w[r];
    for (int s = 0; s < 3; ++s) {
      jp(perm[r], perm[s]) = j(r, s);
      dp(perm[r], perm[s]) = d(r, s);
    }
  }
  const SpinSystem relabeled(3, {{"19F", 0.0, {0, 1, 2}}}, wp, jp, dp, false);
  // Permutation operator on basis indices: bit of spin r moves to spin perm[r].
  CMatrix p = CMatrix::Zero(8, 8);
  for (int b = 0; b < 8; ++b) {
    int out = 0;
    for (int r = 0; r < 3; ++r) {
      if (b & (1 << (2 - r))) out |= 1 << (2 - perm[r]);
    }
    p(out, b) = 1.0;
  }
  const CMatrix h = internal_hamiltonian(sys).matrix();
  EXPECT_LT(max_abs_diff(p * h * p.adjoint(), internal_hamiltonian(relabeled).matrix()), 1e-9);
}

TEST(spinsys, weak_coupling_validity) {
  EXPECT_TRUE(is_weak_coupling_valid(uniform_system(3, 1, kTwoPi * 10.0)).valid);
  const auto same = bb::testing::two_species_pair(5.0, true, 0.0, 0.0);
  const auto rep = is_weak_coupling_valid(same);
  EXPECT_FALSE(rep.valid);
  ASSERT_EQ(rep.violations.size(), 1u);
  EXPECT_EQ(rep.violations[0].r, 0);
  EXPECT_EQ(rep.violations[0].s, 1);
  // 2pi 1e4 >= 100 * 2pi 10
  const auto wide = bb::testing::two_species_pair(10.0, true, kTwoPi * 1e4, 0.0);
  EXPECT_TRUE(is_weak_coupling_valid(wide, 100.0).valid);
  EXPECT_FALSE(is_weak_coupling_valid(wide, 1001.0).valid);
}

TEST(spinsys, rejects_invalid_systems) {
  RMatrix asym = RMatrix::Zero(2, 2);
  asym(0, 1) = 3.0;
  EXPECT_THROW(SpinSystem(2, {{"A", 1.0, {0, 1}}}, {0, 0}, asym, RMatrix::Zero(2, 2), true),
               std::invalid_argument);
  EXPECT_THROW(SpinSystem(2, {{"A", 1.0, {0}}}, {0, 0}, RMatrix::Zero(2, 2), RMatrix::Zero(2, 2), true),
               std::invalid_argument);
  EXPECT_THROW(SpinSystem(2, {{"A", 1.0, {0, 1}}, {"B", 1.0, {1}}}, {0, 0}, RMatrix::Zero(2, 2),
                          RMatrix::Zero(2, 2), true),
               std::invalid_argument);
  EXPECT_THROW(SpinSystem(1, {{"A", -1.0, {0}}}, {0}, RMatrix::Zero(1, 1), RMatrix::Zero(1, 1), true),
               std::invalid_argument);
}

TEST(spinsys, parse_file) {
  const char* text = R"({
    "spins": 2,
    "species": [{"label": "1H", "max_amplitude_hz": 1000, "spins": [0]},
                {"label": "13C", "max_amplitude_hz": 500, "spins": [1]}],
    "offsets_hz": [10, -20],
    "J_hz": [[0, 140], [140, 0]],
    "weak_coupling": true
  })";
  const SpinSystem sys = parse_spin_system(text);
  EXPECT_EQ(sys.n_spins(), 2);
  EXPECT_NEAR(sys.species()[0].max_amplitude, kTwoPi * 1000, 1e-9);
  EXPECT_NEAR(sys.offsets()[1], kTwoPi * -20, 1e-9);
  EXPECT_EQ(sys.j_couplings()(0, 1), 140.0);
  EXPECT_EQ(sys.d_couplings()(0, 1), 0.0);
  EXPECT_TRUE(sys.weak_coupling());
  const SpinSystem again = parse_spin_system(dump_spin_system(sys));
  EXPECT_LT(max_abs_diff(internal_hamiltonian(again).matrix(), internal_hamiltonian(sys).matrix()), 1e-9);
}

TEST(spinsys, parse_rejects_asymmetric_couplings) {
  const char* text = R"({"spins": 2, "species": [{"label": "H", "max_amplitude_hz": 1, "spins": [0, 1]}],
    "offsets_hz": [0, 0], "J_hz": [[0, 1], [2, 0]], "weak_coupling": true})";
  EXPECT_THROW(parse_spin_system(text), std::invalid_argument);
  EXPECT_THROW(parse_spin_system("{\"spins\": 2,"), std::invalid_argument);
}

TEST(spinsys, presets_are_valid) {
  for (const char* name : {"desk2", "register3", "oriented5", "chain6"}) {
    const SpinSystem sys = preset_system(name);
    EXPECT_TRUE(internal_hamiltonian(sys).hermitian()) << name;
  }
  EXPECT_TRUE(is_weak_coupling_valid(desk_two_spin()).valid == false ||
              desk_two_spin().weak_coupling());
  EXPECT_THROW(preset_system("nope"), std::invalid_argument);
}
