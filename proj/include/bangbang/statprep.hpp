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

#pragma once

#include <string>
#include <vector>

#include "bangbang/gaopt.hpp"

namespace bb {

struct EquilibriumSpec {
  std::vector<double> purity;  // epsilon_r per spin, > 0
};

/// Purity factors proportional to the gyromagnetic ratio of each spin's
/// species label (1H, 19F, 13C, 15N, 31P; 1.0 relative otherwise).
EquilibriumSpec default_purity_factors(const SpinSystem& system, double scale = 1e-5);

/// (1 + sum_r eps_r I_rz) / 2^n
DensityMatrix equilibrium_state(const SpinSystem& system, const EquilibriumSpec& spec);
DensityMatrix equilibrium_deviation(const SpinSystem& system, const EquilibriumSpec& spec);

/// |b><b| - 1/2^n
DensityMatrix pps_target(int n_spins, Eigen::Index basis_state);

struct PpsResult {
  OptimizationResult optimization;
  BBSequence sequence;
  FidelityReport fidelity;
  std::vector<double> target_diagonal;    // normalized to max |x| = 1
  std::vector<double> achieved_diagonal;  // nominal RF, normalized to max |x| = 1
};

/// Runs the GA with the twirled state objective from the equilibrium
/// deviation to the pseudopure target.
PpsResult prepare_pps(const SpinSystem& system, const EquilibriumSpec& spec, Eigen::Index basis_state,
                      const GAConfig& config);

/// CSV with columns basis,theoretical,achieved.
std::string bar_diagram_csv(const PpsResult& result, int n_spins);

}  // namespace bb
