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
#include <string_view>
#include <vector>

#include "bangbang/propagator.hpp"

namespace bb {

enum class StateKind { UnitTrace, TracelessDeviation };

/// Hermitian density matrix, either a full unit-trace state or its traceless
/// deviation. Invariants are checked at construction (1e-12).
class DensityMatrix {
 public:
  DensityMatrix(CMatrix m, StateKind kind);

  const CMatrix& matrix() const { return m_; }
  StateKind kind() const { return kind_; }
  Eigen::Index dim() const { return m_.rows(); }

  /// rho - Tr(rho)/N * I. Idempotent on deviations.
  DensityMatrix deviation() const;

  /// |psi><psi| for a normalized state vector.
  static DensityMatrix pure(const CVector& psi);

 private:
  CMatrix m_;
  StateKind kind_;
};

std::string format_density(const DensityMatrix& rho);
DensityMatrix parse_density(std::string_view text);
DensityMatrix load_density(const std::string& path);

/// |Tr(U_T^dagger U) / N|^2
double unitary_fidelity(const CMatrix& target, const CMatrix& u);

/// |Tr(rho_T rho)| / sqrt(Tr(rho_T^2) Tr(rho^2)). Throws std::domain_error
/// when either argument has zero norm.
double state_fidelity(const DensityMatrix& target, const DensityMatrix& rho);

/// Ideal twirl: keeps the computational-basis diagonal only.
DensityMatrix twirl(const DensityMatrix& rho);

/// U rho U^dagger
DensityMatrix evolve(const DensityMatrix& rho, const CMatrix& u);

/// Unitary chunks between twirl boundaries, each followed by a twirl.
DensityMatrix bb_evolve_with_twirls(const PropagatorCache& cache, const BBSequence& seq,
                                    const DensityMatrix& rho_in, const EvalOptions& options = {});

inline const std::vector<double> kDefaultRfScales{0.9, 0.95, 1.0, 1.05, 1.1};

struct FidelityReport {
  std::vector<double> scales;
  std::vector<double> fidelities;
  double mean = 0.0;
};

/// Caches rebuilt at every RF scale; uniform-weight mean in grid order.
FidelityReport robust_unitary_fidelity(const SpinSystem& system, const BBSequence& seq,
                                       const CMatrix& target,
                                       const std::vector<double>& scales = kDefaultRfScales);

FidelityReport robust_state_fidelity(const SpinSystem& system, const BBSequence& seq,
                                     const DensityMatrix& rho_in, const DensityMatrix& target,
                                     const std::vector<double>& scales = kDefaultRfScales);

}  // namespace bb
