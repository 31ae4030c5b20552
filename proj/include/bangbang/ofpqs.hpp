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

#include <atomic>
#include <vector>

#include "bangbang/spinsys.hpp"

namespace bb {

// Register layout: n_sys system qubits (most significant first) followed by
// one ancilla as the least significant qubit.

struct OfpqsConfig {
  int n_sys = 2;
  std::vector<int> marked;  // system basis indices
  int l = 1;                // generalized Grover iterations
  double delta = 0.4472135954999579;  // sqrt(0.2)

  void validate() const;
  int database_size() const { return 1 << n_sys; }
};

struct PhaseSchedule {
  int l = 0;
  int L = 1;  // 2l + 1
  double gamma = 1.0;
  std::vector<double> alpha;  // alpha[j-1] = alpha_j, in (0, 2pi)
  std::vector<double> beta;   // beta[j-1] = -alpha[l-j]
};

/// cos(order * acos x) on [-1, 1], cosh(order * acosh x) for x > 1. For
/// x < -1 only integer orders are defined.
double chebyshev_t(double order, double x);

/// gamma^-1 = T_{1/L}(1/delta); alpha_j = 2 acot(tan(2 pi j / L) sqrt(1 - gamma^2)).
PhaseSchedule phase_schedule(int l, double delta);

/// Oracle U_G: flips the ancilla iff the system register holds a marked
/// state. Counts every application.
class Oracle {
 public:
  Oracle(int n_sys, std::vector<int> marked);

  int n_sys() const { return n_sys_; }
  Eigen::Index dim() const { return Eigen::Index{2} << n_sys_; }
  const std::vector<int>& marked() const { return marked_; }
  bool is_marked(Eigen::Index system_state) const { return marked_flag_.at(system_state); }

  /// psi <- U_G psi
  void apply(CVector& psi) const;
  /// U <- U_G U
  void apply(CMatrix& u) const;

  long queries() const { return queries_.load(); }

 private:
  int n_sys_;
  std::vector<int> marked_;
  std::vector<bool> marked_flag_;
  mutable std::atomic<long> queries_{0};
};

/// U_G as a permutation matrix (does not count as a query).
Operator oracle_unitary(int n_sys, const std::vector<int>& marked);

/// U_G (1 x diag(1, e^{i alpha})) U_G: two oracle queries. On the ancilla-|0>
/// subspace this multiplies marked system states by e^{i alpha}.
Operator selective_phase_marked(const Oracle& oracle, double alpha);

/// Oracle-free diagonal with the same action as selective_phase_marked.
Operator selective_phase_marked_direct(int n_sys, const std::vector<int>& marked, double alpha);

/// Multiplies |0...0> of the system register by e^{i beta}.
Operator selective_phase_zero(int n_sys, double beta);

/// H on every system qubit, identity on the ancilla.
Operator system_hadamard(int n_sys);

/// G = (H S0(start_phase) H) S_m(marked_phase).
Operator grover_iterate(const Oracle& oracle, double marked_phase, double start_phase);

/// Product of the l scheduled iterates, G_l ... G_1. This is the unitary a
/// BB sequence has to realize for the search stage.
Operator ofpqs_iterations_unitary(const OfpqsConfig& config);

struct SearchOutcome {
  CVector state;
  double success_probability = 0.0;
  long oracle_queries = 0;
};

/// |0>^n|0> -> H^n -> scheduled iterates -> P_L over the marked set.
SearchOutcome run_ofpqs(const OfpqsConfig& config);

struct SweepPoint {
  int l;
  int L;
  double probability;
};

std::vector<SweepPoint> sweep_ofpqs(int n_sys, const std::vector<int>& marked, double delta, int l_max);

struct Readout {
  std::vector<double> system_probabilities;  // indexed by system basis state
  double marked_probability = 0.0;
};

/// Twirl, Hadamard on the ancilla, then populations grouped by system state.
Readout readout_via_ancilla(const CVector& state, int n_sys, const std::vector<int>& marked);

}  // namespace bb
