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

#include "bangbang/spinsys.hpp"

namespace bb {

// Built-in spin systems. Parameter values are representative, not fitted to
// any particular sample.

/// Heteronuclear 1H-13C pair, weakly coupled. Used for the two-spin
/// CNOT and pseudopure-state syntheses.
SpinSystem desk_two_spin();

/// 1H, 19F and 13C (ancilla) register, one spin per species.
SpinSystem three_qubit_register();

/// Three 19F and two 1H with dipolar couplings (strong coupling kept).
SpinSystem five_spin_oriented();

/// n spins alternating between two species, weakly coupled along a chain.
SpinSystem benchmark_system(int n_spins);

/// "desk2", "register3", "oriented5" or "chain<n>".
SpinSystem preset_system(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace bb
