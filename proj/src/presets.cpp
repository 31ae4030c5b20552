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

#include "bangbang/presets.hpp"

#include <stdexcept>

namespace bb {

namespace {

constexpr double hz(double v) { return kTwoPi * v; }

RMatrix symmetric(int n, std::initializer_list<std::tuple<int, int, double>> entries) {
  RMatrix m = RMatrix::Zero(n, n);
  for (const auto& [r, s, v] : entries) {
    m(r, s) = v;
    m(s, r) = v;
  }
  return m;
}

}  // namespace

SpinSystem desk_two_spin() {
  std::vector<Species> species{{"1H", hz(10e3), {0}}, {"13C", hz(10e3), {1}}};
  return SpinSystem(2, std::move(species), {hz(50.0), hz(-30.0)}, symmetric(2, {{0, 1, 215.0}}),
                    RMatrix::Zero(2, 2), true);
}

SpinSystem three_qubit_register() {
  std::vector<Species> species{{"1H", hz(10e3), {0}}, {"19F", hz(10e3), {1}}, {"13C", hz(10e3), {2}}};
  return SpinSystem(3, std::move(species), {hz(40.0), hz(-60.0), hz(25.0)},
                    symmetric(3, {{0, 1, 49.4}, {0, 2, 224.1}, {1, 2, -310.9}}), RMatrix::Zero(3, 3), true);
}

SpinSystem five_spin_oriented() {
  std::vector<Species> species{{"19F", hz(12e3), {0, 1, 2}}, {"1H", hz(12e3), {3, 4}}};
  const RMatrix j = symmetric(5, {{0, 1, 20.0},
                                  {0, 2, 8.0},
                                  {1, 2, 22.0},
                                  {0, 3, 9.0},
                                  {1, 3, 6.5},
                                  {1, 4, 7.0},
                                  {2, 4, 10.0},
                                  {3, 4, 2.0}});
  const RMatrix d = symmetric(5, {{0, 1, -310.0},
                                  {0, 2, -95.0},
                                  {1, 2, -420.0},
                                  {0, 3, -150.0},
                                  {1, 3, -60.0},
                                  {1, 4, -180.0},
                                  {2, 4, -260.0},
                                  {3, 4, -740.0}});
  return SpinSystem(5, std::move(species), {hz(1500.0), hz(-2300.0), hz(3100.0), hz(600.0), hz(-700.0)},
                    j, d, false);
}

SpinSystem benchmark_system(int n_spins) {
  if (n_spins < 1) throw std::invalid_argument("benchmark system needs at least one spin");
  Species a{"A", hz(20e3), {}};
  Species b{"B", hz(20e3), {}};
  std::vector<double> offsets;
  RMatrix j = RMatrix::Zero(n_spins, n_spins);
  for (int r = 0; r < n_spins; ++r) {
    (r % 2 == 0 ? a : b).spins.push_back(r);
    offsets.push_back(hz(-900.0 + 237.0 * r));
    if (r + 1 < n_spins) j(r, r + 1) = j(r + 1, r) = 40.0 + 7.0 * r;
    if (r + 2 < n_spins) j(r, r + 2) = j(r + 2, r) = 4.0;
  }
  std::vector<Species> species{a};
  if (!b.spins.empty()) species.push_back(b);
  return SpinSystem(n_spins, std::move(species), std::move(offsets), j, RMatrix::Zero(n_spins, n_spins), true);
}

SpinSystem preset_system(const std::string& name) {
  if (name == "desk2") return desk_two_spin();
  if (name == "register3") return three_qubit_register();
  if (name == "oriented5") return five_spin_oriented();
  if (name.rfind("chain", 0) == 0 && name.size() > 5) return benchmark_system(std::stoi(name.substr(5)));
  throw std::invalid_argument("unknown preset system '" + name + "'");
}

std::vector<std::string> preset_names() { return {"desk2", "register3", "oriented5", "chain<n>"}; }

}  // namespace bb
