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

#include "bangbang/statprep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace bb {

namespace {

std::vector<double> normalized_diagonal(const CMatrix& m) {
  std::vector<double> d(static_cast<std::size_t>(m.rows()));
  double peak = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    d[i] = m(i, i).real();
    peak = std::max(peak, std::abs(d[i]));
  }
  if (peak > 0.0) {
    for (double& x : d) x /= peak;
  }
  return d;
}

}  // namespace

EquilibriumSpec default_purity_factors(const SpinSystem& system, double scale) {
  // MHz/T
  static const std::map<std::string, double> gamma{
      {"1H", 42.577}, {"19F", 40.078}, {"13C", 10.708}, {"15N", 4.316}, {"31P", 17.235}};
  EquilibriumSpec spec;
  for (int r = 0; r < system.n_spins(); ++r) {
    const auto it = gamma.find(system.species()[system.species_of(r)].label);
    spec.purity.push_back(scale * (it == gamma.end() ? 1.0 : it->second / gamma.at("1H")));
  }
  return spec;
}

DensityMatrix equilibrium_state(const SpinSystem& system, const EquilibriumSpec& spec) {
  if (static_cast<int>(spec.purity.size()) != system.n_spins()) {
    throw std::invalid_argument("one purity factor per spin is required");
  }
  const Eigen::Index dim = system.dim();
  CMatrix rho = CMatrix::Identity(dim, dim);
  for (int r = 0; r < system.n_spins(); ++r) {
    if (!(spec.purity[r] >= 0.0)) throw std::invalid_argument("purity factors must be nonnegative");
    rho += spec.purity[r] * spin_operator(system, r, Axis::Z).matrix();
  }
  rho /= static_cast<double>(dim);
  return DensityMatrix(std::move(rho), StateKind::UnitTrace);
}

DensityMatrix equilibrium_deviation(const SpinSystem& system, const EquilibriumSpec& spec) {
  return equilibrium_state(system, spec).deviation();
}

DensityMatrix pps_target(int n_spins, Eigen::Index basis_state) {
  if (n_spins < 1 || n_spins > 14) throw std::invalid_argument("n_spins must be in [1, 14]");
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  if (basis_state < 0 || basis_state >= dim) {
    throw std::out_of_range("basis state " + std::to_string(basis_state) + " out of range");
  }
  CMatrix m = CMatrix::Zero(dim, dim);
  const double shift = 1.0 / static_cast<double>(dim);
  for (Eigen::Index i = 0; i < dim; ++i) m(i, i) = -shift;
  m(basis_state, basis_state) += 1.0;
  return DensityMatrix(std::move(m), StateKind::TracelessDeviation);
}

PpsResult prepare_pps(const SpinSystem& system, const EquilibriumSpec& spec, Eigen::Index basis_state,
                      const GAConfig& config) {
  if (config.n_twirls < 1) throw std::invalid_argument("pseudopure preparation needs at least one twirl gene");
  const DensityMatrix rho_in = equilibrium_deviation(system, spec);
  const DensityMatrix target = pps_target(system.n_spins(), basis_state);
  const StateObjective objective(system, rho_in, target, config);

  PpsResult result;
  result.optimization = run_ga(objective, config);
  result.sequence = decode(result.optimization.best, config.dt, system);
  result.fidelity = robust_state_fidelity(system, result.sequence, rho_in, target, config.rf_scales);
  const auto cache = build_cache(system, config.dt);
  const DensityMatrix achieved = bb_evolve_with_twirls(cache, result.sequence, rho_in);
  result.target_diagonal = normalized_diagonal(target.matrix());
  result.achieved_diagonal = normalized_diagonal(achieved.matrix());
  return result;
}

std::string bar_diagram_csv(const PpsResult& result, int n_spins) {
  std::ostringstream out;
  out << "basis,theoretical,achieved\n";
  char buf[64];
  for (std::size_t i = 0; i < result.target_diagonal.size(); ++i) {
    std::string label;
    for (int b = n_spins - 1; b >= 0; --b) label += ((i >> b) & 1) ? '1' : '0';
    out << label;
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", result.target_diagonal[i], result.achieved_diagonal[i]);
    out << buf;
  }
  return out.str();
}

}  // namespace bb
