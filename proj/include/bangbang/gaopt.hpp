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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bangbang/channels.hpp"

namespace bb {

/// GA encoding of a BBSequence: an on/off bit and a real phase gene per
/// segment and species, plus raw twirl-position genes.
struct Genome {
  int n_segments = 0;
  int n_species = 0;
  std::vector<std::uint8_t> on;  // [k * n_species + j]
  std::vector<double> phase;     // radians in [0, 2pi)
  std::vector<int> twirls;       // unsorted, may repeat; each in [0, n_segments]

  Genome() = default;
  Genome(int n_segments, int n_species, int n_twirls = 0);

  friend bool operator==(const Genome&, const Genome&) = default;
};

Genome encode(const BBSequence& seq);

/// Off bits become delays, on bits pulses; twirl genes are sorted and deduplicated.
BBSequence decode(const Genome& genome, double dt, const SpinSystem& system);

struct GAConfig {
  int population = 64;
  int generations = 500;
  int tournament = 3;
  double crossover_rate = 0.8;
  double bitflip_rate = 0.02;        // per on/off gene
  double phase_mutation_rate = 0.02; // per phase gene
  double phase_sigma = 20.0 * kPi / 180.0;
  double twirl_move_rate = 0.2;      // per twirl gene
  int twirl_step = 50;               // max segments moved per mutation
  int elitism = 2;
  std::uint64_t seed = 1;
  std::vector<double> rf_scales = kDefaultRfScales;
  double fitness_target = 1.0;       // early stop once reached
  int n_segments = 1000;
  double dt = kDefaultSegment;
  int n_twirls = 0;
  double initial_duty = 0.05;        // on-probability for random genomes
  bool seed_all_delay = true;        // include an all-delay genome in generation 0
  int threads = 1;                   // fitness workers; 0 = hardware concurrency

  void validate() const;
};

GAConfig parse_ga_config(std::string_view json_text);
GAConfig load_ga_config(const std::string& path);
std::string dump_ga_config(const GAConfig& config);

/// Fitness to maximize. Implementations must be pure and thread-safe.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double evaluate(const Genome& genome) const = 0;
  virtual const SpinSystem& system() const = 0;
};

/// Mean F_u against `target` over the configured RF grid.
class UnitaryObjective final : public Objective {
 public:
  UnitaryObjective(const SpinSystem& system, CMatrix target, const GAConfig& config);
  double evaluate(const Genome& genome) const override;
  const SpinSystem& system() const override { return system_; }
  const CMatrix& target() const { return target_; }

 private:
  SpinSystem system_;
  CMatrix target_;
  double dt_;
  std::vector<PropagatorCache> caches_;
};

/// Mean F_s of the twirled evolution of rho_in against rho_target over the RF grid.
class StateObjective final : public Objective {
 public:
  StateObjective(const SpinSystem& system, DensityMatrix rho_in, DensityMatrix rho_target,
                 const GAConfig& config);
  double evaluate(const Genome& genome) const override;
  const SpinSystem& system() const override { return system_; }

 private:
  SpinSystem system_;
  DensityMatrix rho_in_;
  DensityMatrix target_;
  double dt_;
  std::vector<PropagatorCache> caches_;
};

/// One-shot forms of the objectives (rebuild caches on every call).
double fitness_unitary(const Genome& genome, const SpinSystem& system, const CMatrix& target,
                       const GAConfig& config);
double fitness_state(const Genome& genome, const SpinSystem& system, const DensityMatrix& rho_in,
                     const DensityMatrix& rho_target, const GAConfig& config);

struct OptimizationResult {
  Genome best;
  double best_fitness = 0.0;
  std::vector<double> trace;  // best fitness after each generation, generation 0 first
  long evaluations = 0;
  double wall_time_s = 0.0;
};

/// Tournament selection, uniform crossover, bit/phase/twirl mutation and
/// elitism. Deterministic for a fixed config (seed included), regardless of
/// the number of fitness threads. `initial` genomes go into generation 0.
OptimizationResult run_ga(const Objective& objective, const GAConfig& config,
                          const std::vector<Genome>& initial = {});

}  // namespace bb
