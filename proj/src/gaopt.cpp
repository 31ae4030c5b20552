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

#include "bangbang/gaopt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace bb {

Genome::Genome(int n_segments_, int n_species_, int n_twirls)
    : n_segments(n_segments_),
      n_species(n_species_),
      on(static_cast<std::size_t>(n_segments_) * n_species_, 0),
      phase(static_cast<std::size_t>(n_segments_) * n_species_, 0.0),
      twirls(static_cast<std::size_t>(n_twirls), 0) {
  if (n_segments_ < 0 || n_species_ < 1 || n_twirls < 0) throw std::invalid_argument("bad genome shape");
}

Genome encode(const BBSequence& seq) {
  Genome g(seq.n_segments(), seq.n_species(), static_cast<int>(seq.twirl_boundaries().size()));
  for (int k = 0; k < seq.n_segments(); ++k) {
    for (int j = 0; j < seq.n_species(); ++j) {
      const Event& e = seq.event(k, j);
      const std::size_t i = static_cast<std::size_t>(k) * seq.n_species() + j;
      g.on[i] = e.pulsed ? 1 : 0;
      g.phase[i] = e.pulsed ? e.phase : 0.0;
    }
  }
  g.twirls = seq.twirl_boundaries();
  return g;
}

BBSequence decode(const Genome& genome, double dt, const SpinSystem& system) {
  if (genome.n_species != system.n_species()) {
    throw std::invalid_argument("genome has " + std::to_string(genome.n_species) +
                                " species, system has " + std::to_string(system.n_species()));
  }
  const std::size_t n = static_cast<std::size_t>(genome.n_segments) * genome.n_species;
  if (genome.on.size() != n || genome.phase.size() != n) throw std::invalid_argument("genome shape mismatch");
  std::vector<std::string> labels;
  for (const auto& sp : system.species()) labels.push_back(sp.label);
  BBSequence seq(dt, genome.n_segments, genome.n_species, std::move(labels));
  for (int k = 0; k < genome.n_segments; ++k) {
    for (int j = 0; j < genome.n_species; ++j) {
      const std::size_t i = static_cast<std::size_t>(k) * genome.n_species + j;
      if (genome.on[i]) seq.set_pulse(k, j, genome.phase[i]);
    }
  }
  std::vector<int> twirls = genome.twirls;
  std::sort(twirls.begin(), twirls.end());
  twirls.erase(std::unique(twirls.begin(), twirls.end()), twirls.end());
  seq.set_twirl_boundaries(std::move(twirls));
  return seq;
}

void GAConfig::validate() const {
  auto rate = [](double r, const char* name) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
  };
  if (population < 2) throw std::invalid_argument("population must be at least 2");
  if (generations < 0) throw std::invalid_argument("generations must be nonnegative");
  if (tournament < 1 || tournament > population) {
    throw std::invalid_argument("tournament size must be in [1, population]");
  }
  rate(crossover_rate, "crossover_rate");
  rate(bitflip_rate, "bitflip_rate");
  rate(phase_mutation_rate, "phase_mutation_rate");
  rate(twirl_move_rate, "twirl_move_rate");
  rate(initial_duty, "initial_duty");
  if (phase_sigma < 0.0) throw std::invalid_argument("phase_sigma must be nonnegative");
  if (twirl_step < 0) throw std::invalid_argument("twirl_step must be nonnegative");
  if (elitism < 1 || elitism >= population) throw std::invalid_argument("elitism must be in [1, population)");
  if (rf_scales.empty()) throw std::invalid_argument("rf_scales must not be empty");
  for (double s : rf_scales) {
    if (!(s > 0.0)) throw std::invalid_argument("rf_scales must be positive");
  }
  if (n_segments < 0) throw std::invalid_argument("n_segments must be nonnegative");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (n_twirls < 0) throw std::invalid_argument("n_twirls must be nonnegative");
  if (threads < 0) throw std::invalid_argument("threads must be nonnegative");
}

namespace {

using nlohmann::json;

json config_to_json(const GAConfig& c) {
  return json{{"population", c.population},
              {"generations", c.generations},
              {"tournament", c.tournament},
              {"crossover_rate", c.crossover_rate},
              {"bitflip_rate", c.bitflip_rate},
              {"phase_mutation_rate", c.phase_mutation_rate},
              {"phase_sigma_deg", c.phase_sigma * 180.0 / kPi},
              {"twirl_move_rate", c.twirl_move_rate},
              {"twirl_step", c.twirl_step},
              {"elitism", c.elitism},
              {"seed", c.seed},
              {"rf_scales", c.rf_scales},
              {"fitness_target", c.fitness_target},
              {"n_segments", c.n_segments},
              {"dt", c.dt},
              {"n_twirls", c.n_twirls},
              {"initial_duty", c.initial_duty},
              {"seed_all_delay", c.seed_all_delay},
              {"threads", c.threads}};
}

}  // namespace

GAConfig parse_ga_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("GA config: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("GA config must be a JSON object");
  GAConfig c;
  const json known = config_to_json(c);
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw std::invalid_argument("GA config: unknown key '" + key + "'");
  }
  try {
    c.population = doc.value("population", c.population);
    c.generations = doc.value("generations", c.generations);
    c.tournament = doc.value("tournament", c.tournament);
    c.crossover_rate = doc.value("crossover_rate", c.crossover_rate);
    c.bitflip_rate = doc.value("bitflip_rate", c.bitflip_rate);
    c.phase_mutation_rate = doc.value("phase_mutation_rate", c.phase_mutation_rate);
    c.phase_sigma = doc.value("phase_sigma_deg", c.phase_sigma * 180.0 / kPi) * kPi / 180.0;
    c.twirl_move_rate = doc.value("twirl_move_rate", c.twirl_move_rate);
    c.twirl_step = doc.value("twirl_step", c.twirl_step);
    c.elitism = doc.value("elitism", c.elitism);
    c.seed = doc.value("seed", c.seed);
    c.rf_scales = doc.value("rf_scales", c.rf_scales);
    c.fitness_target = doc.value("fitness_target", c.fitness_target);
    c.n_segments = doc.value("n_segments", c.n_segments);
    c.dt = doc.value("dt", c.dt);
    c.n_twirls = doc.value("n_twirls", c.n_twirls);
    c.initial_duty = doc.value("initial_duty", c.initial_duty);
    c.seed_all_delay = doc.value("seed_all_delay", c.seed_all_delay);
    c.threads = doc.value("threads", c.threads);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("GA config: ") + e.what());
  }
  c.validate();
  return c;
}

GAConfig load_ga_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open GA config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_ga_config(buf.str());
}

std::string dump_ga_config(const GAConfig& config) { return config_to_json(config).dump(2); }

namespace {

std::vector<PropagatorCache> caches_for(const SpinSystem& system, const GAConfig& config) {
  config.validate();
  std::vector<PropagatorCache> caches;
  for (double s : config.rf_scales) caches.push_back(build_cache(system.with_rf_scale(s), config.dt));
  return caches;
}

void check_shape(const Genome& g, const SpinSystem& system) {
  if (g.n_species != system.n_species()) throw std::invalid_argument("genome/system species mismatch");
}

}  // namespace

UnitaryObjective::UnitaryObjective(const SpinSystem& system, CMatrix target, const GAConfig& config)
    : system_(system), target_(std::move(target)), dt_(config.dt), caches_(caches_for(system, config)) {
  if (target_.rows() != system.dim() || target_.cols() != system.dim()) {
    throw std::invalid_argument("target is " + std::to_string(target_.rows()) + "x" +
                                std::to_string(target_.cols()) + " but the system dimension is " +
                                std::to_string(system.dim()));
  }
  if (config.n_twirls != 0) throw std::invalid_argument("a unitary target cannot use twirl genes");
}

double UnitaryObjective::evaluate(const Genome& genome) const {
  check_shape(genome, system_);
  if (!genome.twirls.empty()) throw std::invalid_argument("twirl genes present for a unitary target");
  const BBSequence seq = decode(genome, dt_, system_);
  double sum = 0.0;
  for (const auto& cache : caches_) {
    sum += unitary_fidelity(target_, bb_propagator_range(cache, seq, 0, seq.n_segments()));
  }
  return sum / static_cast<double>(caches_.size());
}

StateObjective::StateObjective(const SpinSystem& system, DensityMatrix rho_in, DensityMatrix rho_target,
                               const GAConfig& config)
    : system_(system),
      rho_in_(std::move(rho_in)),
      target_(std::move(rho_target)),
      dt_(config.dt),
      caches_(caches_for(system, config)) {
  if (rho_in_.dim() != system.dim() || target_.dim() != system.dim()) {
    throw std::invalid_argument("state dimension does not match the system");
  }
  if (rho_in_.kind() != StateKind::TracelessDeviation || target_.kind() != StateKind::TracelessDeviation) {
    throw std::invalid_argument("state objectives work on traceless deviation matrices");
  }
  if (target_.matrix().squaredNorm() == 0.0) throw std::domain_error("target deviation has zero norm");
}

double StateObjective::evaluate(const Genome& genome) const {
  check_shape(genome, system_);
  const BBSequence seq = decode(genome, dt_, system_);
  double sum = 0.0;
  for (const auto& cache : caches_) {
    const DensityMatrix out = bb_evolve_with_twirls(cache, seq, rho_in_);
    sum += state_fidelity(target_, out);
  }
  return sum / static_cast<double>(caches_.size());
}

double fitness_unitary(const Genome& genome, const SpinSystem& system, const CMatrix& target,
                       const GAConfig& config) {
  return UnitaryObjective(system, target, config).evaluate(genome);
}

double fitness_state(const Genome& genome, const SpinSystem& system, const DensityMatrix& rho_in,
                     const DensityMatrix& rho_target, const GAConfig& config) {
  return StateObjective(system, rho_in, rho_target, config).evaluate(genome);
}

namespace {

struct Individual {
  Genome genome;
  double fitness = 0.0;
  bool evaluated = false;
};

double wrap_phase(double p) {
  p = std::fmod(p, kTwoPi);
  if (p < 0.0) p += kTwoPi;
  return p >= kTwoPi ? 0.0 : p;
}

class Breeder {
 public:
  Breeder(const GAConfig& config, int n_species) : c_(config), n_species_(n_species), rng_(config.seed) {}

  Genome random_genome() {
    Genome g(c_.n_segments, n_species_, c_.n_twirls);
    for (std::size_t i = 0; i < g.on.size(); ++i) {
      g.on[i] = unit_(rng_) < c_.initial_duty ? 1 : 0;
      g.phase[i] = kTwoPi * unit_(rng_);
    }
    for (int& t : g.twirls) t = uniform_int(0, c_.n_segments);
    return g;
  }

  Genome all_delay() {
    Genome g(c_.n_segments, n_species_, c_.n_twirls);
    for (int& t : g.twirls) t = uniform_int(0, c_.n_segments);
    return g;
  }

  const Genome& tournament(const std::vector<Individual>& pop) {
    std::size_t best = pick(pop.size());
    for (int i = 1; i < c_.tournament; ++i) {
      const std::size_t other = pick(pop.size());
      if (pop[other].fitness > pop[best].fitness) best = other;
    }
    return pop[best].genome;
  }

  Genome crossover(const Genome& a, const Genome& b) {
    Genome child = a;
    if (unit_(rng_) >= c_.crossover_rate) return child;
    for (int k = 0; k < a.n_segments; ++k) {
      for (int j = 0; j < a.n_species; ++j) {
        const std::size_t i = static_cast<std::size_t>(k) * a.n_species + j;
        if (unit_(rng_) < 0.5) {
          child.on[i] = b.on[i];
          child.phase[i] = b.phase[i];
        }
      }
    }
    std::vector<int> ta = a.twirls, tb = b.twirls;
    std::sort(ta.begin(), ta.end());
    std::sort(tb.begin(), tb.end());
    for (std::size_t t = 0; t < child.twirls.size(); ++t) child.twirls[t] = unit_(rng_) < 0.5 ? ta[t] : tb[t];
    return child;
  }

  void mutate(Genome& g) {
    for (std::size_t i = 0; i < g.on.size(); ++i) {
      if (unit_(rng_) < c_.bitflip_rate) g.on[i] ^= 1;
      if (unit_(rng_) < c_.phase_mutation_rate) g.phase[i] = wrap_phase(g.phase[i] + c_.phase_sigma * normal_(rng_));
    }
    for (int& t : g.twirls) {
      if (unit_(rng_) < c_.twirl_move_rate) {
        t = std::clamp(t + uniform_int(-c_.twirl_step, c_.twirl_step), 0, c_.n_segments);
      }
    }
  }

 private:
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(uniform_int(0, static_cast<int>(n) - 1)); }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  const GAConfig& c_;
  int n_species_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

long evaluate_pending(const Objective& objective, std::vector<Individual>& pop, int threads) {
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (!pop[i].evaluated) pending.push_back(i);
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), pending.size());
  if (workers <= 1) {
    for (std::size_t i : pending) pop[i].fitness = objective.evaluate(pop[i].genome);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t p = w; p < pending.size(); p += workers) {
          pop[pending[p]].fitness = objective.evaluate(pop[pending[p]].genome);
        }
      });
    }
  }
  for (std::size_t i : pending) pop[i].evaluated = true;
  return static_cast<long>(pending.size());
}

}  // namespace

OptimizationResult run_ga(const Objective& objective, const GAConfig& config,
                          const std::vector<Genome>& initial) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const int n_species = objective.system().n_species();
  const int threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;

  Breeder breeder(config, n_species);
  std::vector<Individual> pop;
  for (const Genome& g : initial) {
    if (static_cast<int>(pop.size()) == config.population) break;
    if (g.n_segments != config.n_segments || g.n_species != n_species ||
        static_cast<int>(g.twirls.size()) != config.n_twirls) {
      throw std::invalid_argument("initial genome does not match the GA configuration");
    }
    pop.push_back({g});
  }
  if (config.seed_all_delay && static_cast<int>(pop.size()) < config.population) {
    pop.push_back({breeder.all_delay()});
  }
  while (static_cast<int>(pop.size()) < config.population) pop.push_back({breeder.random_genome()});

  OptimizationResult result;
  result.evaluations += evaluate_pending(objective, pop, threads);

  std::vector<std::size_t> order(pop.size());
  auto rank = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pop[a].fitness > pop[b].fitness; });
  };
  rank();
  result.trace.push_back(pop[order.front()].fitness);

  for (int gen = 1; gen <= config.generations; ++gen) {
    if (pop[order.front()].fitness >= config.fitness_target - 1e-12) break;
    std::vector<Individual> next;
    next.reserve(pop.size());
    for (int e = 0; e < config.elitism; ++e) next.push_back(pop[order[e]]);
    while (next.size() < pop.size()) {
      const Genome& a = breeder.tournament(pop);
      const Genome& b = breeder.tournament(pop);
      Genome child = breeder.crossover(a, b);
      breeder.mutate(child);
      next.push_back({std::move(child)});
    }
    pop = std::move(next);
    result.evaluations += evaluate_pending(objective, pop, threads);
    rank();
    result.trace.push_back(pop[order.front()].fitness);
  }

  result.best = pop[order.front()].genome;
  result.best_fitness = pop[order.front()].fitness;
  result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace bb
