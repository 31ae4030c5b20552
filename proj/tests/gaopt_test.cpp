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

#include <gtest/gtest.h>

#include "bangbang/presets.hpp"
#include "bangbang/statprep.hpp"
#include "test_util.hpp"

using namespace bb;

namespace {

GAConfig small_config(int k) {
  GAConfig c;
  c.population = 24;
  c.generations = 40;
  c.n_segments = k;
  c.bitflip_rate = 0.05;
  c.phase_mutation_rate = 0.2;
  c.initial_duty = 0.3;
  c.seed = 17;
  return c;
}

CMatrix x_pi() {
  CMatrix s(2, 2);
  s << 0, Complex(0, -1), Complex(0, -1), 0;
  return s;
}

}  // namespace

TEST(gaopt, encode_decode_round_trip) {
  std::mt19937_64 rng(1);
  const SpinSystem sys = desk_two_spin();
  BBSequence seq = bb::testing::random_single_channel_sequence(2, 64, 0.4, 5e-6, rng);
  seq.set_twirl_boundaries({3, 40});
  BBSequence labeled(seq.dt(), seq.n_segments(), 2, {"1H", "13C"});
  for (int k = 0; k < seq.n_segments(); ++k)
    for (int j = 0; j < 2; ++j)
      if (seq.event(k, j).pulsed) labeled.set_pulse(k, j, seq.event(k, j).phase);
  labeled.set_twirl_boundaries(seq.twirl_boundaries());
  EXPECT_EQ(decode(encode(labeled), labeled.dt(), sys), labeled);
}

TEST(gaopt, all_off_genome_is_all_delay) {
  const SpinSystem sys = desk_two_spin();
  const BBSequence seq = decode(Genome(30, 2), 5e-6, sys);
  EXPECT_EQ(seq.pulsed_segments(), 0);
  EXPECT_EQ(seq.labels(), (std::vector<std::string>{"1H", "13C"}));
}

TEST(gaopt, duplicate_twirl_genes_collapse) {
  Genome g(10, 2, 4);
  g.twirls = {7, 2, 7, 10};
  const BBSequence seq = decode(g, 5e-6, desk_two_spin());
  EXPECT_EQ(seq.twirl_boundaries(), (std::vector<int>{2, 7, 10}));
  Genome bad(10, 3);
  EXPECT_THROW(decode(bad, 5e-6, desk_two_spin()), std::invalid_argument);
}

TEST(gaopt, config_parse_and_dump) {
  const GAConfig c = parse_ga_config(R"({"population": 10, "phase_sigma_deg": 5, "rf_scales": [1.0], "n_twirls": 2})");
  EXPECT_EQ(c.population, 10);
  EXPECT_NEAR(c.phase_sigma, 5 * kPi / 180, 1e-15);
  EXPECT_EQ(c.rf_scales, std::vector<double>{1.0});
  EXPECT_EQ(c.generations, GAConfig{}.generations);
  const GAConfig again = parse_ga_config(dump_ga_config(c));
  EXPECT_EQ(again.population, c.population);
  EXPECT_NEAR(again.phase_sigma, c.phase_sigma, 1e-15);
  EXPECT_EQ(again.n_twirls, 2);
  EXPECT_THROW(parse_ga_config(R"({"populaton": 10})"), std::invalid_argument);
  EXPECT_THROW(parse_ga_config(R"({"bitflip_rate": 1.5})"), std::invalid_argument);
  EXPECT_THROW(parse_ga_config(R"({"population": 1})"), std::invalid_argument);
  EXPECT_THROW(parse_ga_config(R"({"elitism": 0})"), std::invalid_argument);
  EXPECT_THROW(parse_ga_config("[1,"), std::invalid_argument);
}

TEST(gaopt, fitness_of_exact_target_is_one) {
  std::mt19937_64 rng(2);
  const SpinSystem sys = desk_two_spin();
  GAConfig c = small_config(50);
  c.rf_scales = {1.0};
  const BBSequence seq = bb::testing::random_single_channel_sequence(2, 50, 0.5, c.dt, rng);
  const CMatrix u = bb_propagator(build_cache(sys, c.dt), seq).matrix();
  EXPECT_NEAR(fitness_unitary(encode(seq), sys, u, c), 1.0, 1e-12);
}

TEST(gaopt, all_delay_fitness_matches_direct_evaluation) {
  const SpinSystem sys = bb::testing::single_spin(kTwoPi * 120.0, kTwoPi * 25e3);
  const GAConfig c = small_config(40);
  const PropagatorCache cache = build_cache(sys, c.dt);
  CMatrix ud = CMatrix::Identity(2, 2);
  for (int k = 0; k < 40; ++k) ud = cache.delay() * ud;
  EXPECT_NEAR(fitness_unitary(Genome(40, 1), sys, x_pi(), c), unitary_fidelity(x_pi(), ud), 1e-14);
}

TEST(gaopt, fitness_is_pure) {
  std::mt19937_64 rng(3);
  const SpinSystem sys = desk_two_spin();
  const GAConfig c = small_config(80);
  const Genome g = encode(bb::testing::random_single_channel_sequence(2, 80, 0.3, c.dt, rng));
  const UnitaryObjective obj(sys, CMatrix::Identity(4, 4), c);
  const double f = obj.evaluate(g);
  EXPECT_EQ(obj.evaluate(g), f);
  EXPECT_EQ(fitness_unitary(g, sys, CMatrix::Identity(4, 4), c), f);
  Genome twirled = g;
  twirled.twirls = {3};
  EXPECT_THROW(obj.evaluate(twirled), std::invalid_argument);
}

TEST(gaopt, state_fitness_examples) {
  const SpinSystem sys = desk_two_spin();
  GAConfig c = small_config(20);
  c.n_twirls = 1;
  const DensityMatrix rho = equilibrium_deviation(sys, default_purity_factors(sys));
  EXPECT_NEAR(fitness_state(Genome(0, 2), sys, rho, rho, c), 1.0, 1e-12);

  // Twirls do nothing to a diagonal state, and the delay keeps it diagonal.
  const DensityMatrix target = pps_target(2, 0);
  Genome twirl_only(20, 2, 1);
  twirl_only.twirls = {10};
  EXPECT_NEAR(fitness_state(twirl_only, sys, rho, target, c), state_fidelity(target, rho), 1e-12);

  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    Genome g = encode(bb::testing::random_single_channel_sequence(2, 20, 0.5, c.dt, rng));
    g.twirls = {i};
    const double f = fitness_state(g, sys, rho, target, c);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-12);
  }
  const DensityMatrix zero(CMatrix::Zero(4, 4), StateKind::TracelessDeviation);
  EXPECT_THROW(fitness_state(twirl_only, sys, rho, zero, c), std::domain_error);
}

TEST(gaopt, seeded_perfect_genome_wins_immediately) {
  std::mt19937_64 rng(5);
  const SpinSystem sys = desk_two_spin();
  GAConfig c = small_config(30);
  c.rf_scales = {1.0};
  const BBSequence seq = bb::testing::random_single_channel_sequence(2, 30, 0.5, c.dt, rng);
  const CMatrix u = bb_propagator(build_cache(sys, c.dt), seq).matrix();
  const UnitaryObjective obj(sys, u, c);
  const OptimizationResult r = run_ga(obj, c, {encode(seq)});
  EXPECT_NEAR(r.best_fitness, 1.0, 1e-12);
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.best, encode(seq));
}

TEST(gaopt, deterministic_and_monotone) {
  const SpinSystem sys = desk_two_spin();
  GAConfig c = small_config(60);
  c.generations = 25;
  c.seed_all_delay = false;
  std::mt19937_64 rng(6);
  const UnitaryObjective obj(sys, bb::testing::random_unitary(4, rng), c);
  const OptimizationResult a = run_ga(obj, c);
  const OptimizationResult b = run_ga(obj, c);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.evaluations, b.evaluations);
  EXPECT_TRUE(std::is_sorted(a.trace.begin(), a.trace.end()));
  EXPECT_EQ(static_cast<int>(a.trace.size()), c.generations + 1);

  c.threads = 3;
  const OptimizationResult p = run_ga(obj, c);
  EXPECT_EQ(p.trace, a.trace);
  EXPECT_EQ(p.best, a.best);

  c.threads = 1;
  c.seed = 18;
  EXPECT_NE(run_ga(obj, c).best, a.best);
}

TEST(gaopt, finds_single_spin_inversion) {
  // Five pulsed segments make a pi rotation; the GA must find an inversion.
  const double dt = 5e-6;
  const SpinSystem sys = bb::testing::single_spin(kTwoPi * 200.0, kPi / (5 * dt));
  GAConfig c = small_config(12);
  c.rf_scales = {1.0};
  c.generations = 200;
  c.fitness_target = 0.999;
  const UnitaryObjective obj(sys, x_pi(), c);
  const OptimizationResult r = run_ga(obj, c);
  EXPECT_GE(r.best_fitness, 0.999);
  EXPECT_LT(static_cast<int>(r.trace.size()), c.generations + 1);
}

TEST(gaopt, twirl_genes_stay_in_range) {
  const SpinSystem sys = desk_two_spin();
  GAConfig c = small_config(40);
  c.n_twirls = 3;
  c.twirl_step = 100;
  c.twirl_move_rate = 1.0;
  c.generations = 15;
  const StateObjective obj(sys, equilibrium_deviation(sys, default_purity_factors(sys)), pps_target(2, 0), c);
  const OptimizationResult r = run_ga(obj, c);
  ASSERT_EQ(r.best.twirls.size(), 3u);
  for (int t : r.best.twirls) {
    EXPECT_GE(t, 0);
    EXPECT_LE(t, 40);
  }
  EXPECT_NO_THROW(decode(r.best, c.dt, sys));
}
