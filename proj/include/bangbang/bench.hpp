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
#include <random>
#include <string>
#include <vector>

#include "bangbang/propagator.hpp"

namespace bb {

struct BenchPoint {
  int n_spins = 0;
  int n_segments = 0;
  double duty = 0.0;
  double tau_sm = 0.0;     // s, median
  double tau_bb = 0.0;     // s, median, cache excluded
  double tau_cache = 0.0;  // s, median one-time cache build
  double ratio = 0.0;      // tau_sm / tau_bb
  double cross_fidelity = 0.0;
};

struct BenchConfig {
  std::vector<int> sizes{2, 4, 6, 8};
  std::vector<double> duties{1.0, 0.5, 0.2, 0.1};
  int n_segments = 100;
  double dt = kDefaultSegment;
  int repeats = 5;
  std::uint64_t seed = 1;
};

/// round(duty * K) pulsed segments at uniformly random positions; each
/// pulses one random species with a random phase.
BBSequence random_bb_sequence(const SpinSystem& system, int n_segments, double duty, double dt,
                              std::mt19937_64& rng);

/// Times cache construction, bb_propagator and sm_propagator of the SM mimic
/// on one sequence. Throws std::runtime_error if the two engines disagree
/// (|F_u - 1| > 1e-9); timings of wrong answers are never recorded.
BenchPoint measure_point(const SpinSystem& system, const BBSequence& seq, int repeats);

/// Median wall time of bb_propagator alone (no cache build, no SM run).
double time_bb_only(const PropagatorCache& cache, const BBSequence& seq, int repeats);

/// Grid over sizes x duties on benchmark_system(n), strictly sequential.
std::vector<BenchPoint> run_benchmark(const BenchConfig& config);

/// Columns n_spins,K,duty,tau_sm_s,tau_bb_s,tau_cache_s,ratio
std::string bench_csv(const std::vector<BenchPoint>& points);
/// Two columns: duty ratio
std::string bench_plot_data(const std::vector<BenchPoint>& points);

}  // namespace bb
