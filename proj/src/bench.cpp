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

#include "bangbang/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bangbang/channels.hpp"
#include "bangbang/presets.hpp"

namespace bb {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

BBSequence random_bb_sequence(const SpinSystem& system, int n_segments, double duty, double dt,
                              std::mt19937_64& rng) {
  if (!(duty >= 0.0 && duty <= 1.0)) throw std::invalid_argument("duty cycle must be in [0, 1]");
  std::vector<std::string> labels;
  for (const auto& sp : system.species()) labels.push_back(sp.label);
  BBSequence seq(dt, n_segments, system.n_species(), std::move(labels));
  std::vector<int> order(static_cast<std::size_t>(n_segments));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const int pulsed = static_cast<int>(std::lround(duty * n_segments));
  std::uniform_int_distribution<int> species(0, system.n_species() - 1);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  for (int i = 0; i < pulsed; ++i) seq.set_pulse(order[i], species(rng), phase(rng));
  return seq;
}

double time_bb_only(const PropagatorCache& cache, const BBSequence& seq, int repeats) {
  std::vector<double> t;
  for (int r = 0; r < std::max(1, repeats); ++r) {
    const auto t0 = Clock::now();
    const Operator u = bb_propagator(cache, seq);
    t.push_back(seconds_since(t0));
    if (u.dim() == 0) throw std::logic_error("empty propagator");
  }
  return median(std::move(t));
}

BenchPoint measure_point(const SpinSystem& system, const BBSequence& seq, int repeats) {
  if (repeats < 1) throw std::invalid_argument("repeats must be positive");
  const SMSequence sm = sm_from_bb(system, seq);
  std::vector<double> t_cache, t_bb, t_sm;
  double cross = 0.0;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = Clock::now();
    const PropagatorCache cache = build_cache(system, seq.dt());
    t_cache.push_back(seconds_since(t0));

    t0 = Clock::now();
    const Operator u_bb = bb_propagator(cache, seq);
    t_bb.push_back(seconds_since(t0));

    t0 = Clock::now();
    const Operator u_sm = sm_propagator(system, sm);
    t_sm.push_back(seconds_since(t0));

    if (r == 0) {
      cross = unitary_fidelity(u_sm.matrix(), u_bb.matrix());
      if (std::abs(cross - 1.0) > 1e-9) {
        throw std::runtime_error("BB and SM engines disagree: F_u = " + std::to_string(cross));
      }
    }
  }
  BenchPoint p;
  p.n_spins = system.n_spins();
  p.n_segments = seq.n_segments();
  p.duty = seq.duty_cycle();
  p.tau_cache = median(t_cache);
  p.tau_bb = median(t_bb);
  p.tau_sm = median(t_sm);
  p.ratio = p.tau_sm / p.tau_bb;
  p.cross_fidelity = cross;
  return p;
}

std::vector<BenchPoint> run_benchmark(const BenchConfig& config) {
  std::vector<BenchPoint> points;
  std::mt19937_64 rng(config.seed);
  for (int n : config.sizes) {
    const SpinSystem system = benchmark_system(n);
    for (double duty : config.duties) {
      const BBSequence seq = random_bb_sequence(system, config.n_segments, duty, config.dt, rng);
      BenchPoint p = measure_point(system, seq, config.repeats);
      p.duty = duty;
      points.push_back(p);
    }
  }
  return points;
}

std::string bench_csv(const std::vector<BenchPoint>& points) {
  std::ostringstream out;
  out << "n_spins,K,duty,tau_sm_s,tau_bb_s,tau_cache_s,ratio\n";
  char buf[160];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.6g,%.9g,%.9g,%.9g,%.6g\n", p.n_spins, p.n_segments, p.duty,
                  p.tau_sm, p.tau_bb, p.tau_cache, p.ratio);
    out << buf;
  }
  return out.str();
}

std::string bench_plot_data(const std::vector<BenchPoint>& points) {
  std::ostringstream out;
  out << "# duty ratio\n";
  char buf[64];
  int current = -1;
  for (const auto& p : points) {
    // One block per system size, separated by blank lines.
    if (p.n_spins != current) {
      if (current != -1) out << "\n\n";
      out << "# n_spins " << p.n_spins << '\n';
      current = p.n_spins;
    }
    std::snprintf(buf, sizeof buf, "%.6g %.6g\n", p.duty, p.ratio);
    out << buf;
  }
  return out.str();
}

}  // namespace bb
