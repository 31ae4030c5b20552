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

#include <span>
#include <string>
#include <vector>

#include "bangbang/spinsys.hpp"

namespace bb {

inline constexpr double kDefaultSegment = 5e-6;  // s

/// Wraps to [0, 2pi) and snaps to the nearest value that is exactly
/// `degrees * (pi / 180)` for some double `degrees`, so that phases survive a
/// trip through the degree-valued sequence file bit for bit.
double canonical_phase(double radians);
double phase_to_degrees(double canonical_radians);
double degrees_to_phase(double degrees);

/// One species' action during one segment.
struct Event {
  bool pulsed = false;
  double phase = 0.0;  // radians, canonical; meaningless for delays

  static Event delay() { return {}; }
  static Event pulse(double phase) { return {true, canonical_phase(phase)}; }

  friend bool operator==(const Event& a, const Event& b) {
    return a.pulsed == b.pulsed && (!a.pulsed || a.phase == b.phase);
  }
};

/// Bang-bang program: K segments of length dt, each holding one Event per
/// species, plus the segment counts after which the state is twirled.
class BBSequence {
 public:
  BBSequence() = default;
  BBSequence(double dt, int n_segments, int n_species, std::vector<std::string> labels = {});

  double dt() const { return dt_; }
  int n_segments() const { return n_segments_; }
  int n_species() const { return n_species_; }
  double duration() const { return dt_ * n_segments_; }
  const std::vector<std::string>& labels() const { return labels_; }

  const Event& event(int segment, int species) const { return events_[index(segment, species)]; }
  std::span<const Event> segment(int k) const {
    return {events_.data() + static_cast<std::size_t>(k) * n_species_,
            static_cast<std::size_t>(n_species_)};
  }
  void set_pulse(int segment, int species, double phase);
  void set_delay(int segment, int species);

  const std::vector<int>& twirl_boundaries() const { return twirls_; }
  /// Boundaries must be strictly increasing and inside [0, K].
  void set_twirl_boundaries(std::vector<int> boundaries);

  int pulsed_segments() const;
  double duty_cycle() const;

  friend bool operator==(const BBSequence& a, const BBSequence& b);

 private:
  std::size_t index(int segment, int species) const;

  double dt_ = kDefaultSegment;
  int n_segments_ = 0;
  int n_species_ = 0;
  std::vector<std::string> labels_;
  std::vector<Event> events_;
  std::vector<int> twirls_;
};

/// Smooth-modulation program: arbitrary amplitude (rad/s) and phase per
/// segment and species.
struct SMSequence {
  double dt = kDefaultSegment;
  int n_segments = 0;
  int n_species = 0;
  std::vector<double> amplitude;  // [k * n_species + j]
  std::vector<double> phase;

  SMSequence() = default;
  SMSequence(double dt, int n_segments, int n_species);
};

/// SM program with amplitude Omega_j wherever the BB program pulses.
SMSequence sm_from_bb(const SpinSystem& system, const BBSequence& seq);

/// Everything a BB evaluation needs, computed once per (system, dt).
class PropagatorCache {
 public:
  const SpinSystem& system() const { return system_; }
  double dt() const { return dt_; }
  Eigen::Index dim() const { return delay_.rows(); }
  int n_species() const { return static_cast<int>(basic_.size()); }

  const CMatrix& basic(int species) const { return basic_.at(species); }
  const CMatrix& delay() const { return delay_; }
  bool delay_is_diagonal() const { return delay_is_diagonal_; }
  const CVector& delay_diagonal() const { return delay_diag_; }
  const Eigen::VectorXd& z_diagonal(int species) const { return z_diag_.at(species); }

 private:
  friend PropagatorCache build_cache(const SpinSystem& system, double dt);

  explicit PropagatorCache(SpinSystem system) : system_(std::move(system)) {}

  SpinSystem system_;
  double dt_ = 0.0;
  std::vector<CMatrix> basic_;
  CMatrix delay_;
  CVector delay_diag_;
  bool delay_is_diagonal_ = false;
  std::vector<Eigen::VectorXd> z_diag_;
};

/// exp(-i H t) by Hermitian eigendecomposition. Rejects untagged generators.
Operator expm_hermitian_generator(const Operator& h, double t);

/// X_j = exp(-i (H0 + Omega_j S_jx) dt) per species and U_d = exp(-i H0 dt).
PropagatorCache build_cache(const SpinSystem& system, double dt = kDefaultSegment);

/// exp(-i phi S_jz), built entrywise from the S_jz diagonal.
CVector z_rotation_diagonal(const SpinSystem& system, int species, double phi);
Operator z_rotation(const SpinSystem& system, int species, double phi);

struct EvalOptions {
  // Multiply diagonal delay propagators as a row scaling instead of a dense product.
  bool diagonal_fast_path = true;
};

/// Product of Z X_j Z^dagger over pulsed species (species 0 acts first), or
/// U_d when every species is idle. Simultaneous pulses each carry H0, so the
/// product only approximates simultaneous irradiation; sm_propagator is exact.
Operator segment_propagator(const PropagatorCache& cache, std::span<const Event> events);

/// U = U_K ... U_1 (segment 1 acts first). Throws if the sequence has twirls.
Operator bb_propagator(const PropagatorCache& cache, const BBSequence& seq,
                       const EvalOptions& options = {});

/// Same product restricted to segments [first, last), twirl boundaries ignored.
CMatrix bb_propagator_range(const PropagatorCache& cache, const BBSequence& seq, int first, int last,
                            const EvalOptions& options = {});

/// Exact per-segment exponentials of H0 + sum_j u_jk (cos phi S_jx + sin phi S_jy).
Operator sm_propagator(const SpinSystem& system, const SMSequence& seq);

/// max |U^dagger U - I|
double unitarity_error(const CMatrix& u);

}  // namespace bb
