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

#include "bangbang/propagator.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace bb {

namespace {

constexpr double kDegree = kPi / 180.0;

double wrap_two_pi(double rad) {
  if (!std::isfinite(rad)) throw std::invalid_argument("phase must be finite");
  double r = std::fmod(rad, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Degree value whose conversion lands closest to `w` (exactly on it when `w`
// is canonical). Conversion is a single multiply by kDegree, so the preimage
// sits within a few ulps of w / kDegree.
double best_degrees(double w) {
  if (w == 0.0) return 0.0;
  const double d0 = w / kDegree;
  double best = d0;
  double best_err = std::abs(d0 * kDegree - w);
  double up = d0;
  double down = d0;
  for (int i = 0; i < 16 && best_err != 0.0; ++i) {
    up = std::nextafter(up, 360.0);
    down = std::nextafter(down, 0.0);
    for (double d : {up, down}) {
      if (d < 0.0 || d >= 360.0 || d * kDegree >= kTwoPi) continue;
      const double err = std::abs(d * kDegree - w);
      if (err < best_err) {
        best_err = err;
        best = d;
      }
    }
  }
  return best;
}

}  // namespace

double canonical_phase(double radians) {
  const double w = wrap_two_pi(radians);
  const double p = best_degrees(w) * kDegree;
  return p >= kTwoPi ? 0.0 : p;
}

double phase_to_degrees(double canonical_radians) { return best_degrees(wrap_two_pi(canonical_radians)); }

double degrees_to_phase(double degrees) {
  if (!std::isfinite(degrees)) throw std::invalid_argument("phase must be finite");
  double d = std::fmod(degrees, 360.0);
  if (d < 0.0) d += 360.0;
  if (d >= 360.0) d = 0.0;
  const double p = d * kDegree;
  return p >= kTwoPi ? 0.0 : p;
}

BBSequence::BBSequence(double dt, int n_segments, int n_species, std::vector<std::string> labels)
    : dt_(dt), n_segments_(n_segments), n_species_(n_species), labels_(std::move(labels)) {
  if (!(dt > 0.0)) throw std::invalid_argument("segment duration must be positive");
  if (n_segments < 0) throw std::invalid_argument("segment count must be nonnegative");
  if (n_species < 1) throw std::invalid_argument("a sequence needs at least one species");
  if (labels_.empty()) {
    for (int j = 0; j < n_species; ++j) labels_.push_back("ch" + std::to_string(j));
  }
  if (static_cast<int>(labels_.size()) != n_species) {
    throw std::invalid_argument("one label per species is required");
  }
  events_.assign(static_cast<std::size_t>(n_segments) * n_species, Event::delay());
}

std::size_t BBSequence::index(int segment, int species) const {
  if (segment < 0 || segment >= n_segments_ || species < 0 || species >= n_species_) {
    throw std::out_of_range("segment/species index out of range");
  }
  return static_cast<std::size_t>(segment) * n_species_ + species;
}

void BBSequence::set_pulse(int segment, int species, double phase) {
  events_[index(segment, species)] = Event::pulse(phase);
}

void BBSequence::set_delay(int segment, int species) {
  events_[index(segment, species)] = Event::delay();
}

void BBSequence::set_twirl_boundaries(std::vector<int> boundaries) {
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    if (boundaries[i] < 0 || boundaries[i] > n_segments_) {
      throw std::invalid_argument("twirl boundary " + std::to_string(boundaries[i]) +
                                  " outside [0, " + std::to_string(n_segments_) + "]");
    }
    if (i > 0 && boundaries[i] <= boundaries[i - 1]) {
      throw std::invalid_argument("twirl boundaries must be strictly increasing");
    }
  }
  twirls_ = std::move(boundaries);
}

int BBSequence::pulsed_segments() const {
  int count = 0;
  for (int k = 0; k < n_segments_; ++k) {
    for (const Event& e : segment(k)) {
      if (e.pulsed) {
        ++count;
        break;
      }
    }
  }
  return count;
}

double BBSequence::duty_cycle() const {
  return n_segments_ == 0 ? 0.0 : static_cast<double>(pulsed_segments()) / n_segments_;
}

bool operator==(const BBSequence& a, const BBSequence& b) {
  return a.dt_ == b.dt_ && a.n_segments_ == b.n_segments_ && a.n_species_ == b.n_species_ &&
         a.labels_ == b.labels_ && a.events_ == b.events_ && a.twirls_ == b.twirls_;
}

SMSequence::SMSequence(double dt_, int n_segments_, int n_species_)
    : dt(dt_),
      n_segments(n_segments_),
      n_species(n_species_),
      amplitude(static_cast<std::size_t>(n_segments_) * n_species_, 0.0),
      phase(static_cast<std::size_t>(n_segments_) * n_species_, 0.0) {}

SMSequence sm_from_bb(const SpinSystem& system, const BBSequence& seq) {
  if (seq.n_species() != system.n_species()) {
    throw std::invalid_argument("sequence and system disagree on species count");
  }
  SMSequence sm(seq.dt(), seq.n_segments(), seq.n_species());
  for (int k = 0; k < seq.n_segments(); ++k) {
    for (int j = 0; j < seq.n_species(); ++j) {
      const Event& e = seq.event(k, j);
      if (!e.pulsed) continue;
      const std::size_t i = static_cast<std::size_t>(k) * seq.n_species() + j;
      sm.amplitude[i] = system.species()[j].max_amplitude;
      sm.phase[i] = e.phase;
    }
  }
  return sm;
}

Operator expm_hermitian_generator(const Operator& h, double t) {
  if (!h.hermitian()) throw std::invalid_argument("generator must be tagged Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h.matrix());
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  CVector phases(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) phases(i) = std::polar(1.0, -lambda(i) * t);
  const CMatrix& v = eig.eigenvectors();
  return Operator(v * phases.asDiagonal() * v.adjoint());
}

PropagatorCache build_cache(const SpinSystem& system, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("segment duration must be positive");
  PropagatorCache cache(system);
  cache.dt_ = dt;
  const Operator h0 = internal_hamiltonian(system);
  cache.delay_ = expm_hermitian_generator(h0, dt).matrix();
  const CMatrix& h = h0.matrix();
  cache.delay_is_diagonal_ = (h - CMatrix(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  if (cache.delay_is_diagonal_) {
    // Exact diagonal exponential; keeps the dense copy consistent with the fast path.
    cache.delay_diag_.resize(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      cache.delay_diag_(i) = std::polar(1.0, -h(i, i).real() * dt);
    }
    cache.delay_ = cache.delay_diag_.asDiagonal();
  }
  for (int j = 0; j < system.n_species(); ++j) {
    const Operator gen = h0 + collective_operator(system, j, Axis::X) * system.species()[j].max_amplitude;
    cache.basic_.push_back(expm_hermitian_generator(gen, dt).matrix());
    cache.z_diag_.push_back(collective_z_diagonal(system, j));
  }
  return cache;
}

CVector z_rotation_diagonal(const SpinSystem& system, int species, double phi) {
  const Eigen::VectorXd m = collective_z_diagonal(system, species);
  CVector z(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) z(i) = std::polar(1.0, -phi * m(i));
  return z;
}

Operator z_rotation(const SpinSystem& system, int species, double phi) {
  return Operator(CMatrix(z_rotation_diagonal(system, species, phi).asDiagonal()));
}

namespace {

// Left-multiplies `u` by the segment propagator, reusing `seg` and `tmp`.
void apply_segment(const PropagatorCache& cache, std::span<const Event> events, CMatrix& u,
                   CMatrix& seg, CMatrix& tmp, CVector& z, const EvalOptions& options) {
  bool any = false;
  for (std::size_t j = 0; j < events.size(); ++j) {
    const Event& e = events[j];
    if (!e.pulsed) continue;
    any = true;
    const CMatrix& x = cache.basic(static_cast<int>(j));
    if (e.phase == 0.0) {
      tmp.noalias() = x * u;
    } else {
      // (Z X Z^dagger)_ab = z_a X_ab conj(z_b)
      const Eigen::VectorXd& m = cache.z_diagonal(static_cast<int>(j));
      const Eigen::Index n = m.size();
      z.resize(n);
      for (Eigen::Index a = 0; a < n; ++a) z(a) = std::polar(1.0, -e.phase * m(a));
      seg.noalias() = z.asDiagonal() * x * z.conjugate().asDiagonal();
      tmp.noalias() = seg * u;
    }
    u.swap(tmp);
  }
  if (any) return;
  if (cache.delay_is_diagonal() && options.diagonal_fast_path) {
    u = cache.delay_diagonal().asDiagonal() * u;
  } else {
    tmp.noalias() = cache.delay() * u;
    u.swap(tmp);
  }
}

void check_cache(const PropagatorCache& cache, const BBSequence& seq) {
  if (seq.n_species() != cache.n_species()) {
    throw std::invalid_argument("cache built for " + std::to_string(cache.n_species()) +
                                " species, sequence has " + std::to_string(seq.n_species()));
  }
  if (seq.dt() != cache.dt()) throw std::invalid_argument("cache built for a different segment length");
}

}  // namespace

Operator segment_propagator(const PropagatorCache& cache, std::span<const Event> events) {
  if (static_cast<int>(events.size()) != cache.n_species()) {
    throw std::invalid_argument("segment has the wrong number of species events");
  }
  CMatrix u = CMatrix::Identity(cache.dim(), cache.dim());
  CMatrix seg, tmp;
  CVector z;
  apply_segment(cache, events, u, seg, tmp, z, EvalOptions{false});
  return Operator(std::move(u));
}

CMatrix bb_propagator_range(const PropagatorCache& cache, const BBSequence& seq, int first, int last,
                            const EvalOptions& options) {
  check_cache(cache, seq);
  if (first < 0 || last > seq.n_segments() || first > last) {
    throw std::out_of_range("segment range out of bounds");
  }
  CMatrix u = CMatrix::Identity(cache.dim(), cache.dim());
  CMatrix seg, tmp(cache.dim(), cache.dim());
  CVector z;
  for (int k = first; k < last; ++k) apply_segment(cache, seq.segment(k), u, seg, tmp, z, options);
  return u;
}

Operator bb_propagator(const PropagatorCache& cache, const BBSequence& seq, const EvalOptions& options) {
  if (!seq.twirl_boundaries().empty()) {
    throw std::invalid_argument("sequence contains twirls; use bb_evolve_with_twirls");
  }
  return Operator(bb_propagator_range(cache, seq, 0, seq.n_segments(), options));
}

Operator sm_propagator(const SpinSystem& system, const SMSequence& seq) {
  if (seq.n_species != system.n_species()) {
    throw std::invalid_argument("sequence and system disagree on species count");
  }
  if (!(seq.dt > 0.0)) throw std::invalid_argument("segment duration must be positive");
  const Operator h0 = internal_hamiltonian(system);
  std::vector<CMatrix> sx, sy;
  for (int j = 0; j < system.n_species(); ++j) {
    sx.push_back(collective_operator(system, j, Axis::X).matrix());
    sy.push_back(collective_operator(system, j, Axis::Y).matrix());
  }
  const Eigen::Index dim = system.dim();
  CMatrix u = CMatrix::Identity(dim, dim);
  CMatrix tmp(dim, dim);
  for (int k = 0; k < seq.n_segments; ++k) {
    CMatrix h = h0.matrix();
    for (int j = 0; j < seq.n_species; ++j) {
      const std::size_t i = static_cast<std::size_t>(k) * seq.n_species + j;
      const double amp = seq.amplitude[i];
      if (amp < 0.0 || amp > system.species()[j].max_amplitude * (1.0 + 1e-12)) {
        throw std::invalid_argument("SM amplitude outside [0, Omega_j] at segment " + std::to_string(k));
      }
      if (amp == 0.0) continue;
      h += amp * (std::cos(seq.phase[i]) * sx[j] + std::sin(seq.phase[i]) * sy[j]);
    }
    // Re-symmetrize so the Hermitian tag check sees exact symmetry.
    const CMatrix herm = 0.5 * (h + h.adjoint());
    tmp.noalias() = expm_hermitian_generator(Operator(herm, true), seq.dt).matrix() * u;
    u.swap(tmp);
  }
  return Operator(std::move(u));
}

double unitarity_error(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace bb
