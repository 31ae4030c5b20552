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

#include "bangbang/ofpqs.hpp"

#include "bangbang/channels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bb {

namespace {

void check_marked(int n_sys, const std::vector<int>& marked) {
  if (n_sys < 1 || n_sys > 12) throw std::invalid_argument("n_sys must be in [1, 12]");
  if (marked.empty()) throw std::invalid_argument("the marked set is empty");
  for (int m : marked) {
    if (m < 0 || m >= (1 << n_sys)) {
      throw std::invalid_argument("marked state " + std::to_string(m) + " outside [0, " +
                                  std::to_string(1 << n_sys) + ")");
    }
  }
}

// e^{i alpha} on marked system states applied to a vector, via two oracle calls.
void apply_marked_phase(const Oracle& oracle, double alpha, CVector& psi) {
  oracle.apply(psi);
  const Complex ph = std::polar(1.0, alpha);
  for (Eigen::Index i = 1; i < psi.size(); i += 2) psi(i) *= ph;
  oracle.apply(psi);
}

// H S0(beta) H = 1 - (1 - e^{i beta}) |s><s| on the system register, per ancilla branch.
void apply_start_reflection(int n_sys, double beta, CVector& psi) {
  const Eigen::Index q = Eigen::Index{1} << n_sys;
  const Complex factor = (1.0 - std::polar(1.0, beta)) / static_cast<double>(q);
  for (Eigen::Index a = 0; a < 2; ++a) {
    Complex overlap = 0.0;
    for (Eigen::Index s = 0; s < q; ++s) overlap += psi(2 * s + a);
    for (Eigen::Index s = 0; s < q; ++s) psi(2 * s + a) -= factor * overlap;
  }
}

}  // namespace

void OfpqsConfig::validate() const {
  check_marked(n_sys, marked);
  if (l < 0) throw std::invalid_argument("iteration count must be nonnegative");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must be in (0, 1]");
}

double chebyshev_t(double order, double x) {
  if (!(order >= 0.0)) throw std::invalid_argument("Chebyshev order must be nonnegative");
  if (std::abs(x) <= 1.0) return std::cos(order * std::acos(x));
  if (x > 1.0) return std::cosh(order * std::acosh(x));
  if (order != std::floor(order)) {
    throw std::domain_error("fractional-order Chebyshev polynomial undefined for x < -1");
  }
  const double sign = std::fmod(order, 2.0) == 0.0 ? 1.0 : -1.0;
  return sign * std::cosh(order * std::acosh(-x));
}

PhaseSchedule phase_schedule(int l, double delta) {
  if (l < 0) throw std::invalid_argument("iteration count must be nonnegative");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must be in (0, 1]");
  PhaseSchedule s;
  s.l = l;
  s.L = 2 * l + 1;
  s.gamma = 1.0 / chebyshev_t(1.0 / s.L, 1.0 / delta);
  const double root = std::sqrt(std::max(0.0, 1.0 - s.gamma * s.gamma));
  s.alpha.resize(l);
  s.beta.resize(l);
  for (int j = 1; j <= l; ++j) {
    const double x = std::tan(kTwoPi * j / s.L) * root;
    // acot on (0, pi); an infinite argument takes the limit alpha -> 0.
    s.alpha[j - 1] = std::isfinite(x) ? 2.0 * std::atan2(1.0, x) : 0.0;
  }
  for (int j = 1; j <= l; ++j) s.beta[l - j] = -s.alpha[j - 1];
  return s;
}

Oracle::Oracle(int n_sys, std::vector<int> marked) : n_sys_(n_sys), marked_(std::move(marked)) {
  check_marked(n_sys_, marked_);
  std::sort(marked_.begin(), marked_.end());
  marked_.erase(std::unique(marked_.begin(), marked_.end()), marked_.end());
  marked_flag_.assign(std::size_t{1} << n_sys_, false);
  for (int m : marked_) marked_flag_[m] = true;
}

void Oracle::apply(CVector& psi) const {
  if (psi.size() != dim()) throw std::invalid_argument("state dimension does not match the oracle");
  for (int m : marked_) std::swap(psi(2 * m), psi(2 * m + 1));
  ++queries_;
}

void Oracle::apply(CMatrix& u) const {
  if (u.rows() != dim()) throw std::invalid_argument("operator dimension does not match the oracle");
  for (int m : marked_) u.row(2 * m).swap(u.row(2 * m + 1));
  ++queries_;
}

Operator oracle_unitary(int n_sys, const std::vector<int>& marked) {
  const Oracle oracle(n_sys, marked);
  CMatrix u = CMatrix::Identity(oracle.dim(), oracle.dim());
  oracle.apply(u);
  return Operator(std::move(u));
}

Operator selective_phase_marked(const Oracle& oracle, double alpha) {
  CMatrix u = CMatrix::Identity(oracle.dim(), oracle.dim());
  oracle.apply(u);
  const Complex ph = std::polar(1.0, alpha);
  for (Eigen::Index i = 1; i < u.rows(); i += 2) u.row(i) *= ph;
  oracle.apply(u);
  return Operator(std::move(u));
}

Operator selective_phase_marked_direct(int n_sys, const std::vector<int>& marked, double alpha) {
  check_marked(n_sys, marked);
  const Eigen::Index q = Eigen::Index{1} << n_sys;
  std::vector<bool> flag(static_cast<std::size_t>(q), false);
  for (int m : marked) flag[m] = true;
  CVector d(2 * q);
  for (Eigen::Index s = 0; s < q; ++s) {
    // The ancilla ends in e^{i alpha} exactly when it was |1> after the first query.
    d(2 * s) = flag[s] ? std::polar(1.0, alpha) : Complex(1.0);
    d(2 * s + 1) = flag[s] ? Complex(1.0) : std::polar(1.0, alpha);
  }
  return Operator(CMatrix(d.asDiagonal()));
}

Operator selective_phase_zero(int n_sys, double beta) {
  if (n_sys < 1) throw std::invalid_argument("n_sys must be positive");
  const Eigen::Index dim = Eigen::Index{2} << n_sys;
  CMatrix u = CMatrix::Identity(dim, dim);
  u(0, 0) = std::polar(1.0, beta);
  u(1, 1) = std::polar(1.0, beta);
  return Operator(std::move(u));
}

Operator system_hadamard(int n_sys) {
  if (n_sys < 1) throw std::invalid_argument("n_sys must be positive");
  const Eigen::Index q = Eigen::Index{1} << n_sys;
  const double norm = 1.0 / std::sqrt(static_cast<double>(q));
  CMatrix u = CMatrix::Zero(2 * q, 2 * q);
  for (Eigen::Index r = 0; r < q; ++r) {
    for (Eigen::Index c = 0; c < q; ++c) {
      // <r|H^n|c> = (-1)^{popcount(r & c)} / sqrt(Q)
      const double v = (__builtin_popcountll(static_cast<unsigned long long>(r & c)) & 1) ? -norm : norm;
      u(2 * r, 2 * c) = v;
      u(2 * r + 1, 2 * c + 1) = v;
    }
  }
  return Operator(std::move(u), true);
}

Operator grover_iterate(const Oracle& oracle, double marked_phase, double start_phase) {
  const Operator h = system_hadamard(oracle.n_sys());
  const Operator s0 = selective_phase_zero(oracle.n_sys(), start_phase);
  const Operator sm = selective_phase_marked(oracle, marked_phase);
  return h * s0 * h * sm;
}

// Iterate j of the schedule as G(beta_j, -alpha_j): the marked phase is beta_j
// and the start-state reflection carries e^{-i alpha_j}. This is the
// arrangement whose success probability satisfies the 1 - delta^2 bound.
Operator ofpqs_iterations_unitary(const OfpqsConfig& config) {
  config.validate();
  const Oracle oracle(config.n_sys, config.marked);
  const PhaseSchedule sched = phase_schedule(config.l, config.delta);
  CMatrix u = CMatrix::Identity(oracle.dim(), oracle.dim());
  for (int j = 0; j < config.l; ++j) {
    u = grover_iterate(oracle, sched.beta[j], -sched.alpha[j]).matrix() * u;
  }
  return Operator(std::move(u));
}

SearchOutcome run_ofpqs(const OfpqsConfig& config) {
  config.validate();
  const Oracle oracle(config.n_sys, config.marked);
  const PhaseSchedule sched = phase_schedule(config.l, config.delta);
  const Eigen::Index q = Eigen::Index{1} << config.n_sys;
  // H^n |0>|0> is the uniform superposition with the ancilla in |0>.
  CVector psi = CVector::Zero(2 * q);
  for (Eigen::Index s = 0; s < q; ++s) psi(2 * s) = 1.0 / std::sqrt(static_cast<double>(q));
  for (int j = 0; j < config.l; ++j) {
    apply_marked_phase(oracle, sched.beta[j], psi);
    apply_start_reflection(config.n_sys, -sched.alpha[j], psi);
  }
  SearchOutcome out;
  for (int m : oracle.marked()) out.success_probability += std::norm(psi(2 * m)) + std::norm(psi(2 * m + 1));
  out.state = std::move(psi);
  out.oracle_queries = oracle.queries();
  return out;
}

std::vector<SweepPoint> sweep_ofpqs(int n_sys, const std::vector<int>& marked, double delta, int l_max) {
  std::vector<SweepPoint> points;
  for (int l = 1; l <= l_max; ++l) {
    const SearchOutcome o = run_ofpqs({n_sys, marked, l, delta});
    points.push_back({l, 2 * l + 1, o.success_probability});
  }
  return points;
}

Readout readout_via_ancilla(const CVector& state, int n_sys, const std::vector<int>& marked) {
  check_marked(n_sys, marked);
  const Eigen::Index q = Eigen::Index{1} << n_sys;
  if (state.size() != 2 * q) throw std::invalid_argument("state dimension does not match n_sys");
  const DensityMatrix rho = twirl(DensityMatrix::pure(state));
  CMatrix h_anc = CMatrix::Zero(2 * q, 2 * q);
  const double r2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index s = 0; s < q; ++s) {
    h_anc(2 * s, 2 * s) = r2;
    h_anc(2 * s, 2 * s + 1) = r2;
    h_anc(2 * s + 1, 2 * s) = r2;
    h_anc(2 * s + 1, 2 * s + 1) = -r2;
  }
  const DensityMatrix measured = evolve(rho, h_anc);
  Readout r;
  r.system_probabilities.resize(static_cast<std::size_t>(q));
  for (Eigen::Index s = 0; s < q; ++s) {
    r.system_probabilities[s] = measured.matrix()(2 * s, 2 * s).real() + measured.matrix()(2 * s + 1, 2 * s + 1).real();
  }
  std::vector<int> unique = marked;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  for (int m : unique) r.marked_probability += r.system_probabilities[m];
  return r;
}

}  // namespace bb
