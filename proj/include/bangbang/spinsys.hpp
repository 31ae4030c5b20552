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

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace bb {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class Axis { X, Y, Z };

/// Dense N x N complex operator. The hermitian tag is a promise checked at
/// construction time (elementwise to 1e-12).
class Operator {
 public:
  Operator() = default;
  explicit Operator(CMatrix m, bool hermitian = false);

  static Operator identity(Eigen::Index dim);
  static Operator zero(Eigen::Index dim, bool hermitian = true);

  const CMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  bool hermitian() const { return hermitian_; }

  Operator operator+(const Operator& o) const;
  Operator operator-(const Operator& o) const;
  Operator operator*(const Operator& o) const;
  Operator operator*(double s) const;

 private:
  CMatrix m_;
  bool hermitian_ = false;
};

/// One RF channel: a nuclear species and the spins it drives.
struct Species {
  std::string label;
  double max_amplitude = 0.0;  // Omega_j, rad/s
  std::vector<int> spins;      // 0-based spin indices, ascending
};

/// n spin-1/2 nuclei with the secular internal Hamiltonian parameters.
/// Spin 0 is the most significant tensor factor; |0> is the +1/2 state of Iz.
class SpinSystem {
 public:
  SpinSystem(int n_spins, std::vector<Species> species, std::vector<double> offsets,
             RMatrix j_couplings, RMatrix d_couplings, bool weak_coupling);

  int n_spins() const { return n_spins_; }
  Eigen::Index dim() const { return Eigen::Index{1} << n_spins_; }
  const std::vector<Species>& species() const { return species_; }
  int n_species() const { return static_cast<int>(species_.size()); }
  int species_of(int spin) const { return spin_to_species_.at(spin); }
  const std::vector<double>& offsets() const { return offsets_; }  // rad/s
  const RMatrix& j_couplings() const { return j_; }                // Hz
  const RMatrix& d_couplings() const { return d_; }                // Hz
  bool weak_coupling() const { return weak_coupling_; }

  /// Copy with every species amplitude multiplied by `scale` (RF inhomogeneity).
  SpinSystem with_rf_scale(double scale) const;

 private:
  int n_spins_;
  std::vector<Species> species_;
  std::vector<int> spin_to_species_;
  std::vector<double> offsets_;
  RMatrix j_;
  RMatrix d_;
  bool weak_coupling_;
};

Operator spin_operator(const SpinSystem& system, int spin, Axis axis);
Operator collective_operator(const SpinSystem& system, int species, Axis axis);

/// Eigenvalues of S_jz on each computational basis state (the diagonal of
/// collective_operator(system, species, Axis::Z)).
Eigen::VectorXd collective_z_diagonal(const SpinSystem& system, int species);

/// H = -sum_r w_r I_rz + 2pi sum_{r<s} (J+2D) I_rz I_sz + 2pi sum_{r<s} (J-D)(IxIx + IyIy).
/// The flip-flop term is dropped when the system is flagged weakly coupled.
Operator internal_hamiltonian(const SpinSystem& system);

struct CouplingViolation {
  int r;
  int s;
  double offset_gap;  // |w_r - w_s|, rad/s
  double coupling;    // 2pi |J - D|, rad/s
};

struct WeakCouplingReport {
  bool valid = true;
  double ratio_threshold = 100.0;
  std::vector<CouplingViolation> violations;
};

WeakCouplingReport is_weak_coupling_valid(const SpinSystem& system, double ratio_threshold = 100.0);

/// Parses the JSON spin-system description. Amplitudes and offsets are given
/// in Hz and converted to rad/s. Throws std::invalid_argument on bad input.
SpinSystem parse_spin_system(std::string_view text);
SpinSystem load_spin_system(const std::string& path);
std::string dump_spin_system(const SpinSystem& system);

}  // namespace bb
