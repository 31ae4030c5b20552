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

#include "bangbang/spinsys.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bb {

namespace {

constexpr double kHermitianTol = 1e-12;

// Bit mask of spin r in a basis index (spin 0 is the most significant bit).
Eigen::Index spin_mask(int n_spins, int r) { return Eigen::Index{1} << (n_spins - 1 - r); }

double iz_value(Eigen::Index basis, Eigen::Index mask) { return (basis & mask) ? -0.5 : 0.5; }

void check_symmetric(const RMatrix& m, int n, const char* name) {
  if (m.rows() != n || m.cols() != n) {
    throw std::invalid_argument(std::string(name) + " must be " + std::to_string(n) + "x" +
                                std::to_string(n));
  }
  for (int r = 0; r < n; ++r) {
    if (m(r, r) != 0.0) {
      throw std::invalid_argument(std::string(name) + " must have a zero diagonal");
    }
    for (int s = r + 1; s < n; ++s) {
      if (m(r, s) != m(s, r)) {
        throw std::invalid_argument(std::string(name) + " is not symmetric at (" + std::to_string(r) +
                                    "," + std::to_string(s) + ")");
      }
    }
  }
}

}  // namespace

Operator::Operator(CMatrix m, bool hermitian) : m_(std::move(m)), hermitian_(hermitian) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("operator must be square");
  }
  if (hermitian_) {
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale) {
      throw std::invalid_argument("operator tagged hermitian is not Hermitian");
    }
  }
}

Operator Operator::identity(Eigen::Index dim) { return Operator(CMatrix::Identity(dim, dim), true); }

Operator Operator::zero(Eigen::Index dim, bool hermitian) {
  return Operator(CMatrix::Zero(dim, dim), hermitian);
}

Operator Operator::operator+(const Operator& o) const {
  return Operator(m_ + o.m_, hermitian_ && o.hermitian_);
}

Operator Operator::operator-(const Operator& o) const {
  return Operator(m_ - o.m_, hermitian_ && o.hermitian_);
}

Operator Operator::operator*(const Operator& o) const { return Operator(m_ * o.m_, false); }

Operator Operator::operator*(double s) const { return Operator(m_ * s, hermitian_); }

SpinSystem::SpinSystem(int n_spins, std::vector<Species> species, std::vector<double> offsets,
                       RMatrix j_couplings, RMatrix d_couplings, bool weak_coupling)
    : n_spins_(n_spins),
      species_(std::move(species)),
      spin_to_species_(static_cast<std::size_t>(std::max(n_spins, 0)), -1),
      offsets_(std::move(offsets)),
      j_(std::move(j_couplings)),
      d_(std::move(d_couplings)),
      weak_coupling_(weak_coupling) {
  if (n_spins_ < 1 || n_spins_ > 14) {
    throw std::invalid_argument("n_spins must be in [1, 14]");
  }
  if (static_cast<int>(offsets_.size()) != n_spins_) {
    throw std::invalid_argument("one offset per spin is required");
  }
  check_symmetric(j_, n_spins_, "J couplings");
  check_symmetric(d_, n_spins_, "D couplings");
  for (std::size_t j = 0; j < species_.size(); ++j) {
    auto& sp = species_[j];
    if (sp.max_amplitude < 0.0) {
      throw std::invalid_argument("species '" + sp.label + "' has a negative amplitude");
    }
    std::sort(sp.spins.begin(), sp.spins.end());
    for (int r : sp.spins) {
      if (r < 0 || r >= n_spins_) {
        throw std::invalid_argument("species '" + sp.label + "' lists spin " + std::to_string(r) +
                                    " out of range");
      }
      if (spin_to_species_[r] != -1) {
        throw std::invalid_argument("spin " + std::to_string(r) + " belongs to two species");
      }
      spin_to_species_[r] = static_cast<int>(j);
    }
  }
  for (int r = 0; r < n_spins_; ++r) {
    if (spin_to_species_[r] == -1) {
      throw std::invalid_argument("spin " + std::to_string(r) + " is not assigned to a species");
    }
  }
}

SpinSystem SpinSystem::with_rf_scale(double scale) const {
  SpinSystem out = *this;
  for (auto& sp : out.species_) sp.max_amplitude *= scale;
  return out;
}

Operator spin_operator(const SpinSystem& system, int spin, Axis axis) {
  if (spin < 0 || spin >= system.n_spins()) {
    throw std::out_of_range("spin index " + std::to_string(spin) + " out of range");
  }
  const Eigen::Index dim = system.dim();
  const Eigen::Index mask = spin_mask(system.n_spins(), spin);
  CMatrix m = CMatrix::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    switch (axis) {
      case Axis::Z:
        m(b, b) = iz_value(b, mask);
        break;
      case Axis::X:
        m(b ^ mask, b) = 0.5;
        break;
      case Axis::Y:
        // <1|Iy|0> = i/2, <0|Iy|1> = -i/2
        m(b ^ mask, b) = (b & mask) ? Complex(0.0, -0.5) : Complex(0.0, 0.5);
        break;
    }
  }
  return Operator(std::move(m), true);
}

Operator collective_operator(const SpinSystem& system, int species, Axis axis) {
  if (species < 0 || species >= system.n_species()) {
    throw std::out_of_range("unknown species " + std::to_string(species));
  }
  Operator total = Operator::zero(system.dim());
  for (int r : system.species()[species].spins) total = total + spin_operator(system, r, axis);
  return total;
}

Eigen::VectorXd collective_z_diagonal(const SpinSystem& system, int species) {
  if (species < 0 || species >= system.n_species()) {
    throw std::out_of_range("unknown species " + std::to_string(species));
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(system.dim());
  for (int r : system.species()[species].spins) {
    const Eigen::Index mask = spin_mask(system.n_spins(), r);
    for (Eigen::Index b = 0; b < system.dim(); ++b) diag(b) += iz_value(b, mask);
  }
  return diag;
}

Operator internal_hamiltonian(const SpinSystem& system) {
  const int n = system.n_spins();
  const Eigen::Index dim = system.dim();
  CMatrix h = CMatrix::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    double diag = 0.0;
    for (int r = 0; r < n; ++r) {
      const double zr = iz_value(b, spin_mask(n, r));
      diag -= system.offsets()[r] * zr;
      for (int s = r + 1; s < n; ++s) {
        const double zs = iz_value(b, spin_mask(n, s));
        diag += kTwoPi * (system.j_couplings()(r, s) + 2.0 * system.d_couplings()(r, s)) * zr * zs;
      }
    }
    h(b, b) = diag;
  }
  if (!system.weak_coupling()) {
    // IxIx + IyIy = (I+I- + I-I+)/2 connects |..0..1..> and |..1..0..> with 1/2.
    for (int r = 0; r < n; ++r) {
      for (int s = r + 1; s < n; ++s) {
        const double c = kTwoPi * (system.j_couplings()(r, s) - system.d_couplings()(r, s));
        if (c == 0.0) continue;
        const Eigen::Index mr = spin_mask(n, r);
        const Eigen::Index ms = spin_mask(n, s);
        for (Eigen::Index b = 0; b < dim; ++b) {
          if (((b & mr) != 0) != ((b & ms) != 0)) h(b ^ mr ^ ms, b) += 0.5 * c;
        }
      }
    }
  }
  return Operator(std::move(h), true);
}

WeakCouplingReport is_weak_coupling_valid(const SpinSystem& system, double ratio_threshold) {
  WeakCouplingReport report;
  report.ratio_threshold = ratio_threshold;
  const int n = system.n_spins();
  for (int r = 0; r < n; ++r) {
    for (int s = r + 1; s < n; ++s) {
      const double coupling =
          kTwoPi * std::abs(system.j_couplings()(r, s) - system.d_couplings()(r, s));
      const double gap = std::abs(system.offsets()[r] - system.offsets()[s]);
      if (gap < ratio_threshold * coupling) {
        report.violations.push_back({r, s, gap, coupling});
      }
    }
  }
  report.valid = report.violations.empty();
  return report;
}

namespace {

RMatrix coupling_table(const nlohmann::json& doc, const char* key, int n) {
  RMatrix m = RMatrix::Zero(n, n);
  if (!doc.contains(key)) return m;
  const auto& rows = doc.at(key);
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
    throw std::invalid_argument(std::string(key) + " must have " + std::to_string(n) + " rows");
  }
  for (int r = 0; r < n; ++r) {
    if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != n) {
      throw std::invalid_argument(std::string(key) + " row " + std::to_string(r) + " must have " +
                                  std::to_string(n) + " entries");
    }
    for (int s = 0; s < n; ++s) m(r, s) = rows[r][s].get<double>();
  }
  return m;
}

}  // namespace

SpinSystem parse_spin_system(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("spin system: ") + e.what());
  }
  try {
    const int n = doc.at("spins").get<int>();
    std::vector<Species> species;
    for (const auto& s : doc.at("species")) {
      Species sp;
      sp.label = s.at("label").get<std::string>();
      sp.max_amplitude = kTwoPi * s.at("max_amplitude_hz").get<double>();
      sp.spins = s.at("spins").get<std::vector<int>>();
      species.push_back(std::move(sp));
    }
    std::vector<double> offsets = doc.at("offsets_hz").get<std::vector<double>>();
    for (double& w : offsets) w *= kTwoPi;
    return SpinSystem(n, std::move(species), std::move(offsets), coupling_table(doc, "J_hz", n),
                      coupling_table(doc, "D_hz", n), doc.value("weak_coupling", false));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("spin system: ") + e.what());
  }
}

SpinSystem load_spin_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spin system file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spin_system(buf.str());
}

std::string dump_spin_system(const SpinSystem& system) {
  nlohmann::json doc;
  const int n = system.n_spins();
  doc["spins"] = n;
  doc["species"] = nlohmann::json::array();
  for (const auto& sp : system.species()) {
    doc["species"].push_back(
        {{"label", sp.label}, {"max_amplitude_hz", sp.max_amplitude / kTwoPi}, {"spins", sp.spins}});
  }
  std::vector<double> offsets_hz;
  for (double w : system.offsets()) offsets_hz.push_back(w / kTwoPi);
  doc["offsets_hz"] = offsets_hz;
  auto table = [n](const RMatrix& m) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) rows[r][s] = m(r, s);
    return rows;
  };
  doc["J_hz"] = table(system.j_couplings());
  doc["D_hz"] = table(system.d_couplings());
  doc["weak_coupling"] = system.weak_coupling();
  return doc.dump(2);
}

}  // namespace bb
