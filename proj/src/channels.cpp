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

#include "bangbang/channels.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bangbang/matrix_io.hpp"

namespace bb {

namespace {

constexpr double kStateTol = 1e-12;

void check_dims(Eigen::Index a, Eigen::Index b) {
  if (a != b) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

// Tr(A B) for Hermitian A, B without forming the product.
Complex trace_product(const CMatrix& a, const CMatrix& b) { return (a.transpose().cwiseProduct(b)).sum(); }

}  // namespace

DensityMatrix::DensityMatrix(CMatrix m, StateKind kind) : m_(std::move(m)), kind_(kind) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("density matrix must be square");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kStateTol * scale) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  const double tr = m_.trace().real();
  const double want = kind_ == StateKind::UnitTrace ? 1.0 : 0.0;
  if (std::abs(tr - want) > kStateTol * std::max(1.0, scale * static_cast<double>(m_.rows()))) {
    throw std::invalid_argument(kind_ == StateKind::UnitTrace ? "density matrix trace is not 1"
                                                              : "deviation matrix is not traceless");
  }
}

DensityMatrix DensityMatrix::deviation() const {
  const Eigen::Index n = dim();
  CMatrix dev = m_;
  const Complex shift = m_.trace() / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) dev(i, i) -= shift;
  return DensityMatrix(std::move(dev), StateKind::TracelessDeviation);
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  CMatrix rho = psi * psi.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho), StateKind::UnitTrace);
}

std::string format_density(const DensityMatrix& rho) {
  return format_matrix(rho.matrix(), rho.kind() == StateKind::UnitTrace ? "density unit_trace"
                                                                        : "density traceless_deviation");
}

DensityMatrix parse_density(std::string_view text) {
  const std::string comment = matrix_comment(text);
  const StateKind kind = comment.find("traceless_deviation") != std::string::npos
                             ? StateKind::TracelessDeviation
                             : StateKind::UnitTrace;
  return DensityMatrix(parse_matrix(text), kind);
}

DensityMatrix load_density(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open density file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_density(buf.str());
}

double unitary_fidelity(const CMatrix& target, const CMatrix& u) {
  check_dims(target.rows(), u.rows());
  check_dims(target.cols(), u.cols());
  // Tr(A^dagger B) = sum conj(A_ij) B_ij
  const Complex overlap = target.conjugate().cwiseProduct(u).sum() / static_cast<double>(u.rows());
  return std::norm(overlap);
}

double state_fidelity(const DensityMatrix& target, const DensityMatrix& rho) {
  check_dims(target.dim(), rho.dim());
  if (target.kind() != rho.kind()) throw std::invalid_argument("state fidelity needs states of one kind");
  const double nt = trace_product(target.matrix(), target.matrix()).real();
  const double nr = trace_product(rho.matrix(), rho.matrix()).real();
  if (!(nt > 0.0) || !(nr > 0.0)) throw std::domain_error("state fidelity of a zero-norm matrix");
  return std::abs(trace_product(target.matrix(), rho.matrix())) / std::sqrt(nt * nr);
}

DensityMatrix twirl(const DensityMatrix& rho) {
  CMatrix diag = CMatrix::Zero(rho.dim(), rho.dim());
  diag.diagonal() = rho.matrix().diagonal().real().cast<Complex>();
  return DensityMatrix(std::move(diag), rho.kind());
}

DensityMatrix evolve(const DensityMatrix& rho, const CMatrix& u) {
  check_dims(rho.dim(), u.rows());
  CMatrix out = u * rho.matrix() * u.adjoint();
  // Exact Hermiticity; conjugation only introduces rounding asymmetry.
  out = 0.5 * (out + out.adjoint());
  return DensityMatrix(std::move(out), rho.kind());
}

DensityMatrix bb_evolve_with_twirls(const PropagatorCache& cache, const BBSequence& seq,
                                    const DensityMatrix& rho_in, const EvalOptions& options) {
  check_dims(rho_in.dim(), cache.dim());
  DensityMatrix rho = rho_in;
  int start = 0;
  for (int boundary : seq.twirl_boundaries()) {
    if (boundary > start) rho = evolve(rho, bb_propagator_range(cache, seq, start, boundary, options));
    rho = twirl(rho);
    start = boundary;
  }
  if (seq.n_segments() > start || seq.twirl_boundaries().empty()) {
    rho = evolve(rho, bb_propagator_range(cache, seq, start, seq.n_segments(), options));
  }
  return rho;
}

namespace {

FidelityReport summarize(std::vector<double> scales, std::vector<double> fidelities) {
  FidelityReport report;
  report.mean = fidelities.empty()
                    ? 0.0
                    : std::accumulate(fidelities.begin(), fidelities.end(), 0.0) / fidelities.size();
  report.scales = std::move(scales);
  report.fidelities = std::move(fidelities);
  return report;
}

void check_scales(const std::vector<double>& scales) {
  if (scales.empty()) throw std::invalid_argument("RF scale grid is empty");
  for (double s : scales) {
    if (!(s > 0.0)) throw std::invalid_argument("RF scales must be positive");
  }
}

}  // namespace

FidelityReport robust_unitary_fidelity(const SpinSystem& system, const BBSequence& seq,
                                       const CMatrix& target, const std::vector<double>& scales) {
  check_scales(scales);
  std::vector<double> f;
  for (double s : scales) {
    const auto cache = build_cache(system.with_rf_scale(s), seq.dt());
    f.push_back(unitary_fidelity(target, bb_propagator(cache, seq).matrix()));
  }
  return summarize(scales, std::move(f));
}

FidelityReport robust_state_fidelity(const SpinSystem& system, const BBSequence& seq,
                                     const DensityMatrix& rho_in, const DensityMatrix& target,
                                     const std::vector<double>& scales) {
  check_scales(scales);
  std::vector<double> f;
  for (double s : scales) {
    const auto cache = build_cache(system.with_rf_scale(s), seq.dt());
    f.push_back(state_fidelity(target, bb_evolve_with_twirls(cache, seq, rho_in)));
  }
  return summarize(scales, std::move(f));
}

}  // namespace bb
