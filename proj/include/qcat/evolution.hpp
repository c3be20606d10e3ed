// Copyright 2026 The qcat Authors
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

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qcat/core.hpp"
#include "qcat/linear_operator.hpp"
#include "qcat/pauli.hpp"
#include "qcat/state.hpp"

namespace qcat {

struct KrylovOptions {
  int max_krylov = 30;
  /// Bound on the a-posteriori error estimate of each substep.
  double substep_tol = 1e-13;
};

/**
 * exp(-i H t) psi by Lanczos projection with adaptive substeps.
 *
 * Each substep builds an orthonormal Krylov basis from the current vector,
 * exponentiates the projected tridiagonal matrix through its eigenbasis and
 * takes the largest step whose error estimate beta_m |[exp(-i T tau) e1]_m|
 * stays below the substep tolerance.
 */
inline StateVector evolve_exact(const LinearOperator& h, const StateVector& psi, double t,
                                const KrylovOptions& opt = {}) {
  if (psi.dim() != h.dim) {
    throw InvalidInput("evolve_exact: state dimension " + std::to_string(psi.dim()) +
                       " does not match operator dimension " + std::to_string(h.dim));
  }
  CVec v = psi.amplitudes;
  if (t == 0.0) return psi;
  const double sign = t < 0.0 ? -1.0 : 1.0;
  double remaining = std::abs(t);
  double tau = remaining;
  const int m_cap = static_cast<int>(std::min<std::int64_t>(opt.max_krylov, h.dim));

  while (remaining > 0.0) {
    const double beta0 = v.norm();
    if (beta0 == 0.0) break;
    CMat basis(h.dim, m_cap);
    basis.col(0) = v / beta0;
    std::vector<double> alpha;
    std::vector<double> beta;
    double tail = 0.0;  // coupling to the first vector outside the basis
    int m = 0;
    for (int j = 0; j < m_cap; ++j) {
      CVec w = h * basis.col(j);
      const double a = basis.col(j).dot(w).real();
      alpha.push_back(a);
      for (int pass = 0; pass < 2; ++pass) {
        const CVec c = basis.leftCols(j + 1).adjoint() * w;
        w.noalias() -= basis.leftCols(j + 1) * c;
      }
      const double b = w.norm();
      m = j + 1;
      if (b < 1e-13 * std::max(1.0, std::abs(a))) {
        tail = 0.0;
        break;
      }
      tail = b;
      if (j + 1 < m_cap) {
        beta.push_back(b);
        basis.col(j + 1) = w / b;
      }
    }
    RMat t_mat = RMat::Zero(m, m);
    for (int i = 0; i < m; ++i) t_mat(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) t_mat(i, i + 1) = t_mat(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<RMat> es(t_mat);
    const RMat& q = es.eigenvectors();
    const RVec& theta = es.eigenvalues();

    auto propagate_small = [&](double step) {
      CVec c(m);
      for (int i = 0; i < m; ++i) c[i] = std::exp(cplx{0.0, -sign * theta[i] * step}) * q(0, i);
      return CVec(q.cast<cplx>() * c);
    };

    tau = std::min(tau * 2.0, remaining);
    CVec small = propagate_small(tau);
    while (tail * std::abs(small[m - 1]) > opt.substep_tol && tau > 1e-300) {
      tau *= 0.5;
      small = propagate_small(tau);
    }
    v = beta0 * (basis.leftCols(m) * small);
    remaining -= tau;
    if (remaining < 1e-15 * std::abs(t)) remaining = 0.0;
  }
  return StateVector(std::move(v), psi.basis);
}

inline StateVector evolve_exact(const SpMat& h, const StateVector& psi, double t,
                                const KrylovOptions& opt = {}, const Caps& caps = default_caps()) {
  check_dim_cap(h.rows(), caps, "evolve_exact");
  return evolve_exact(LinearOperator::from_sparse(h), psi, t, opt);
}

namespace detail {

/// psi <- exp(-i c P theta) psi for a Hermitian Pauli string P.
inline void apply_pauli_rotation(const PauliString& s, double angle, CVec& psi) {
  const double cs = std::cos(angle);
  const double sn = std::sin(angle);
  const std::uint64_t x = s.x_mask();
  const std::uint64_t z = s.z_mask();
  const cplx yphase = PauliPhase{s.y_count() % 4}.value();
  const std::int64_t dim = psi.size();
  if (x == 0) {
    for (std::int64_t k = 0; k < dim; ++k) {
      const double sign = (std::popcount(static_cast<std::uint64_t>(k) & z) & 1) ? -1.0 : 1.0;
      psi[k] *= cplx{cs, -sn * sign};
    }
    return;
  }
  // Pair k with k^x; visit each pair once through its smaller index.
  for (std::int64_t k = 0; k < dim; ++k) {
    const auto ku = static_cast<std::uint64_t>(k);
    const std::uint64_t kp = ku ^ x;
    if (kp < ku) continue;
    // P|k> = f(k) |k^x>, f(k) = i^{|x&z|} (-1)^{|k&z|}
    const cplx fk = (std::popcount(ku & z) & 1) ? -yphase : yphase;
    const cplx fkp = (std::popcount(kp & z) & 1) ? -yphase : yphase;
    const cplx a = psi[k];
    const cplx b = psi[static_cast<std::int64_t>(kp)];
    psi[k] = cs * a - kI * sn * fkp * b;
    psi[static_cast<std::int64_t>(kp)] = cs * b - kI * sn * fk * a;
  }
}

}  // namespace detail

/**
 * Product-formula evolution under a Hermitian Pauli operator.
 *
 * Terms are exponentiated one at a time in lexicographic string order.
 * Order 1 applies exp(-i c_j P_j dt) for j = 1..T; order 2 applies the
 * symmetric product of half steps (forward then reverse).
 */
inline StateVector evolve_trotter(const PauliOperator& h, const StateVector& psi, double dt,
                                  int steps, int order = 2) {
  require(order == 1 || order == 2, "evolve_trotter: order must be 1 or 2");
  require(dt > 0.0, "evolve_trotter: dt must be positive");
  require(steps >= 0, "evolve_trotter: negative step count");
  detail::check_matrix_cap(h.n_qubits(), Caps{62, std::int64_t{1} << 62});
  const std::int64_t dim = std::int64_t{1} << h.n_qubits();
  if (psi.dim() != dim) {
    throw InvalidInput("evolve_trotter: state dimension " + std::to_string(psi.dim()) +
                       " does not match 2^" + std::to_string(h.n_qubits()));
  }
  if (!h.is_hermitian()) throw InvalidInput("evolve_trotter: operator has complex coefficients");
  std::vector<std::pair<const PauliString*, double>> terms;
  terms.reserve(h.n_terms());
  for (const auto& [s, c] : h.terms()) terms.emplace_back(&s, c.real());

  CVec v = psi.amplitudes;
  for (int step = 0; step < steps; ++step) {
    if (order == 1) {
      for (const auto& [s, c] : terms) detail::apply_pauli_rotation(*s, c * dt, v);
    } else {
      for (const auto& [s, c] : terms) detail::apply_pauli_rotation(*s, 0.5 * c * dt, v);
      for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        detail::apply_pauli_rotation(*it->first, 0.5 * it->second * dt, v);
      }
    }
  }
  return StateVector(std::move(v), psi.basis);
}

}  // namespace qcat
