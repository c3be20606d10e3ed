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
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qcat/core.hpp"
#include "qcat/linear_operator.hpp"

namespace qcat {

inline constexpr std::uint64_t kLanczosSeed = 0x5EED;
/// Default eigenvalue residual tolerance in Hartree.
inline constexpr double kDefaultEigenTol = 1e-8;

struct SpectralResult {
  RVec eigenvalues;      // ascending
  CMat eigenvectors;     // one column per eigenvalue
  RVec residual_norms;   // ||H v - lambda v||
  int iterations = 0;    // total operator applications
  int ground_degeneracy = 1;
};

struct LanczosOptions {
  int max_basis = 300;       // Krylov vectors kept before an explicit restart
  int max_restarts = 50;
  std::uint64_t seed = kLanczosSeed;
  bool check_hermitian = true;
  /// Eigenvalues closer than this to the lowest one count as degenerate.
  /// Zero selects max(1e-6, 100 * tol).
  double degeneracy_tol = 0.0;
  std::optional<CVec> start;  // warm start; random when absent
};

namespace detail {

inline CVec random_vector(std::int64_t dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CVec v(dim);
  for (std::int64_t i = 0; i < dim; ++i) {
    const double re = u(rng);
    const double im = u(rng);
    v[i] = cplx{re, im};
  }
  return v;
}

/// Two passes of classical Gram-Schmidt against the columns of `basis`
/// (first `cols` columns) and the locked vectors.
inline void orthogonalize(CVec& w, const CMat& basis, int cols, const std::vector<CVec>& locked) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& l : locked) w -= l * l.dot(w);
    if (cols > 0) {
      const CVec c = basis.leftCols(cols).adjoint() * w;
      w.noalias() -= basis.leftCols(cols) * c;
    }
  }
}

inline void check_hermitian(const LinearOperator& h, std::mt19937_64& rng) {
  const CVec u = random_vector(h.dim, rng);
  const CVec v = random_vector(h.dim, rng);
  const cplx uhv = u.dot(h * v);
  const cplx vhu = v.dot(h * u);
  const double scale = std::abs(uhv) + std::abs(vhu) + 1.0;
  if (std::abs(uhv - std::conj(vhu)) > 1e-9 * scale) {
    throw InvalidInput("ground_states: operator failed the Hermiticity spot check");
  }
}

struct RitzPair {
  double value;
  CVec vector;
  double residual;
};

/// One Lanczos run with full reorthogonalization in the orthogonal
/// complement of `locked`. Returns Ritz pairs ordered by value together
/// with a flag telling whether the lowest `want` of them converged.
inline std::vector<RitzPair> lanczos_run(const LinearOperator& h, int want, double tol,
                                         const std::vector<CVec>& locked, CVec start,
                                         int max_basis, std::mt19937_64& rng, int& applications,
                                         bool& converged) {
  const std::int64_t dim = h.dim;
  const std::int64_t free_dim = dim - static_cast<std::int64_t>(locked.size());
  const int m_max = static_cast<int>(std::min<std::int64_t>(max_basis, free_dim));
  CMat basis(dim, m_max);
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples basis j and j+1

  orthogonalize(start, basis, 0, locked);
  double nrm = start.norm();
  if (nrm < 1e-12) {
    start = random_vector(dim, rng);
    orthogonalize(start, basis, 0, locked);
    nrm = start.norm();
  }
  basis.col(0) = start / nrm;

  converged = false;
  Eigen::SelfAdjointEigenSolver<RMat> tri;
  int m = 0;
  double last_beta = 0.0;
  for (int j = 0; j < m_max; ++j) {
    CVec w = h * basis.col(j);
    ++applications;
    const double a = basis.col(j).dot(w).real();
    alpha.push_back(a);
    orthogonalize(w, basis, j + 1, locked);
    const double b = w.norm();
    m = j + 1;
    last_beta = b;

    const double scale = std::max(1.0, std::abs(a));
    const bool breakdown = b < 1e-12 * scale;
    const bool full = (m == m_max);

    if (breakdown && !full) {
      // Invariant subspace found; continue in its complement.
      CVec fresh = random_vector(dim, rng);
      orthogonalize(fresh, basis, m, locked);
      const double fn = fresh.norm();
      if (fn < 1e-10) {
        last_beta = 0.0;
        break;
      }
      beta.push_back(0.0);
      basis.col(j + 1) = fresh / fn;
      continue;
    }
    if (!full) {
      beta.push_back(b);
      basis.col(j + 1) = w / b;
    }
    if (m >= want && (m % 4 == 0 || full || breakdown)) {
      RMat t = RMat::Zero(m, m);
      for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
      for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
      tri.compute(t);
      bool ok = true;
      for (int i = 0; i < want; ++i) {
        if (b * std::abs(tri.eigenvectors()(m - 1, i)) > 0.1 * tol) ok = false;
      }
      if (ok || full) {
        converged = ok;
        break;
      }
    }
  }

  RMat t = RMat::Zero(m, m);
  for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
  for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
  tri.compute(t);
  if (last_beta == 0.0 || m == free_dim) converged = true;

  std::vector<RitzPair> out;
  const int keep = std::min(m, std::max(want, 1));
  for (int i = 0; i < keep; ++i) {
    CVec v = basis.leftCols(m) * tri.eigenvectors().col(i).cast<cplx>();
    v.normalize();
    const CVec hv = h * v;
    ++applications;
    const double lam = tri.eigenvalues()[i];
    out.push_back({lam, v, (hv - lam * v).norm()});
  }
  return out;
}

}  // namespace detail

/**
 * Lowest `k` eigenpairs of a Hermitian operator.
 *
 * Lanczos with full reorthogonalization, a start vector drawn from a fixed
 * seed, explicit restarts and locking of converged pairs. After the k pairs
 * are found, further deflated runs look for eigenvalues the Krylov space
 * missed, which is how degenerate copies of the ground level are counted.
 * Within a degenerate subspace the returned vector is deterministic for the
 * seed but otherwise arbitrary.
 */
inline SpectralResult ground_states(const LinearOperator& h, int k, double tol = kDefaultEigenTol,
                                    const LanczosOptions& opt = {}) {
  require(k >= 1, "ground_states: k must be at least 1");
  require(tol > 0.0, "ground_states: tolerance must be positive");
  require(h.dim >= 1, "ground_states: empty operator");
  k = static_cast<int>(std::min<std::int64_t>(k, h.dim));
  std::mt19937_64 rng(opt.seed);
  if (opt.check_hermitian) detail::check_hermitian(h, rng);
  const double deg_tol = opt.degeneracy_tol > 0.0 ? opt.degeneracy_tol : std::max(1e-6, 100.0 * tol);

  std::vector<detail::RitzPair> found;
  std::vector<CVec> locked;
  int applications = 0;
  double best_residual = std::numeric_limits<double>::infinity();

  auto lock = [&](detail::RitzPair p) {
    locked.push_back(p.vector);
    found.push_back(std::move(p));
  };

  CVec start = opt.start ? *opt.start : detail::random_vector(h.dim, rng);
  int restarts = 0;
  while (static_cast<int>(found.size()) < k) {
    const int want = k - static_cast<int>(found.size());
    bool converged = false;
    auto pairs = detail::lanczos_run(h, want, tol, locked, start, opt.max_basis, rng,
                                     applications, converged);
    int newly = 0;
    for (auto& p : pairs) {
      if (newly >= want) break;
      if (p.residual <= tol) {
        lock(std::move(p));
        ++newly;
      } else {
        break;
      }
    }
    if (newly < want) {
      if (!pairs.empty()) best_residual = std::min(best_residual, pairs.front().residual);
      if (++restarts > opt.max_restarts) {
        throw NumericalError("ground_states: no convergence after " + std::to_string(restarts) +
                             " restarts; best residual " + std::to_string(best_residual));
      }
      const auto first_unlocked = static_cast<std::size_t>(newly);
      start = first_unlocked < pairs.size() ? pairs[first_unlocked].vector
                                            : detail::random_vector(h.dim, rng);
    } else {
      start = detail::random_vector(h.dim, rng);
    }
  }

  // Probe the deflated complement for levels below the current top or
  // degenerate with the ground level.
  auto sort_found = [&] {
    std::stable_sort(found.begin(), found.end(),
                     [](const auto& a, const auto& b) { return a.value < b.value; });
  };
  sort_found();
  while (static_cast<std::int64_t>(locked.size()) < h.dim) {
    bool converged = false;
    std::vector<detail::RitzPair> probe;
    CVec s = detail::random_vector(h.dim, rng);
    for (int attempt = 0; attempt <= opt.max_restarts; ++attempt) {
      probe = detail::lanczos_run(h, 1, tol, locked, s, opt.max_basis, rng, applications, converged);
      if (probe.front().residual <= tol) break;
      s = probe.front().vector;
    }
    if (probe.front().residual > tol) {
      throw NumericalError("ground_states: degeneracy probe did not converge; residual " +
                           std::to_string(probe.front().residual));
    }
    const double top = found[static_cast<std::size_t>(k) - 1].value;
    const double ground = found.front().value;
    if (probe.front().value < top - deg_tol || probe.front().value < ground + deg_tol) {
      lock(std::move(probe.front()));
      sort_found();
    } else {
      break;
    }
  }

  SpectralResult r;
  const double ground = found.front().value;
  r.ground_degeneracy = static_cast<int>(std::count_if(
      found.begin(), found.end(), [&](const auto& p) { return p.value < ground + deg_tol; }));
  r.eigenvalues.resize(k);
  r.residual_norms.resize(k);
  r.eigenvectors.resize(h.dim, k);
  for (int i = 0; i < k; ++i) {
    r.eigenvalues[i] = found[i].value;
    r.residual_norms[i] = found[i].residual;
    r.eigenvectors.col(i) = found[i].vector;
  }
  r.iterations = applications;
  return r;
}

inline SpectralResult ground_states(const SpMat& h, int k, double tol = kDefaultEigenTol,
                                    const LanczosOptions& opt = {}) {
  check_dim_cap(h.rows(), default_caps(), "ground_states");
  return ground_states(LinearOperator::from_sparse(h), k, tol, opt);
}

}  // namespace qcat
