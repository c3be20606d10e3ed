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
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qcat/core.hpp"
#include "qcat/eigensolver.hpp"
#include "qcat/fcidump.hpp"
#include "qcat/fermion.hpp"
#include "qcat/pauli.hpp"
#include "qcat/rdm.hpp"
#include "qcat/state.hpp"

namespace qcat {

/**
 * Electronic Hamiltonian over spin orbitals:
 *
 *   H = core + sum_pq h1(p,q) a+_p a_q + 1/2 sum_pqrs h2(p,q,r,s) a+_p a+_q a_r a_s
 *
 * with h2(p,q,r,s) = <pq|sr> in physicist notation. Spatial orbital i owns
 * spin orbitals 2i (alpha) and 2i+1 (beta).
 */
struct MolecularHamiltonian {
  int n_spin_orbitals = 0;
  double core_energy = 0.0;
  RMat h1;
  std::map<std::array<int, 4>, double> h2;
  int n_electrons = 0;
  int ms2 = 0;

  explicit MolecularHamiltonian(int n = 0)
      : n_spin_orbitals(n), h1(RMat::Zero(n, n)) {}

  double two_body(int p, int q, int r, int s) const {
    auto it = h2.find({p, q, r, s});
    return it == h2.end() ? 0.0 : it->second;
  }

  void add_two_body(int p, int q, int r, int s, double v) {
    if (v == 0.0 || p == q || r == s) return;
    h2[{p, q, r, s}] += v;
  }

  FermionOperator to_fermion_operator() const {
    FermionOperator f = FermionOperator::constant(core_energy);
    for (int p = 0; p < n_spin_orbitals; ++p) {
      for (int q = 0; q < n_spin_orbitals; ++q) {
        if (h1(p, q) != 0.0) f.add({cre(p), ann(q)}, h1(p, q));
      }
    }
    for (const auto& [k, v] : h2) f.add({cre(k[0]), cre(k[1]), ann(k[2]), ann(k[3])}, 0.5 * v);
    return f;
  }

  /// <psi|H|psi> assembled from density matrices:
  /// core + sum h1(p,q) rho1(q,p) + 1/2 sum h2(p,q,r,s) rho2(q,p,r,s).
  double energy_from_rdms(const CMat& rho1, const Rdm2& rho2) const {
    cplx e = core_energy;
    for (int p = 0; p < n_spin_orbitals; ++p) {
      for (int q = 0; q < n_spin_orbitals; ++q) e += h1(p, q) * rho1(q, p);
    }
    for (const auto& [k, v] : h2) e += 0.5 * v * rho2(k[1], k[0], k[2], k[3]);
    return e.real();
  }
};

/// h1 symmetry tolerance used by build_molecular_hamiltonian.
inline constexpr double kHermitianTol = 1e-12;

/**
 * Spin-orbital Hamiltonian from spatial chemist-order integrals.
 *
 * Each listed (pq|rs) is expanded over the eight permutations valid for real
 * orbitals, then h2(P,Q,R,S) = (ps|qr) for spins with sigma_P = sigma_S and
 * sigma_Q = sigma_R.
 */
inline MolecularHamiltonian build_molecular_hamiltonian(const IntegralFile& f) {
  const int n = f.norb;
  require(n > 0, "build_molecular_hamiltonian: no orbitals");
  RMat hs = RMat::Zero(n, n);
  std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
  for (const auto& [k, v] : f.one_body) {
    const int p = k[0], q = k[1];
    if (p < 0 || q < 0 || p >= n || q >= n) throw InvalidInput("one-body index out of range");
    hs(p, q) = v;
    seen[p][q] = true;
  }
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < p; ++q) {
      if (seen[p][q] && seen[q][p]) {
        if (std::abs(hs(p, q) - hs(q, p)) > kHermitianTol) {
          throw InvalidInput("one-body integrals not Hermitian: h(" + std::to_string(p + 1) + "," +
                             std::to_string(q + 1) + ")=" + format_double(hs(p, q)) + " but h(" +
                             std::to_string(q + 1) + "," + std::to_string(p + 1) + ")=" +
                             format_double(hs(q, p)));
        }
      } else if (seen[p][q]) {
        hs(q, p) = hs(p, q);
      } else if (seen[q][p]) {
        hs(p, q) = hs(q, p);
      }
    }
  }

  std::map<std::array<int, 4>, double> chem;
  for (const auto& [k, v] : f.two_body) {
    const int i = k[0], j = k[1], a = k[2], b = k[3];
    for (const auto& perm : {std::array<int, 4>{i, j, a, b}, {j, i, a, b}, {i, j, b, a},
                             {j, i, b, a}, {a, b, i, j}, {b, a, i, j}, {a, b, j, i},
                             {b, a, j, i}}) {
      auto [it, inserted] = chem.emplace(perm, v);
      if (!inserted && std::abs(it->second - v) > 1e-10) {
        throw InvalidInput("two-body integrals violate permutational symmetry at (" +
                           std::to_string(i + 1) + std::to_string(j + 1) + "|" +
                           std::to_string(a + 1) + std::to_string(b + 1) + ")");
      }
    }
  }

  MolecularHamiltonian h(2 * n);
  h.core_energy = f.core_energy;
  h.n_electrons = f.nelec;
  h.ms2 = f.ms2;
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      for (int s = 0; s < 2; ++s) h.h1(2 * p + s, 2 * q + s) = hs(p, q);
    }
  }
  // chem (ps|qr) feeds h2(P,Q,R,S) with spatial P=p, S=s, Q=q, R=r.
  for (const auto& [k, v] : chem) {
    const int p = k[0], s = k[1], q = k[2], r = k[3];
    for (int sig1 = 0; sig1 < 2; ++sig1) {
      for (int sig2 = 0; sig2 < 2; ++sig2) {
        h.add_two_body(2 * p + sig1, 2 * q + sig2, 2 * r + sig2, 2 * s + sig1, v);
      }
    }
  }
  return h;
}

/// Hubbard chain with hopping -t between neighbouring sites of equal spin and
/// on-site repulsion U, written as spatial integrals.
inline IntegralFile hubbard_chain_integrals(int sites, double t, double u, int electrons,
                                            bool periodic = false) {
  IntegralFile f;
  f.norb = sites;
  f.nelec = electrons;
  for (int i = 0; i + 1 < sites; ++i) f.one_body[{i + 1, i}] = -t;
  if (periodic && sites > 2) f.one_body[{sites - 1, 0}] = -t;
  for (int i = 0; i < sites; ++i) f.two_body[{i, i, i, i}] = u;
  return f;
}

// ---------------------------------------------------------------------------
// Active spaces

struct ActiveSpace {
  std::vector<int> active;           // spatial orbital indices, ascending
  std::vector<int> frozen_occupied;  // doubly occupied, folded into the core
  int n_active_electrons = 0;
  double frozen_core_shift = 0.0;    // filled in by freeze_reduce

  int n_spin_orbitals() const { return 2 * static_cast<int>(active.size()); }
};

/**
 * Orbitals with |e_i - fermi| <= window. Orbitals strictly below the Fermi
 * energy count as doubly occupied; those outside the window below it are
 * frozen, those above it are discarded.
 */
inline ActiveSpace select_active_space(std::span<const double> orbital_energies, double fermi_energy,
                                       double window) {
  require(window > 0.0, "select_active_space: window must be positive");
  ActiveSpace s;
  for (std::size_t i = 0; i < orbital_energies.size(); ++i) {
    const double e = orbital_energies[i];
    const bool occupied = e < fermi_energy;
    if (std::abs(e - fermi_energy) <= window) {
      s.active.push_back(static_cast<int>(i));
      if (occupied) s.n_active_electrons += 2;
    } else if (occupied) {
      s.frozen_occupied.push_back(static_cast<int>(i));
    }
  }
  if (s.active.empty()) {
    throw InvalidInput("select_active_space: no orbital within " + format_double(window) +
                       " Hartree of the Fermi energy " + format_double(fermi_energy));
  }
  return s;
}

inline void validate_active_space(const ActiveSpace& s, int n_spatial) {
  std::set<int> all;
  for (int i : s.active) {
    require(i >= 0 && i < n_spatial, "active orbital index out of range");
    require(all.insert(i).second, "orbital " + std::to_string(i) + " listed twice");
  }
  for (int i : s.frozen_occupied) {
    require(i >= 0 && i < n_spatial, "frozen orbital index out of range");
    require(all.insert(i).second, "orbital " + std::to_string(i) + " listed twice");
  }
  require(s.n_active_electrons >= 0 &&
              s.n_active_electrons <= 2 * static_cast<int>(s.active.size()),
          "active electron count exceeds twice the active orbital count");
}

/**
 * Restricts H to the active orbitals with the frozen orbitals doubly
 * occupied. With F the frozen spin orbitals:
 *
 *   core'   = core + sum_{i in F} h1(i,i) + 1/2 sum_{i,j in F} (h2(i,j,j,i) - h2(i,j,i,j))
 *   h1'(a,b) = h1(a,b) + 1/2 sum_{i in F} (h2(i,a,b,i) - h2(i,a,i,b) - h2(a,i,b,i) + h2(a,i,i,b))
 *
 * The result equals P H P on the sector where F is filled and discarded
 * orbitals are empty.
 */
inline MolecularHamiltonian freeze_reduce(const MolecularHamiltonian& h, ActiveSpace& space) {
  require(h.n_spin_orbitals % 2 == 0, "freeze_reduce: odd spin-orbital count");
  const int n_spatial = h.n_spin_orbitals / 2;
  validate_active_space(space, n_spatial);
  const int frozen_electrons = 2 * static_cast<int>(space.frozen_occupied.size());
  if (space.n_active_electrons + frozen_electrons != h.n_electrons) {
    throw InvalidInput("freeze_reduce: " + std::to_string(space.n_active_electrons) +
                       " active + " + std::to_string(frozen_electrons) + " frozen electrons != " +
                       std::to_string(h.n_electrons) + " in the Hamiltonian");
  }
  std::vector<int> frozen;
  for (int i : space.frozen_occupied) {
    frozen.push_back(2 * i);
    frozen.push_back(2 * i + 1);
  }
  std::vector<int> act;
  for (int i : space.active) {
    act.push_back(2 * i);
    act.push_back(2 * i + 1);
  }

  double shift = 0.0;
  for (int i : frozen) shift += h.h1(i, i);
  for (int i : frozen) {
    for (int j : frozen) shift += 0.5 * (h.two_body(i, j, j, i) - h.two_body(i, j, i, j));
  }

  const int m = static_cast<int>(act.size());
  MolecularHamiltonian out(m);
  out.core_energy = h.core_energy + shift;
  out.n_electrons = space.n_active_electrons;
  out.ms2 = h.ms2;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const int pa = act[a], pb = act[b];
      double v = h.h1(pa, pb);
      for (int i : frozen) {
        v += 0.5 * (h.two_body(i, pa, pb, i) - h.two_body(i, pa, i, pb) -
                    h.two_body(pa, i, pb, i) + h.two_body(pa, i, i, pb));
      }
      out.h1(a, b) = v;
    }
  }
  std::map<int, int> pos;
  for (int a = 0; a < m; ++a) pos[act[a]] = a;
  for (const auto& [k, v] : h.h2) {
    auto i0 = pos.find(k[0]), i1 = pos.find(k[1]), i2 = pos.find(k[2]), i3 = pos.find(k[3]);
    if (i0 == pos.end() || i1 == pos.end() || i2 == pos.end() || i3 == pos.end()) continue;
    out.add_two_body(i0->second, i1->second, i2->second, i3->second, v);
  }
  space.frozen_core_shift = shift;
  return out;
}

// ---------------------------------------------------------------------------
// Basis states

/// Qubit basis indices of all determinants with the given particle number
/// (and, when ms2 is set, N_alpha - N_beta = ms2) under the encoding.
inline std::vector<std::uint64_t> number_sector_basis(int n_modes, int n_electrons, Encoding e,
                                                      std::optional<int> ms2 = std::nullopt) {
  require(n_modes <= 30, "number_sector_basis: more than 30 modes");
  std::vector<std::uint64_t> out;
  const std::uint64_t alpha_mask = 0x5555555555555555ULL;
  for (std::uint64_t occ = 0; occ < (std::uint64_t{1} << n_modes); ++occ) {
    if (std::popcount(occ) != n_electrons) continue;
    if (ms2) {
      const int na = std::popcount(occ & alpha_mask);
      const int nb = n_electrons - na;
      if (na - nb != *ms2) continue;
    }
    out.push_back(encode_occupation(occ, e, n_modes));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Occupation bitstring "1100": character k is the occupation of mode k.
inline std::uint64_t parse_occupation(const std::string& bits) {
  require(!bits.empty() && bits.size() <= 63, "occupation bitstring length out of range");
  std::uint64_t occ = 0;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] == '1') {
      occ |= std::uint64_t{1} << k;
    } else if (bits[k] != '0') {
      throw InvalidInput("occupation bitstring may contain only 0 and 1: '" + bits + "'");
    }
  }
  return occ;
}

/// Normalized superposition of determinants in the encoding's qubit basis.
inline StateVector prepare_reference_state(
    const std::vector<std::pair<cplx, std::string>>& determinants,
    Encoding e = Encoding::kJordanWigner) {
  require(!determinants.empty(), "prepare_reference_state: no determinants");
  const std::size_t n = determinants.front().second.size();
  require(n <= 30, "prepare_reference_state: more than 30 modes");
  CVec amps = CVec::Zero(std::int64_t{1} << n);
  for (const auto& [c, bits] : determinants) {
    require(bits.size() == n, "prepare_reference_state: bitstrings differ in length");
    const std::uint64_t occ = parse_occupation(bits);
    amps[static_cast<std::int64_t>(encode_occupation(occ, e, static_cast<int>(n)))] += c;
  }
  const double norm = amps.norm();
  if (norm < 1e-14) throw InvalidInput("prepare_reference_state: zero-norm superposition");
  return StateVector(amps / norm, BasisTag::kDeterminant);
}

inline StateVector prepare_reference_state(const std::string& bits,
                                           Encoding e = Encoding::kJordanWigner) {
  return prepare_reference_state({{cplx{1.0}, bits}}, e);
}

inline PauliOperator qubit_hamiltonian(const MolecularHamiltonian& h, Encoding e,
                                       double drop_threshold = kDefaultDropThreshold) {
  return map_fermion_operator(h.to_fermion_operator(), h.n_spin_orbitals, e, drop_threshold);
}

struct SectorSolution {
  SpectralResult spectrum;      // eigenvectors expressed over the sector basis
  std::vector<StateVector> states;  // the same vectors embedded in the full 2^n space
};

/// Lowest k eigenpairs of a qubit operator restricted to the span of the
/// given computational basis states.
inline SectorSolution solve_sector(const PauliOperator& h, std::span<const std::uint64_t> basis,
                                   int k = 1, double tol = kDefaultEigenTol,
                                   const Caps& caps = default_caps(), const LanczosOptions& opt = {}) {
  require(!basis.empty(), "solve_sector: empty basis");
  detail::check_matrix_cap(h.n_qubits(), caps);
  SectorSolution out;
  out.spectrum = ground_states(op_to_matrix(h, basis), k, tol, opt);
  const std::int64_t dim = std::int64_t{1} << h.n_qubits();
  for (int c = 0; c < out.spectrum.eigenvectors.cols(); ++c) {
    CVec full = CVec::Zero(dim);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      full[static_cast<std::int64_t>(basis[i])] = out.spectrum.eigenvectors(static_cast<std::int64_t>(i), c);
    }
    out.states.emplace_back(std::move(full), BasisTag::kQubit);
  }
  return out;
}

/// Ground state of H in its own electron-number sector under Jordan-Wigner,
/// where qubit basis indices coincide with determinants.
inline SectorSolution solve_electronic(const MolecularHamiltonian& h, int k = 1,
                                       double tol = kDefaultEigenTol) {
  const auto basis = number_sector_basis(h.n_spin_orbitals, h.n_electrons, Encoding::kJordanWigner);
  require(!basis.empty(), "solve_electronic: electron count outside [0, n_spin_orbitals]");
  SectorSolution s = solve_sector(qubit_hamiltonian(h, Encoding::kJordanWigner, 0.0), basis, k, tol);
  for (auto& st : s.states) st.basis = BasisTag::kDeterminant;
  return s;
}

}  // namespace qcat
