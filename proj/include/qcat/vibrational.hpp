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

#include <bit>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qcat/core.hpp"
#include "qcat/pauli.hpp"

namespace qcat {

/// One term K * prod_alpha Q_alpha^{power_alpha} of the potential expansion.
struct ModeCoupling {
  double coefficient = 0.0;                   // Hartree / Bohr^J
  std::vector<std::pair<int, int>> factors;   // (mode, power)

  int order() const {
    int j = 0;
    for (const auto& f : factors) j += f.second;
    return j;
  }
};

/**
 * Harmonic modes plus polynomial couplings in the normal coordinates
 * Q = (a + a+)/sqrt(2 omega), each mode truncated to its lowest n Fock
 * levels and encoded in binary on log2(n) qubits. Mode 0 sits on the lowest
 * qubits.
 */
struct VibrationalHamiltonian {
  std::vector<double> frequencies;
  std::vector<ModeCoupling> couplings;
  std::vector<int> levels;  // Fock truncation per mode

  int n_modes() const { return static_cast<int>(frequencies.size()); }

  void validate() const {
    require(!frequencies.empty(), "vibrational Hamiltonian has no modes");
    require(levels.size() == frequencies.size(), "one Fock truncation per mode is required");
    for (std::size_t a = 0; a < frequencies.size(); ++a) {
      require(frequencies[a] > 0.0, "mode frequencies must be positive");
      require(levels[a] >= 2, "Fock truncation below 2 for mode " + std::to_string(a));
      require(std::has_single_bit(static_cast<unsigned>(levels[a])),
              "Fock truncation must be a power of two for binary encoding, got " +
                  std::to_string(levels[a]));
    }
    for (const auto& c : couplings) {
      for (const auto& [mode, power] : c.factors) {
        require(mode >= 0 && mode < n_modes(), "coupling refers to an unknown mode");
        require(power >= 1, "coupling powers must be positive");
      }
    }
  }

  int n_qubits() const {
    int n = 0;
    for (int l : levels) n += std::countr_zero(static_cast<unsigned>(l));
    return n;
  }
};

inline std::int64_t boson_qubit_count(std::int64_t modes, std::int64_t levels) {
  require(modes >= 0 && levels >= 2 && std::has_single_bit(static_cast<std::uint64_t>(levels)),
          "boson binary encoding needs a power-of-two truncation >= 2");
  return modes * std::countr_zero(static_cast<std::uint64_t>(levels));
}

/// Truncated annihilator: a|v> = sqrt(v)|v-1>, and a+ kills the top level.
inline RMat truncated_annihilator(int levels) {
  RMat a = RMat::Zero(levels, levels);
  for (int v = 1; v < levels; ++v) a(v - 1, v) = std::sqrt(static_cast<double>(v));
  return a;
}

inline PauliOperator build_vibrational_hamiltonian(const VibrationalHamiltonian& vh,
                                                   double drop_threshold = kDefaultDropThreshold) {
  vh.validate();
  const int nq = vh.n_qubits();
  std::vector<int> offset(vh.n_modes(), 0);
  for (int a = 1; a < vh.n_modes(); ++a) {
    offset[a] = offset[a - 1] + std::countr_zero(static_cast<unsigned>(vh.levels[a - 1]));
  }
  auto mode_op = [&](int a, const RMat& m) {
    return embed_operator(matrix_to_pauli(m.cast<cplx>(), 0.0), nq, offset[a]);
  };

  PauliOperator out(nq);
  for (int a = 0; a < vh.n_modes(); ++a) {
    RMat h = RMat::Zero(vh.levels[a], vh.levels[a]);
    for (int v = 0; v < vh.levels[a]; ++v) h(v, v) = vh.frequencies[a] * (v + 0.5);
    out.add(mode_op(a, h));
  }
  for (const auto& c : vh.couplings) {
    if (c.coefficient == 0.0) continue;
    PauliOperator term = PauliOperator::identity(nq, c.coefficient);
    for (const auto& [mode, power] : c.factors) {
      const RMat a = truncated_annihilator(vh.levels[mode]);
      const RMat q = (a + a.transpose()) / std::sqrt(2.0 * vh.frequencies[mode]);
      RMat qp = RMat::Identity(q.rows(), q.cols());
      for (int k = 0; k < power; ++k) qp = qp * q;
      term = term * mode_op(mode, qp);
    }
    out.add(term);
  }
  return out.simplify(drop_threshold);
}

}  // namespace qcat
