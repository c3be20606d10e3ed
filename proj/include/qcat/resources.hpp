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

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "qcat/core.hpp"
#include "qcat/dvr.hpp"
#include "qcat/pauli.hpp"

namespace qcat {

using BigInt = boost::multiprecision::cpp_int;

enum class QubitKind { kJwSpinOrbitals, kDvrDirect, kDvrBinary, kBosonBinary };

inline QubitKind parse_qubit_kind(const std::string& s) {
  if (s == "jw_spin_orbitals") return QubitKind::kJwSpinOrbitals;
  if (s == "dvr_direct") return QubitKind::kDvrDirect;
  if (s == "dvr_binary") return QubitKind::kDvrBinary;
  if (s == "boson_binary") return QubitKind::kBosonBinary;
  throw InvalidInput("unknown qubit-count kind '" + s +
                     "' (expected jw_spin_orbitals, dvr_direct, dvr_binary or boson_binary)");
}

/**
 * Qubits needed by each encoding.
 *
 *   kJwSpinOrbitals: a = spatial orbitals        -> 2a
 *   kDvrDirect:      a = dimensions, b = points  -> a * b
 *   kDvrBinary:      a = dimensions, b = points  -> a * log2(b)
 *   kBosonBinary:    a = modes, b = levels       -> a * log2(b)
 */
inline std::int64_t qubit_count(QubitKind kind, std::int64_t a, std::int64_t b = 0) {
  require(a > 0, "qubit_count: sizes must be positive");
  switch (kind) {
    case QubitKind::kJwSpinOrbitals:
      return 2 * a;
    case QubitKind::kDvrDirect:
      require(b > 0, "qubit_count: sizes must be positive");
      return direct_qubit_count(a, b);
    case QubitKind::kDvrBinary:
    case QubitKind::kBosonBinary:
      require(b > 0, "qubit_count: sizes must be positive");
      return binary_qubit_count(a, b);
  }
  return 0;
}

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Number of determinants C(n, n_alpha) * C(n, n_beta).
inline BigInt fci_dimension(int n_alpha, int n_beta, int n_orbitals) {
  if (n_orbitals < 0 || n_alpha < 0 || n_beta < 0 || n_alpha > n_orbitals || n_beta > n_orbitals) {
    throw InvalidInput("fci_dimension: occupations (" + std::to_string(n_alpha) + ", " + std::to_string(n_beta) +
                       ") invalid for " + std::to_string(n_orbitals) + " orbitals");
  }
  return binomial(n_orbitals, n_alpha) * binomial(n_orbitals, n_beta);
}

struct DmrgCost {
  BigInt scale;         // N * D^3
  BigInt memory_bytes;  // scale * bytes per amplitude
  int bytes_per_amplitude = 16;
};

inline DmrgCost dmrg_cost(std::int64_t n_orbitals, std::int64_t bond_dimension, int bytes_per_amplitude = 16) {
  require(n_orbitals > 0 && bond_dimension > 0 && bytes_per_amplitude > 0, "dmrg_cost: inputs must be positive");
  DmrgCost c;
  const BigInt d = bond_dimension;
  c.scale = BigInt(n_orbitals) * d * d * d;
  c.memory_bytes = c.scale * bytes_per_amplitude;
  c.bytes_per_amplitude = bytes_per_amplitude;
  return c;
}

struct TrotterGateCount {
  std::int64_t two_qubit = 0;
  std::int64_t rotations = 0;
};

/// CNOT-ladder cost of one first-order Trotter step: a weight-w term costs
/// 2(w-1) two-qubit gates and one rotation. Identity terms are a global
/// phase and cost nothing.
inline TrotterGateCount trotter_step_gates(const PauliOperator& h) {
  require(!h.empty(), "trotter_step_gates: empty operator");
  TrotterGateCount g;
  for (const auto& [s, c] : h.terms()) {
    const int w = s.weight();
    if (w == 0) continue;
    g.two_qubit += 2 * (w - 1);
    g.rotations += 1;
  }
  return g;
}

struct ResourceReport {
  std::string mapping;
  int qubits = 0;
  std::int64_t terms = 0;
  std::map<int, std::int64_t> weight_histogram;
  TrotterGateCount trotter;
  std::optional<BigInt> fci;
  std::optional<DmrgCost> dmrg;
};

inline ResourceReport resource_report(const std::string& mapping, const PauliOperator& h) {
  ResourceReport r;
  r.mapping = mapping;
  r.qubits = h.n_qubits();
  r.terms = static_cast<std::int64_t>(h.n_terms());
  for (const auto& [s, c] : h.terms()) ++r.weight_histogram[s.weight()];
  if (!h.empty()) r.trotter = trotter_step_gates(h);
  return r;
}

inline std::string big_to_string(const BigInt& v) { return v.str(); }

/// Big integer in scientific notation with four significant digits.
inline std::string big_to_sci(const BigInt& v) {
  const std::string s = v.str();
  if (s.size() <= 4) return s;
  std::string m = s.substr(0, 1) + "." + s.substr(1, 3);
  return m + "e" + std::to_string(s.size() - 1);
}

inline nlohmann::json to_json(const ResourceReport& r) {
  nlohmann::json j;
  j["mapping"] = r.mapping;
  j["qubits"] = r.qubits;
  j["pauli_terms"] = r.terms;
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [w, n] : r.weight_histogram) hist[std::to_string(w)] = n;
  j["weight_histogram"] = hist;
  j["trotter_step"] = {{"two_qubit_gates", r.trotter.two_qubit}, {"rotations", r.trotter.rotations}};
  if (r.fci) j["fci_dimension"] = big_to_string(*r.fci);
  if (r.dmrg) {
    j["dmrg"] = {{"n_d3", big_to_string(r.dmrg->scale)},
                 {"memory_bytes", big_to_string(r.dmrg->memory_bytes)},
                 {"bytes_per_amplitude", r.dmrg->bytes_per_amplitude}};
  }
  return j;
}

}  // namespace qcat
