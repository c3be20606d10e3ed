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


#include <gtest/gtest.h>

#include <random>

#include "qcat/fermion.hpp"
#include "qcat/molecular.hpp"
#include "qcat/resources.hpp"

namespace qcat {
namespace {

TEST(QubitCount, QuotedValues) {
  EXPECT_EQ(qubit_count(QubitKind::kJwSpinOrbitals, 32), 64);
  EXPECT_EQ(qubit_count(QubitKind::kJwSpinOrbitals, 35), 70);
  EXPECT_EQ(qubit_count(QubitKind::kDvrDirect, 15, 256), 3840);
  EXPECT_EQ(qubit_count(QubitKind::kDvrBinary, 15, 256), 120);
  EXPECT_EQ(qubit_count(QubitKind::kDvrBinary, 90, 256), 720);
  EXPECT_EQ(qubit_count(QubitKind::kDvrBinary, 72, 256), 576);
}

TEST(QubitCount, BosonBinaryAndErrors) {
  EXPECT_EQ(qubit_count(QubitKind::kBosonBinary, 3, 8), 9);
  EXPECT_THROW(qubit_count(QubitKind::kDvrBinary, 15, 100), InvalidInput);
  EXPECT_THROW(qubit_count(QubitKind::kBosonBinary, 3, 6), InvalidInput);
  EXPECT_THROW(qubit_count(QubitKind::kDvrDirect, 0, 8), InvalidInput);
  EXPECT_THROW(qubit_count(QubitKind::kDvrDirect, 3, -8), InvalidInput);
  EXPECT_THROW(parse_qubit_kind("ternary"), InvalidInput);
  EXPECT_EQ(parse_qubit_kind("dvr_binary"), QubitKind::kDvrBinary);
}

TEST(QubitCount, BinaryNeverExceedsDirect) {
  for (int m = 1; m <= 6; ++m) {
    for (int l = 2; l <= 1024; l *= 2) {
      const auto d = qubit_count(QubitKind::kDvrDirect, m, l);
      const auto b = qubit_count(QubitKind::kDvrBinary, m, l);
      EXPECT_LE(b, d);
      if (l > 2) EXPECT_LT(b, d);
    }
  }
}

TEST(FciDimension, ProductionActiveSpace) {
  const BigInt c = binomial(32, 24);
  EXPECT_EQ(c, BigInt(10518300));
  const BigInt d = fci_dimension(24, 24, 32);
  EXPECT_EQ(d, BigInt("110634634890000"));
  EXPECT_EQ(big_to_sci(d), "1.106e14");
  EXPECT_EQ(d.str().size(), 15u);  // order 10^14
}

TEST(FciDimension, SmallCasesAndSymmetry) {
  EXPECT_EQ(fci_dimension(1, 0, 2), 2);
  for (int n = 0; n <= 12; ++n) EXPECT_EQ(fci_dimension(n, n, n), 1);
  for (int n = 1; n <= 20; ++n)
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; b += 3) EXPECT_EQ(fci_dimension(a, b, n), fci_dimension(b, a, n));
  EXPECT_THROW(fci_dimension(5, 1, 4), InvalidInput);
  EXPECT_THROW(fci_dimension(-1, 1, 4), InvalidInput);
}

TEST(FciDimension, BeyondSixtyFourBits) {
  const BigInt d = fci_dimension(60, 60, 120);
  EXPECT_GT(d, BigInt(std::numeric_limits<std::uint64_t>::max()));
  // C(120, 60) is known in closed form through the product formula
  BigInt c = 1;
  for (int i = 1; i <= 60; ++i) c = c * (60 + i) / i;
  EXPECT_EQ(d, c * c);
}

TEST(DmrgCost, ProductionScale) {
  const auto c = dmrg_cost(64, 5000, 16);
  EXPECT_EQ(c.scale, BigInt(8000000000000LL));
  EXPECT_EQ(c.memory_bytes, BigInt(128000000000000LL));  // 128 TB
  EXPECT_EQ(dmrg_cost(64, 1, 16).scale, 64);
  EXPECT_EQ(dmrg_cost(64, 5000, 10).memory_bytes, BigInt(80000000000000LL));
  EXPECT_THROW(dmrg_cost(0, 10), InvalidInput);
}

PauliOperator op(int n, std::initializer_list<const char*> strings) {
  PauliOperator o(n);
  for (const char* s : strings) o.add(PauliString::parse(s, n), 1.0);
  return o;
}

TEST(TrotterGates, Ladders) {
  auto g = trotter_step_gates(op(1, {"Z0"}));
  EXPECT_EQ(g.two_qubit, 0);
  EXPECT_EQ(g.rotations, 1);
  g = trotter_step_gates(op(2, {"Z0 Z1"}));
  EXPECT_EQ(g.two_qubit, 2);
  g = trotter_step_gates(op(2, {"X0 X1", "Y0 Y1", "Z0 Z1"}));
  EXPECT_EQ(g.two_qubit, 6);
  EXPECT_EQ(g.rotations, 3);
  EXPECT_THROW(trotter_step_gates(PauliOperator(2)), InvalidInput);
}

TEST(TrotterGates, AdditiveOverDisjointConcatenation) {
  const auto a = op(4, {"X0 Z1 Y3", "Z2", "X1 X2"});
  const auto b = op(4, {"Y0 Y1 Y2 Y3", "Z0 Z3"});
  auto sum = a;
  for (const auto& [s, c] : b.terms()) sum.add(s, c);
  const auto ga = trotter_step_gates(a), gb = trotter_step_gates(b), gs = trotter_step_gates(sum);
  EXPECT_EQ(gs.two_qubit, ga.two_qubit + gb.two_qubit);
  EXPECT_EQ(gs.rotations, ga.rotations + gb.rotations);
}

TEST(Report, HistogramSumsToTermCount) {
  const auto h = build_molecular_hamiltonian(hubbard_chain_integrals(3, 1.0, 4.0, 3));
  for (auto e : {Encoding::kJordanWigner, Encoding::kBravyiKitaev, Encoding::kParity}) {
    const auto q = qubit_hamiltonian(h, e, 0.0);
    const auto r = resource_report(encoding_name(e), q);
    std::int64_t total = 0;
    for (const auto& [w, n] : r.weight_histogram) {
      EXPECT_GE(w, 0);
      EXPECT_GE(n, 0);
      total += n;
    }
    EXPECT_EQ(total, r.terms);
    EXPECT_EQ(r.qubits, 6);
    const auto j = to_json(r);
    EXPECT_EQ(j["pauli_terms"], r.terms);
  }
}

}  // namespace
}  // namespace qcat
