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

#include "oracles.hpp"
#include "qcat/eigensolver.hpp"
#include "qcat/evolution.hpp"
#include "qcat/molecular.hpp"
#include "qcat/rdm.hpp"

namespace qcat {
namespace {

PauliOperator op1(const std::string& letters, cplx c = 1.0) {
  return PauliOperator::single(PauliString::from_letters(letters), c);
}

PauliOperator heisenberg() { return op1("XX") + op1("YY") + op1("ZZ"); }

PauliOperator random_hermitian_pauli(int n, int terms, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> letter(0, 3);
  std::normal_distribution<double> g;
  PauliOperator op(n);
  for (int t = 0; t < terms; ++t) {
    std::string s;
    for (int q = 0; q < n; ++q) s += "IXYZ"[letter(rng)];
    op.add(PauliString::from_letters(s), g(rng));
  }
  return op;
}

SpMat random_sparse_hermitian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> idx(0, dim - 1);
  CMat m = CMat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 4.0 * g(rng);
  for (int k = 0; k < 4 * dim; ++k) {
    const int i = idx(rng), j = idx(rng);
    const cplx v(g(rng), g(rng));
    m(i, j) += v;
    m(j, i) += std::conj(v);
  }
  return m.sparseView();
}

StateVector random_state(std::int64_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVec v(dim);
  for (auto& x : v) x = cplx(g(rng), g(rng));
  return StateVector(v / v.norm());
}

// ----------------------------------------------------------------------------
// Eigensolver

TEST(GroundStates, Diagonal) {
  SpMat d(3, 3);
  d.insert(0, 0) = 3.0;
  d.insert(1, 1) = 1.0;
  d.insert(2, 2) = 2.0;
  const auto r = ground_states(d, 1);
  EXPECT_NEAR(r.eigenvalues[0], 1.0, 1e-12);
  EXPECT_NEAR(std::abs(r.eigenvectors(1, 0)), 1.0, 1e-10);
}

TEST(GroundStates, HeisenbergAgainstDense) {
  const auto r = ground_states(op_to_matrix(heisenberg()), 4);
  const RVec ref = oracle::eigenvalues(CMat(op_to_matrix(heisenberg())));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(r.eigenvalues[i], ref[i], 1e-10);
  EXPECT_NEAR(r.eigenvalues[0], -3.0, 1e-10);
  EXPECT_EQ(r.ground_degeneracy, 1);
}

TEST(GroundStates, ReportsDegenerateGround) {
  // -Heisenberg has a threefold degenerate triplet ground level
  const auto r = ground_states(op_to_matrix(-1.0 * heisenberg()), 1);
  EXPECT_NEAR(r.eigenvalues[0], -1.0, 1e-10);
  EXPECT_EQ(r.ground_degeneracy, 3);
}

TEST(GroundStates, HubbardDimerHalfFilledSector) {
  const auto h = build_molecular_hamiltonian(hubbard_chain_integrals(2, 1.0, 8.0, 2));
  const auto s = solve_electronic(h);
  EXPECT_NEAR(s.spectrum.eigenvalues[0], oracle::hubbard_dimer_ground(1.0, 8.0), 1e-9);
}

TEST(GroundStates, ResidualContractOnRandomSparse) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 3; ++trial) {
    const SpMat m = random_sparse_hermitian(400, rng);
    const auto r = ground_states(m, 5, 1e-9);
    const RVec ref = oracle::eigenvalues(CMat(m));
    for (int i = 0; i < 5; ++i) {
      EXPECT_NEAR(r.eigenvalues[i], ref[i], 1e-8);
      const CVec v = r.eigenvectors.col(i);
      EXPECT_LE((m * v - r.eigenvalues[i] * v).norm(), 1e-9);
      EXPECT_LE(r.residual_norms[i], 1e-9);
    }
    for (int i = 1; i < 5; ++i) EXPECT_LE(r.eigenvalues[i - 1], r.eigenvalues[i]);
  }
}

TEST(GroundStates, DeterministicForFixedSeed) {
  std::mt19937_64 rng(1);
  const SpMat m = random_sparse_hermitian(200, rng);
  const auto a = ground_states(m, 2);
  const auto b = ground_states(m, 2);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.eigenvectors, b.eigenvectors);
}

TEST(GroundStates, RejectsNonHermitian) {
  SpMat m(2, 2);
  m.insert(0, 1) = 1.0;
  EXPECT_THROW(ground_states(m, 1), InvalidInput);
}

TEST(GroundStates, NonConvergenceCarriesResidual) {
  std::mt19937_64 rng(2);
  const SpMat m = random_sparse_hermitian(300, rng);
  LanczosOptions opt;
  opt.max_basis = 4;
  opt.max_restarts = 1;
  try {
    ground_states(m, 1, 1e-12, opt);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
  }
}

// ----------------------------------------------------------------------------
// Time evolution

TEST(EvolveTrotter, DiagonalHamiltonianKeepsPopulations) {
  const auto psi = StateVector::basis_state(2, 0);
  const auto out = evolve_trotter(op1("Z"), psi, 0.37, 10);
  EXPECT_NEAR(std::norm(out[0]), 1.0, 1e-14);
}

TEST(EvolveTrotter, RabiHalfPeriod) {
  const auto out = evolve_trotter(op1("X"), StateVector::basis_state(2, 0), kPi / 2, 1, 1);
  EXPECT_NEAR(std::norm(out[1]), 1.0, 1e-14);
}

TEST(EvolveTrotter, CommutingTermsAreExact) {
  std::mt19937_64 rng(3);
  const auto h = 0.7 * op1("ZZI") + op1("IZZ", -0.3) + op1("ZIZ", 1.1) + op1("ZII", 0.2);
  const auto psi = random_state(8, rng);
  const auto a = evolve_trotter(h, psi, 0.25, 8, 1);
  const CVec ref = oracle::expm_hermitian(CMat(op_to_matrix(h)), 2.0) * psi.amplitudes;
  EXPECT_LT((a.amplitudes - ref).norm(), 1e-12);
}

TEST(EvolveTrotter, SecondOrderGlobalErrorSlope) {
  std::mt19937_64 rng(77);
  const auto h = random_hermitian_pauli(3, 10, rng);
  const auto psi = random_state(8, rng);
  const double t = 1.0;
  const CVec ref = evolve_exact(op_to_matrix(h), psi, t).amplitudes;
  std::vector<double> dts, errs;
  for (int steps : {8, 16, 32, 64, 128}) {
    const auto out = evolve_trotter(h, psi, t / steps, steps, 2);
    dts.push_back(t / steps);
    errs.push_back((out.amplitudes - ref).norm());
  }
  EXPECT_NEAR(oracle::loglog_slope(dts, errs), 2.0, 0.1);
}

TEST(EvolveTrotter, FirstOrderGlobalErrorSlope) {
  std::mt19937_64 rng(78);
  const auto h = random_hermitian_pauli(3, 10, rng);
  const auto psi = random_state(8, rng);
  const CVec ref = evolve_exact(op_to_matrix(h), psi, 1.0).amplitudes;
  std::vector<double> dts, errs;
  for (int steps : {64, 128, 256, 512}) {
    dts.push_back(1.0 / steps);
    errs.push_back((evolve_trotter(h, psi, 1.0 / steps, steps, 1).amplitudes - ref).norm());
  }
  EXPECT_NEAR(oracle::loglog_slope(dts, errs), 1.0, 0.1);
}

TEST(EvolveTrotter, NormPreservedOverManySteps) {
  std::mt19937_64 rng(5);
  const auto h = random_hermitian_pauli(3, 10, rng);
  const auto out = evolve_trotter(h, random_state(8, rng), 0.01, 10000, 2);
  EXPECT_LE(std::abs(out.norm() - 1.0), 1e-10);
}

TEST(EvolveTrotter, InputErrors) {
  EXPECT_THROW(evolve_trotter(op1("ZZ"), StateVector::basis_state(2, 0), 0.1, 1), InvalidInput);
  EXPECT_THROW(evolve_trotter(op1("Z"), StateVector::basis_state(2, 0), -0.1, 1), InvalidInput);
  EXPECT_THROW(evolve_trotter(op1("Z"), StateVector::basis_state(2, 0), 0.1, 1, 3), InvalidInput);
}

TEST(EvolveExact, ZeroTimeIsIdentity) {
  std::mt19937_64 rng(6);
  const auto psi = random_state(8, rng);
  const auto out = evolve_exact(op_to_matrix(random_hermitian_pauli(3, 5, rng)), psi, 0.0);
  EXPECT_EQ(out.amplitudes, psi.amplitudes);
}

TEST(EvolveExact, EigenvectorAcquiresPhase) {
  const SpMat h = op_to_matrix(heisenberg());
  Eigen::SelfAdjointEigenSolver<CMat> es{CMat(h)};
  const StateVector v(es.eigenvectors().col(0));
  const auto out = evolve_exact(h, v, 1.3);
  EXPECT_LT((out.amplitudes - std::exp(cplx(0, 3.0 * 1.3)) * v.amplitudes).norm(), 1e-12);
}

TEST(EvolveExact, MatchesDenseExponential) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const SpMat h = random_sparse_hermitian(6, rng);
    const auto psi = random_state(6, rng);
    for (double t : {0.3, 2.0, -1.5, 25.0}) {
      const CVec ref = oracle::expm_hermitian(CMat(h), t) * psi.amplitudes;
      EXPECT_LT((evolve_exact(h, psi, t).amplitudes - ref).norm(), 1e-10);
    }
  }
}

TEST(EvolveExact, ConservesNormAndEnergy) {
  std::mt19937_64 rng(9);
  const SpMat h = random_sparse_hermitian(300, rng);
  auto psi = random_state(300, rng);
  const auto e0 = psi.amplitudes.dot(h * psi.amplitudes).real();
  for (int step = 0; step < 20; ++step) psi = evolve_exact(h, psi, 0.5);
  EXPECT_LE(std::abs(psi.norm() - 1.0), 1e-10);
  const auto e1 = psi.amplitudes.dot(h * psi.amplitudes).real();
  EXPECT_LE(std::abs(e1 - e0), 1e-8 * std::abs(e0));
}

TEST(EvolveExact, RefusesAboveCap) {
  SpMat big(100, 100);
  Caps tiny;
  tiny.max_dim = 50;
  EXPECT_THROW(evolve_exact(big, StateVector::basis_state(100, 0), 1.0, {}, tiny), CapExceeded);
}

// ----------------------------------------------------------------------------
// Reduced density matrices

TEST(Rdm, DeterminantOneBody) {
  const auto psi = prepare_reference_state("1100");
  const CMat rho = measure_rdm1(psi, 4);
  CMat ref = CMat::Zero(4, 4);
  ref(0, 0) = ref(1, 1) = 1.0;
  EXPECT_LT((rho - ref).norm(), 1e-15);
}

class RdmOnDimer : public ::testing::Test {
 protected:
  void SetUp() override {
    h = build_molecular_hamiltonian(hubbard_chain_integrals(2, 1.0, 8.0, 2));
    h.core_energy = 0.125;
    sol = solve_electronic(h, 4);
  }
  MolecularHamiltonian h;
  SectorSolution sol;
};

TEST_F(RdmOnDimer, TraceIsParticleNumber) {
  const CMat rho = measure_rdm1(sol.states[0], 4);
  EXPECT_NEAR(rho.trace().real(), 2.0, 1e-12);
  EXPECT_LT((rho - rho.adjoint()).norm(), 1e-13);
}

TEST_F(RdmOnDimer, TwoBodySymmetries) {
  const Rdm2 r = measure_rdm2(sol.states[0], 4);
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          EXPECT_NEAR(std::abs(r(p, q, a, b) + r(q, p, a, b)), 0.0, 1e-13);
          EXPECT_NEAR(std::abs(r(p, q, a, b) + r(p, q, b, a)), 0.0, 1e-13);
          // <a+_q a+_p a_r a_s>^* = <a+_s a+_r a_p a_q>
          EXPECT_NEAR(std::abs(r(p, q, a, b) - std::conj(r(b, a, q, p))), 0.0, 1e-13);
        }
}

TEST_F(RdmOnDimer, EnergyReassemblyForEveryEigenstate) {
  for (int i = 0; i < 4; ++i) {
    const auto& psi = sol.states[i];
    const double e = h.energy_from_rdms(measure_rdm1(psi, 4), measure_rdm2(psi, 4));
    EXPECT_NEAR(e, sol.spectrum.eigenvalues[i], 1e-10) << "state " << i;
  }
}

TEST(Rdm, EnergyReassemblyOnRandomThreeOrbitalSystem) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  IntegralFile f;
  f.norb = 3;
  f.nelec = 3;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q <= p; ++q) f.one_body[{p, q}] = g(rng);
  f.two_body[{0, 0, 1, 1}] = 0.4;
  f.two_body[{0, 1, 1, 2}] = 0.15;
  f.two_body[{2, 2, 2, 2}] = 0.7;
  f.two_body[{0, 2, 0, 2}] = 0.11;
  const auto h = build_molecular_hamiltonian(f);
  const auto sol = solve_electronic(h, 3);
  for (int i = 0; i < 3; ++i) {
    const auto& psi = sol.states[i];
    EXPECT_NEAR(h.energy_from_rdms(measure_rdm1(psi, 6), measure_rdm2(psi, 6)),
                sol.spectrum.eigenvalues[i], 1e-10);
  }
}

TEST(Rdm, RejectsWrongBasis) {
  EXPECT_THROW(measure_rdm1(StateVector::basis_state(8, 0), 4), InvalidInput);
  EXPECT_THROW(measure_rdm1(StateVector::basis_state(16, 0, BasisTag::kGrid), 4), InvalidInput);
}

}  // namespace
}  // namespace qcat
