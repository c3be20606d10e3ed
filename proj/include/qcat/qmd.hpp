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

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qcat/core.hpp"
#include "qcat/eigensolver.hpp"
#include "qcat/molecular.hpp"
#include "qcat/rdm.hpp"

namespace qcat {

/// Electronic Hamiltonian family H(R) plus nuclear repulsion V_NN(R).
struct ParameterizedHamiltonian {
  std::string name;
  int dim = 1;
  std::function<MolecularHamiltonian(std::span<const double>)> generator;
  std::function<double(std::span<const double>)> nuclear_repulsion;

  MolecularHamiltonian at(std::span<const double> r) const {
    if (static_cast<int>(r.size()) != dim) {
      throw InvalidInput(name + ": expected " + std::to_string(dim) + " coordinates, got " +
                         std::to_string(r.size()));
    }
    return generator(r);
  }
  double vnn(std::span<const double> r) const { return nuclear_repulsion ? nuclear_repulsion(r) : 0.0; }
};

struct HubbardDimerModel {
  double t0 = 1.0;
  double alpha = 1.0;
  double u = 8.0;
  double z = 0.3;

  double hopping(double r) const { return t0 * std::exp(-alpha * r); }
};

/// Two-site Hubbard model at half filling with t(R) = t0 exp(-alpha R) and
/// V_NN(R) = Z^2 / R. R is the single bond coordinate.
inline ParameterizedHamiltonian hubbard_dimer_family(const HubbardDimerModel& m) {
  require(m.u >= 0.0, "hubbard dimer: U must be non-negative");
  ParameterizedHamiltonian ph;
  ph.name = "hubbard_dimer";
  ph.dim = 1;
  ph.generator = [m](std::span<const double> r) {
    if (!(r[0] > 0.0)) throw InvalidInput("hubbard dimer: bond length must be positive, got " + format_double(r[0]));
    return build_molecular_hamiltonian(hubbard_chain_integrals(2, m.hopping(r[0]), m.u, 2));
  };
  ph.nuclear_repulsion = [m](std::span<const double> r) { return m.z * m.z / r[0]; };
  return ph;
}

/// One-coordinate family known only at tabulated stations. Requests between
/// stations are refused; nothing is interpolated.
inline ParameterizedHamiltonian station_family(std::map<double, MolecularHamiltonian> stations,
                                               double match_tol = 1e-9) {
  require(!stations.empty(), "station family: no stations");
  ParameterizedHamiltonian ph;
  ph.name = "stations";
  ph.dim = 1;
  auto table = std::make_shared<const std::map<double, MolecularHamiltonian>>(std::move(stations));
  ph.generator = [table, match_tol](std::span<const double> r) {
    auto it = table->lower_bound(r[0] - match_tol);
    if (it == table->end() || std::abs(it->first - r[0]) > match_tol) {
      throw InvalidInput("no integral station at R = " + format_double(r[0]) +
                         "; interpolation between stations is disabled");
    }
    return it->second;
  };
  return ph;
}

// ---------------------------------------------------------------------------
// Electronic structure and forces

struct ElectronicState {
  double energy = 0.0;  // electronic ground energy including the core constant
  StateVector psi;      // determinant basis
  double residual = 0.0;
  int iterations = 0;
};

/// Ground state of H in its electron-number sector, optionally warm-started
/// from a previous state.
inline ElectronicState electronic_ground_state(const MolecularHamiltonian& h, const StateVector* warm = nullptr,
                                               double tol = kDefaultEigenTol) {
  const auto basis = number_sector_basis(h.n_spin_orbitals, h.n_electrons, Encoding::kJordanWigner);
  require(!basis.empty(), "electronic_ground_state: empty electron-number sector");
  LanczosOptions opt;
  if (warm != nullptr && warm->dim() == (std::int64_t{1} << h.n_spin_orbitals)) {
    CVec start(static_cast<std::int64_t>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) start[static_cast<std::int64_t>(i)] = warm->amplitudes[static_cast<std::int64_t>(basis[i])];
    if (start.norm() > 1e-3) opt.start = start;
  }
  const auto sol = solve_sector(qubit_hamiltonian(h, Encoding::kJordanWigner, 0.0), basis, 1, tol,
                                default_caps(), opt);
  ElectronicState out;
  out.energy = sol.spectrum.eigenvalues[0];
  out.psi = sol.states[0];
  out.psi.basis = BasisTag::kDeterminant;
  out.residual = sol.spectrum.residual_norms[0];
  out.iterations = sol.spectrum.iterations;
  return out;
}

struct ForceOptions {
  double delta = 1e-4;         // central-difference step on the integrals (Bohr)
  double residual_tol = 1e-6;  // ||H psi - E psi|| accepted as an eigenstate
};

namespace detail {

/// (a - b) / (2 delta), term by term, as a Hamiltonian-shaped object.
inline MolecularHamiltonian integral_derivative(const MolecularHamiltonian& a, const MolecularHamiltonian& b,
                                                double delta) {
  require(a.n_spin_orbitals == b.n_spin_orbitals, "integral derivative: orbital count changes with R");
  MolecularHamiltonian d(a.n_spin_orbitals);
  const double s = 1.0 / (2.0 * delta);
  d.core_energy = (a.core_energy - b.core_energy) * s;
  d.h1 = (a.h1 - b.h1) * s;
  for (const auto& [k, v] : a.h2) d.h2[k] += v * s;
  for (const auto& [k, v] : b.h2) d.h2[k] -= v * s;
  return d;
}

}  // namespace detail

/**
 * F = -[Tr(rho1 dh/dR) + 1/2 Tr(rho2 dh2/dR) + d(core + V_NN)/dR] with the
 * integral derivatives taken by central differences of the generator and
 * the density matrices measured on psi. psi must be an eigenstate of H(R);
 * then the Pulay part vanishes and F = -dE/dR.
 */
inline std::vector<double> quantum_force(const ParameterizedHamiltonian& ph, std::span<const double> r,
                                         const StateVector& psi, const ForceOptions& opt = {}) {
  require(opt.delta > 0.0, "quantum_force: finite-difference step must be positive");
  const MolecularHamiltonian h = ph.at(r);
  const int n = h.n_spin_orbitals;
  const SpMat hm = op_to_matrix(qubit_hamiltonian(h, Encoding::kJordanWigner, 0.0));
  if (psi.dim() != hm.rows()) {
    throw InvalidInput("quantum_force: state dimension " + std::to_string(psi.dim()) + " does not match 2^" +
                       std::to_string(n));
  }
  const CVec hpsi = hm * psi.amplitudes;
  const double e = psi.amplitudes.dot(hpsi).real() / psi.amplitudes.squaredNorm();
  const double res = (hpsi - e * psi.amplitudes).norm() / psi.amplitudes.norm();
  if (res > opt.residual_tol) {
    throw NumericalError("quantum_force: state is not an eigenstate of H(R); residual " + format_double(res) +
                         " exceeds " + format_double(opt.residual_tol));
  }
  const StateVector unit = psi.normalized();
  const CMat rho1 = measure_rdm1(unit, n);
  const Rdm2 rho2 = measure_rdm2(unit, n);
  std::vector<double> f(r.size());
  std::vector<double> rp(r.begin(), r.end()), rm(r.begin(), r.end());
  for (std::size_t a = 0; a < r.size(); ++a) {
    rp[a] = r[a] + opt.delta;
    rm[a] = r[a] - opt.delta;
    const auto dh = detail::integral_derivative(ph.at(rp), ph.at(rm), opt.delta);
    const double dv = (ph.vnn(rp) - ph.vnn(rm)) / (2.0 * opt.delta);
    f[a] = -(dh.energy_from_rdms(rho1, rho2) + dv);
    rp[a] = rm[a] = r[a];
  }
  return f;
}

// ---------------------------------------------------------------------------
// Classical integration

struct PhaseState {
  std::vector<double> r;
  std::vector<double> p;
};

using ForceFn = std::function<std::vector<double>(std::span<const double>)>;

/// One velocity-Verlet step. `force` holds F(R) on entry and F(R') on exit.
inline void verlet_step(PhaseState& s, std::vector<double>& force, std::span<const double> masses, double dt,
                        const ForceFn& refresh) {
  require(dt > 0.0, "verlet_step: dt must be positive");
  const std::size_t d = s.r.size();
  require(s.p.size() == d && force.size() == d && masses.size() == d,
          "verlet_step: positions, momenta, forces and masses differ in length");
  for (std::size_t a = 0; a < d; ++a) {
    s.p[a] += 0.5 * dt * force[a];
    s.r[a] += dt * s.p[a] / masses[a];
  }
  force = refresh(s.r);
  require(force.size() == d, "verlet_step: force callback returned the wrong dimension");
  for (std::size_t a = 0; a < d; ++a) s.p[a] += 0.5 * dt * force[a];
}

inline double kinetic_energy(const PhaseState& s, std::span<const double> masses) {
  double k = 0.0;
  for (std::size_t a = 0; a < s.p.size(); ++a) k += 0.5 * s.p[a] * s.p[a] / masses[a];
  return k;
}

/// Initial positions: a fixed point when every width is zero, otherwise
/// independent Gaussians around the center.
struct PositionSpec {
  std::vector<double> center;
  std::vector<double> widths;
};

/// Maxwell-Boltzmann momenta at temperature T (Kelvin). Sample i draws from
/// its own generator seeded by (seed, i), so any subset of the ensemble can
/// be regenerated independently.
inline std::vector<PhaseState> sample_initial_conditions(double temperature, std::span<const double> masses,
                                                         const PositionSpec& pos, int count, std::uint64_t seed) {
  if (!(temperature > 0.0)) throw InvalidInput("sample_initial_conditions: temperature must be positive");
  if (count < 1) throw InvalidInput("sample_initial_conditions: count must be at least 1");
  const std::size_t d = masses.size();
  if (d == 0 || pos.center.size() != d) {
    throw InvalidInput("sample_initial_conditions: position center needs one entry per mass");
  }
  if (!pos.widths.empty() && pos.widths.size() != d) {
    throw InvalidInput("sample_initial_conditions: position widths need one entry per mass");
  }
  for (double m : masses) require(m > 0.0, "sample_initial_conditions: masses must be positive");
  for (double w : pos.widths) require(w >= 0.0, "sample_initial_conditions: widths must be non-negative");
  const double kt = kBoltzmannHartree * temperature;
  std::vector<PhaseState> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(sq);
    std::normal_distribution<double> g(0.0, 1.0);
    PhaseState& s = out[static_cast<std::size_t>(i)];
    s.r = pos.center;
    s.p.resize(d);
    for (std::size_t a = 0; a < d; ++a) {
      const double w = pos.widths.empty() ? 0.0 : pos.widths[a];
      if (w > 0.0) s.r[a] += w * g(rng);
    }
    for (std::size_t a = 0; a < d; ++a) s.p[a] = std::sqrt(masses[a] * kt) * g(rng);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trajectories

/// Reacted when coordinate `coordinate` lies above (or below) `threshold`.
struct ProductPredicate {
  int coordinate = 0;
  double threshold = 0.0;
  bool above = true;

  bool operator()(std::span<const double> r) const {
    require(coordinate >= 0 && coordinate < static_cast<int>(r.size()), "product predicate: coordinate out of range");
    return above ? r[coordinate] > threshold : r[coordinate] < threshold;
  }
};

struct TrajectoryOptions {
  double dt = kFemtosecond;
  double t_max = 100.0 * kFemtosecond;
  ProductPredicate predicate;
  bool stop_on_reaction = false;
  double eigen_tol = kDefaultEigenTol;
  ForceOptions force;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<std::vector<double>> positions;
  std::vector<std::vector<double>> momenta;
  std::vector<double> energies;  // kinetic + E_g + V_NN
  bool reacted = false;
  std::optional<double> t_rxn;
  bool failed = false;
  std::string failure;

  /// max |E(t) - E(0)| / |E(0)|
  double relative_energy_drift() const {
    if (energies.empty()) return 0.0;
    double worst = 0.0;
    const double scale = std::max(std::abs(energies.front()), 1e-300);
    for (double e : energies) worst = std::max(worst, std::abs(e - energies.front()) / scale);
    return worst;
  }
};

/**
 * Born-Oppenheimer trajectory: the electronic ground state is recomputed
 * at every geometry (warm-started from the previous step), forces come from
 * quantum_force and nuclei advance by velocity Verlet. The product
 * predicate is checked after each step; the first hit sets t_rxn. An
 * eigensolver or force failure marks the record failed and ends it.
 */
inline TrajectoryRecord run_trajectory(const ParameterizedHamiltonian& ph, const PhaseState& init,
                                       std::span<const double> masses, const TrajectoryOptions& opt) {
  require(opt.dt > 0.0 && opt.t_max >= 0.0, "run_trajectory: need dt > 0 and t_max >= 0");
  require(static_cast<int>(init.r.size()) == ph.dim && init.p.size() == init.r.size() &&
              masses.size() == init.r.size(),
          "run_trajectory: initial condition does not match the model dimension");
  TrajectoryRecord rec;
  PhaseState s = init;
  ElectronicState el;
  auto force_at = [&](std::span<const double> r) {
    el = electronic_ground_state(ph.at(r), el.psi.dim() > 0 ? &el.psi : nullptr, opt.eigen_tol);
    return quantum_force(ph, r, el.psi, opt.force);
  };
  auto record = [&](double t) {
    rec.times.push_back(t);
    rec.positions.push_back(s.r);
    rec.momenta.push_back(s.p);
    rec.energies.push_back(kinetic_energy(s, masses) + el.energy + ph.vnn(s.r));
  };
  const long steps = std::lround(std::floor(opt.t_max / opt.dt + 1e-9));
  try {
    std::vector<double> f = force_at(s.r);
    record(0.0);
    for (long n = 1; n <= steps; ++n) {
      verlet_step(s, f, masses, opt.dt, force_at);
      const double t = static_cast<double>(n) * opt.dt;
      record(t);
      if (!rec.reacted && opt.predicate(s.r)) {
        rec.reacted = true;
        rec.t_rxn = t;
        if (opt.stop_on_reaction) break;
      }
    }
  } catch (const Error& e) {
    rec.failed = true;
    rec.failure = e.what();
  }
  return rec;
}

inline std::vector<TrajectoryRecord> run_ensemble(const ParameterizedHamiltonian& ph,
                                                  const std::vector<PhaseState>& inits,
                                                  std::span<const double> masses, const TrajectoryOptions& opt) {
  std::vector<TrajectoryRecord> out;
  out.reserve(inits.size());
  for (const auto& s : inits) out.push_back(run_trajectory(ph, s, masses, opt));
  return out;
}

struct YieldResult {
  double q = 0.0;
  std::optional<double> k;        // absent when nothing reacted
  std::optional<double> mean_t_rxn;
  int n_total = 0;
  int n_failed = 0;
  int n_reacted = 0;
  int n_used() const { return n_total - n_failed; }
};

/// Q = N_reacted / N_completed and k = 1 / <t_rxn>; failed records are
/// excluded and counted.
inline YieldResult yield_and_rate(std::span<const TrajectoryRecord> records) {
  require(!records.empty(), "yield_and_rate: no trajectories");
  YieldResult y;
  y.n_total = static_cast<int>(records.size());
  double sum_t = 0.0;
  for (const auto& r : records) {
    if (r.failed) {
      ++y.n_failed;
      continue;
    }
    if (r.reacted) {
      require(r.t_rxn.has_value(), "yield_and_rate: reacted trajectory without a reaction time");
      ++y.n_reacted;
      sum_t += *r.t_rxn;
    }
  }
  if (y.n_used() == 0) {
    throw NumericalError("yield_and_rate: all " + std::to_string(y.n_total) + " trajectories failed");
  }
  y.q = static_cast<double>(y.n_reacted) / y.n_used();
  if (y.n_reacted > 0) {
    y.mean_t_rxn = sum_t / y.n_reacted;
    y.k = 1.0 / *y.mean_t_rxn;
  }
  return y;
}

}  // namespace qcat
