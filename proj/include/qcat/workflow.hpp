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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcat/core.hpp"
#include "qcat/dvr.hpp"
#include "qcat/eigensolver.hpp"
#include "qcat/fcidump.hpp"
#include "qcat/molecular.hpp"
#include "qcat/nqd.hpp"
#include "qcat/pathway.hpp"
#include "qcat/pauli.hpp"
#include "qcat/pes_io.hpp"
#include "qcat/qmd.hpp"
#include "qcat/resources.hpp"

namespace qcat {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;
namespace fs = std::filesystem;

/// One invocation: the subcommand, its fully merged options and the output
/// directory. Paths inside `options` are absolute by the time it runs.
struct RunConfig {
  std::string subcommand;
  json options = json::object();
  fs::path out_dir;
};

/// Written to <out>/manifest.json on success and on failure. Everything
/// except the wall-clock fields is a pure function of the config.
struct RunManifest {
  std::string subcommand;
  json config = json::object();
  std::vector<std::pair<std::string, double>> stages;  // name, wall seconds
  std::vector<std::string> warnings;
  std::vector<std::string> outputs;
  std::string status = "ok";
  json error;

  json to_json() const {
    json j;
    j["tool"] = "qcat";
    j["version"] = kVersion;
    j["subcommand"] = subcommand;
    j["config"] = config;
    j["status"] = status;
    j["outputs"] = outputs;
    j["warnings"] = warnings;
    json st = json::array();
    for (const auto& [name, sec] : stages) st.push_back({{"stage", name}, {"wall_seconds", sec}});
    j["stages"] = st;
    if (!error.is_null()) j["error"] = error;
    return j;
  }
};

inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::kParse:
    case ErrorKind::kInvalidInput:
      return 2;
    case ErrorKind::kNumerical:
      return 3;
    case ErrorKind::kCapExceeded:
      return 4;
  }
  return 1;
}

inline std::string error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kInvalidInput: return "invalid_input";
    case ErrorKind::kNumerical: return "numerical";
    case ErrorKind::kCapExceeded: return "cap_exceeded";
  }
  return "unknown";
}

inline json error_json(ErrorKind k, const std::string& message) {
  return {{"kind", error_kind_name(k)}, {"message", message}, {"exit_code", exit_code(k)}};
}

// ---------------------------------------------------------------------------
// Option access

namespace detail {

template <class T>
T get_opt(const json& o, const std::string& key, const T& fallback) {
  if (!o.contains(key) || o.at(key).is_null()) return fallback;
  try {
    return o.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError("option '" + key + "' has the wrong type: " + o.at(key).dump());
  }
}

template <class T>
T need_opt(const json& o, const std::string& key, const std::string& ctx) {
  if (!o.contains(key) || o.at(key).is_null()) throw ParseError(ctx + ": missing required option '" + key + "'");
  return get_opt<T>(o, key, T{});
}

inline json read_json_file(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw ParseError("cannot open '" + p.string() + "'");
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ParseError(p.string() + ": " + e.what());
  }
}

inline void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw InvalidInput("cannot write '" + p.string() + "'");
  os << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Resolves a path option against `base` unless it is absolute already.
inline void resolve_path(json& o, const std::string& key, const fs::path& base) {
  if (!o.contains(key) || !o.at(key).is_string()) return;
  fs::path p(o.at(key).get<std::string>());
  if (p.is_relative()) p = base / p;
  o[key] = fs::absolute(p).lexically_normal().string();
}

inline Caps caps_from(const json& o) {
  Caps c = Caps::from_env();
  c.max_qubits = get_opt<int>(o, "max_qubits", c.max_qubits);
  c.max_dim = get_opt<std::int64_t>(o, "max_dim", c.max_dim);
  return c;
}

class StageClock {
 public:
  StageClock(RunManifest& m, std::string name)
      : m_(m), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~StageClock() {
    const auto d = std::chrono::steady_clock::now() - start_;
    m_.stages.emplace_back(name_, std::chrono::duration<double>(d).count());
  }

 private:
  RunManifest& m_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

inline const std::vector<std::string>& path_option_keys() {
  static const std::vector<std::string> keys{"fcidump", "pes", "pauli", "manifest"};
  return keys;
}

/// Makes every path option of a subcommand config absolute, relative to
/// `base`; nested station lists of the QMD station family included.
inline void resolve_paths(json& options, const fs::path& base) {
  for (const auto& k : path_option_keys()) detail::resolve_path(options, k, base);
  if (options.contains("model") && options["model"].contains("stations")) {
    for (auto& s : options["model"]["stations"]) detail::resolve_path(s, "integrals", base);
  }
}

// ---------------------------------------------------------------------------
// Ingestion

inline DvrSystem ingest_pes(const std::string& path, const Caps& caps = default_caps()) {
  return read_pes_file(path, caps);
}

/// Integral file as a spin-orbital Hamiltonian, optionally reduced to the
/// active space {"fermi": .., "window": ..} chosen from the orbital energies.
inline MolecularHamiltonian ingest_fcidump(const std::string& path, const json& active = json()) {
  const IntegralFile f = read_fcidump_file(path);
  MolecularHamiltonian h = build_molecular_hamiltonian(f);
  if (active.is_null()) return h;
  std::vector<double> e(static_cast<std::size_t>(f.norb));
  for (int i = 0; i < f.norb; ++i) {
    auto it = f.orbital_energies.find(i);
    if (it == f.orbital_energies.end()) {
      throw InvalidInput(path + ": active-space selection needs orbital energies for all " + std::to_string(f.norb) +
                         " orbitals");
    }
    e[static_cast<std::size_t>(i)] = it->second;
  }
  ActiveSpace space = select_active_space(e, detail::need_opt<double>(active, "fermi", "active_space"),
                                          detail::need_opt<double>(active, "window", "active_space"));
  return freeze_reduce(h, space);
}

// ---------------------------------------------------------------------------
// Subcommands

namespace cmd {

inline void encode(const RunConfig& rc, RunManifest& m) {
  const json& o = rc.options;
  const Caps caps = detail::caps_from(o);
  const double thr = detail::get_opt<double>(o, "threshold", kDefaultDropThreshold);
  PauliOperator q;
  ResourceReport rep;
  {
    detail::StageClock clk(m, "encode");
    if (o.contains("fcidump")) {
      const auto h = ingest_fcidump(o["fcidump"].get<std::string>(), detail::get_opt<json>(o, "active_space", json()));
      const Encoding e = parse_encoding(detail::get_opt<std::string>(o, "mapping", "jw"));
      q = qubit_hamiltonian(h, e, thr);
      rep = resource_report(encoding_name(e), q);
      const int norb = h.n_spin_orbitals / 2;
      if ((h.n_electrons + h.ms2) % 2 == 0) {
        rep.fci = fci_dimension((h.n_electrons + h.ms2) / 2, (h.n_electrons - h.ms2) / 2, norb);
      }
    } else if (o.contains("pes")) {
      const DvrSystem sys = ingest_pes(o["pes"].get<std::string>(), caps);
      const std::string map = detail::get_opt<std::string>(o, "mapping", "binary");
      const int surface = detail::get_opt<int>(o, "surface", 0);
      if (map == "direct") {
        q = direct_map(sys, surface, thr, caps);
      } else if (map == "binary") {
        q = binary_map(sys, surface, thr, caps);
      } else {
        throw InvalidInput("grid mapping must be 'direct' or 'binary', got '" + map + "'");
      }
      rep = resource_report(map, q);
    } else {
      throw ParseError("encode: give --fcidump or --pes");
    }
  }
  detail::write_text(rc.out_dir / "hamiltonian.pauli", to_text(q));
  detail::write_text(rc.out_dir / "resources.json", detail::dump(to_json(rep)));
  m.outputs = {"hamiltonian.pauli", "resources.json"};
}

inline void eigensolve(const RunConfig& rc, RunManifest& m) {
  const json& o = rc.options;
  const Caps caps = detail::caps_from(o);
  const int k = detail::get_opt<int>(o, "k", 1);
  const double tol = detail::get_opt<double>(o, "tol", kDefaultEigenTol);
  LanczosOptions lo;
  lo.seed = detail::get_opt<std::uint64_t>(o, "seed", kLanczosSeed);
  SpectralResult r;
  json out;
  {
    detail::StageClock clk(m, "eigensolve");
    if (o.contains("fcidump")) {
      const auto h = ingest_fcidump(o["fcidump"].get<std::string>(), detail::get_opt<json>(o, "active_space", json()));
      const auto basis = number_sector_basis(h.n_spin_orbitals, h.n_electrons, Encoding::kJordanWigner);
      require(!basis.empty(), "eigensolve: empty electron-number sector");
      r = solve_sector(qubit_hamiltonian(h, Encoding::kJordanWigner, 0.0), basis, k, tol, caps, lo).spectrum;
      out["source"] = "fcidump";
      out["n_electrons"] = h.n_electrons;
      out["sector_dimension"] = basis.size();
    } else if (o.contains("pauli")) {
      std::ifstream is(o["pauli"].get<std::string>());
      if (!is) throw ParseError("cannot open '" + o["pauli"].get<std::string>() + "'");
      const auto op = read_pauli_operator(is, o["pauli"].get<std::string>());
      r = ground_states(LinearOperator::from_sparse(op_to_matrix(op, caps)), k, tol, lo);
      out["source"] = "pauli";
    } else if (o.contains("pes")) {
      const DvrSystem sys = ingest_pes(o["pes"].get<std::string>(), caps);
      const DvrOperator h(sys, {detail::get_opt<int>(o, "surface", 0)}, caps);
      r = ground_states(h.as_linear_operator(), k, tol, lo);
      out["source"] = "pes";
    } else {
      throw ParseError("eigensolve: give --fcidump, --pauli or --pes");
    }
  }
  out["eigenvalues"] = std::vector<double>(r.eigenvalues.data(), r.eigenvalues.data() + r.eigenvalues.size());
  out["seed"] = lo.seed;
  out["residual_norms"] = std::vector<double>(r.residual_norms.data(), r.residual_norms.data() + r.residual_norms.size());
  out["ground_degeneracy"] = r.ground_degeneracy;
  out["operator_applications"] = r.iterations;
  out["tolerance"] = tol;
  detail::write_text(rc.out_dir / "eigen.json", detail::dump(out));
  m.outputs = {"eigen.json"};
}

inline void pathway(const RunConfig& rc, RunManifest& m) {
  const json& o = rc.options;
  const std::string path = detail::need_opt<std::string>(o, "manifest", "pathway");
  json mj = detail::read_json_file(path);
  if (o.contains("temperature")) mj["temperature"] = o["temperature"];
  if (o.contains("tol")) mj["tolerance"] = o["tol"];
  PathwayManifest pm = parse_pathway_manifest(mj);
  std::vector<CatalystReport> ranked;
  {
    detail::StageClock clk(m, "station_energies_and_ranking");
    ranked = evaluate_pathways(pm, fs::path(path).parent_path().string());
  }
  for (const auto& r : ranked) {
    if (r.unresolved) {
      std::string with;
      for (const auto& w : r.unresolved_with) with += (with.empty() ? "" : ", ") + w;
      m.warnings.push_back("ranking of " + r.catalyst + " unresolved against " + with +
                           " (activation-energy gap below " + format_double(r.ea_uncertainty) + " Hartree)");
    }
  }
  json rep;
  rep["temperature_kelvin"] = pm.temperature;
  rep["tolerance_hartree"] = pm.tolerance;
  rep["ranking"] = report_to_json(ranked);
  detail::write_text(rc.out_dir / "report.json", detail::dump(rep));
  std::ostringstream csv;
  write_report_csv(csv, ranked);
  detail::write_text(rc.out_dir / "report.csv", csv.str());
  m.outputs = {"report.json", "report.csv"};
}

inline ParameterizedHamiltonian qmd_model(const json& model) {
  const std::string fam = detail::get_opt<std::string>(model, "family", "hubbard_dimer");
  if (fam == "hubbard_dimer") {
    HubbardDimerModel p;
    p.t0 = detail::get_opt<double>(model, "t0", p.t0);
    p.alpha = detail::get_opt<double>(model, "alpha", p.alpha);
    p.u = detail::get_opt<double>(model, "u", p.u);
    p.z = detail::get_opt<double>(model, "z", p.z);
    return hubbard_dimer_family(p);
  }
  if (fam == "stations") {
    std::map<double, MolecularHamiltonian> st;
    for (const auto& s : detail::need_opt<json>(model, "stations", "qmd model")) {
      st.emplace(detail::need_opt<double>(s, "R", "station"),
                 ingest_fcidump(detail::need_opt<std::string>(s, "integrals", "station")));
    }
    return station_family(std::move(st));
  }
  throw InvalidInput("unknown QMD model family '" + fam + "' (expected hubbard_dimer or stations)");
}

inline void qmd(const RunConfig& rc, RunManifest& m) {
  const json& o = rc.options;
  const auto ph = qmd_model(detail::get_opt<json>(o, "model", json::object()));
  const auto masses = detail::get_opt<std::vector<double>>(o, "masses", std::vector<double>(ph.dim, 918.0));
  const json init = detail::get_opt<json>(o, "initial", json::object());
  PositionSpec pos{detail::get_opt<std::vector<double>>(init, "center", std::vector<double>(ph.dim, 1.0)),
                   detail::get_opt<std::vector<double>>(init, "widths", {})};
  TrajectoryOptions topt;
  topt.dt = detail::get_opt<double>(o, "dt", kFemtosecond);
  topt.t_max = detail::get_opt<double>(o, "t_max", 1000.0 * topt.dt);
  topt.eigen_tol = detail::get_opt<double>(o, "tol", kDefaultEigenTol);
  topt.stop_on_reaction = detail::get_opt<bool>(o, "stop_on_reaction", false);
  const json pred = detail::get_opt<json>(o, "predicate", json::object());
  topt.predicate.coordinate = detail::get_opt<int>(pred, "coordinate", 0);
  topt.predicate.threshold = detail::need_opt<double>(pred, "threshold", "qmd predicate");
  const std::string dir = detail::get_opt<std::string>(pred, "direction", "above");
  if (dir != "above" && dir != "below") throw InvalidInput("predicate direction must be 'above' or 'below'");
  topt.predicate.above = dir == "above";

  std::vector<PhaseState> inits;
  std::vector<TrajectoryRecord> recs;
  {
    detail::StageClock clk(m, "sample");
    inits = sample_initial_conditions(detail::get_opt<double>(o, "temperature", 300.0), masses, pos,
                                      detail::get_opt<int>(o, "count", 100),
                                      detail::get_opt<std::uint64_t>(o, "seed", 1));
  }
  {
    detail::StageClock clk(m, "trajectories");
    recs = run_ensemble(ph, inits, masses, topt);
  }
  const YieldResult y = yield_and_rate(recs);
  double drift = 0.0;
  json failures = json::array();
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (recs[i].failed) {
      failures.push_back({{"trajectory", i}, {"reason", recs[i].failure}});
    } else {
      drift = std::max(drift, recs[i].relative_energy_drift());
    }
  }
  if (y.n_failed > 0) {
    m.warnings.push_back(std::to_string(y.n_failed) + " of " + std::to_string(y.n_total) +
                         " trajectories failed and were excluded");
  }
  json s;
  s["Q"] = y.q;
  s["k_defined"] = y.k.has_value();
  s["k"] = y.k ? json(*y.k) : json();
  s["mean_t_rxn"] = y.mean_t_rxn ? json(*y.mean_t_rxn) : json();
  s["n_total"] = y.n_total;
  s["n_reacted"] = y.n_reacted;
  s["n_failed"] = y.n_failed;
  s["failures"] = failures;
  s["max_relative_energy_drift"] = drift;
  s["seed"] = detail::get_opt<std::uint64_t>(o, "seed", 1);
  detail::write_text(rc.out_dir / "summary.json", detail::dump(s));
  m.outputs = {"summary.json"};
  if (detail::get_opt<bool>(o, "dump_trajectories", false)) {
    std::ostringstream csv;
    csv << "trajectory,t";
    for (int a = 0; a < ph.dim; ++a) csv << ",R" << a;
    for (int a = 0; a < ph.dim; ++a) csv << ",P" << a;
    csv << ",E_total\n";
    for (std::size_t i = 0; i < recs.size(); ++i) {
      for (std::size_t n = 0; n < recs[i].times.size(); ++n) {
        csv << i << ',' << format_double(recs[i].times[n]);
        for (double v : recs[i].positions[n]) csv << ',' << format_double(v);
        for (double v : recs[i].momenta[n]) csv << ',' << format_double(v);
        csv << ',' << format_double(recs[i].energies[n]) << '\n';
      }
    }
    detail::write_text(rc.out_dir / "trajectories.csv", csv.str());
    m.outputs.push_back("trajectories.csv");
  }
}

inline void nqd(const RunConfig& rc, RunManifest& m) {
  const json& o = rc.options;
  const Caps caps = detail::caps_from(o);
  auto sys = std::make_shared<const DvrSystem>(ingest_pes(detail::need_opt<std::string>(o, "pes", "nqd"), caps));
  const json init = detail::get_opt<json>(o, "initial", json::object());
  const std::string type = detail::get_opt<std::string>(init, "type", "gaussian");
  Wavepacket wp;
  if (type == "gaussian") {
    const auto c = detail::need_opt<std::vector<double>>(init, "center", "nqd initial");
    const auto w = detail::need_opt<std::vector<double>>(init, "widths", "nqd initial");
    const auto k = detail::get_opt<std::vector<double>>(init, "momenta", std::vector<double>(c.size(), 0.0));
    wp = gaussian_packet(sys, detail::get_opt<int>(init, "surface", 0), c, w, k,
                         detail::get_opt<bool>(o, "strict", true), caps);
  } else if (type == "franck_condon") {
    wp = franck_condon_initial(sys, detail::get_opt<int>(init, "target", 1), detail::get_opt<double>(o, "tol", kDefaultEigenTol), caps);
  } else {
    throw InvalidInput("initial packet type must be 'gaussian' or 'franck_condon', got '" + type + "'");
  }
  for (const auto& w : wp.warnings) m.warnings.push_back(w);
  const json dsj = detail::get_opt<json>(o, "dividing_surface", json::object());
  DividingSurface ds;
  ds.axis = detail::get_opt<int>(dsj, "axis", 0);
  ds.threshold = detail::need_opt<double>(dsj, "threshold", "dividing_surface");
  const std::string side = detail::get_opt<std::string>(dsj, "product", "above");
  if (side != "above" && side != "below") throw InvalidInput("dividing_surface.product must be 'above' or 'below'");
  ds.product_above = side == "above";
  ds.last_below(sys->grid);

  PropagationOptions popt;
  popt.method = parse_propagation_method(detail::get_opt<std::string>(o, "method", "exact_krylov"));
  popt.leak_threshold = detail::get_opt<double>(o, "leak_threshold", 1e-4);
  const std::string flux_name = detail::get_opt<std::string>(o, "flux", "exact");
  if (flux_name != "exact" && flux_name != "centered") throw InvalidInput("flux must be 'exact' or 'centered'");
  const FluxMethod fm = flux_name == "exact" ? FluxMethod::kExact : FluxMethod::kCenteredDifference;
  const double dt = detail::need_opt<double>(o, "dt", "nqd");
  const int steps = detail::get_opt<int>(o, "steps", 100);

  NqdSeries series;
  std::ostringstream csv;
  csv << "t,Q,J,norm";
  for (int s = 0; s < sys->n_surfaces(); ++s) csv << ",population_" << s;
  csv << '\n';
  const Propagator prop(sys, dt, popt, caps);
  const double e0 = prop.energy(wp);
  Wavepacket final_wp;
  {
    detail::StageClock clk(m, "propagate");
    final_wp = propagate(wp, dt, steps, popt, [&](const Wavepacket& w) {
      const double q = product_probability(w, ds);
      const double j = probability_flux(w, ds, fm);
      series.times.push_back(w.time);
      series.product.push_back(q);
      series.flux.push_back(j);
      csv << format_double(w.time) << ',' << format_double(q) << ',' << format_double(j) << ','
          << format_double(w.norm());
      for (int s = 0; s < sys->n_surfaces(); ++s) csv << ',' << format_double(w.population(s));
      csv << '\n';
    }, caps);
  }
  const double rho = detail::get_opt<double>(o, "reactant_density", 1.0 - series.product.front());
  json s;
  s["Q_initial"] = series.product.front();
  s["Q_final"] = series.product.back();
  s["delta_Q"] = series.product.back() - series.product.front();
  s["integrated_flux"] = integrated_flux(series);
  s["reactant_density"] = rho;
  s["k"] = steps > 0 ? json(nqd_rate(series, rho)) : json();
  s["norm_final"] = final_wp.norm();
  s["energy_initial"] = e0;
  s["energy_final"] = prop.energy(final_wp);
  s["method"] = propagation_method_name(popt.method);
  s["flux"] = flux_name;
  detail::write_text(rc.out_dir / "series.csv", csv.str());
  detail::write_text(rc.out_dir / "summary.json", detail::dump(s));
  m.outputs = {"series.csv", "summary.json"};
}

/// Production-scale resource table plus optional term statistics of one system.
inline json resource_tables(const json& o, std::string& markdown) {
  const int points = detail::get_opt<int>(o, "points", 256);
  const int bond = detail::get_opt<int>(o, "bond_dimension", 5000);
  const int bytes = detail::get_opt<int>(o, "bytes_per_amplitude", 16);
  json j;
  json elec = json::array();
  const std::vector<std::tuple<std::string, int, int>> spaces{
      {"water oxidation (48e, 32o)", 48, 32}, {"CO2 reduction (45e, 35o)", 45, 35}};
  std::ostringstream md;
  md << "## Electronic structure (Applications 1 and 2)\n\n"
     << "| System | Qubits (JW) | FCI dimension | DMRG N*D^3 | DMRG memory |\n|---|---|---|---|---|\n";
  for (const auto& [name, ne, norb] : spaces) {
    const int na = (ne + 1) / 2, nb = ne / 2;
    const auto fci = fci_dimension(na, nb, norb);
    const auto d = dmrg_cost(2 * norb, bond, bytes);
    elec.push_back({{"system", name},
                    {"qubits", qubit_count(QubitKind::kJwSpinOrbitals, norb)},
                    {"fci_dimension", big_to_string(fci)},
                    {"dmrg_n_d3", big_to_string(d.scale)},
                    {"dmrg_memory_bytes", big_to_string(d.memory_bytes)}});
    md << "| " << name << " | " << qubit_count(QubitKind::kJwSpinOrbitals, norb) << " | " << big_to_sci(fci)
       << " | " << big_to_sci(d.scale) << " | " << big_to_sci(d.memory_bytes) << " B |\n";
  }
  md << "\nDMRG memory assumes bond dimension " << bond << " and " << bytes << " bytes per amplitude.\n";
  md << "Target size: 650 spin orbitals -> " << qubit_count(QubitKind::kJwSpinOrbitals, 325) << " qubits.\n\n";
  j["electronic"] = elec;
  j["dmrg_assumptions"] = {{"bond_dimension", bond}, {"bytes_per_amplitude", bytes}};

  json nuc = json::array();
  md << "## Nuclear quantum dynamics (Application 3), " << points << " grid points per dimension\n\n"
     << "| Dimensions | Grid points | Direct qubits | Binary qubits |\n|---|---|---|---|\n";
  for (int dims : {15, 21, 72, 90}) {
    BigInt g = 1;
    for (int i = 0; i < dims; ++i) g *= points;
    nuc.push_back({{"dimensions", dims},
                   {"grid_points", big_to_string(g)},
                   {"direct_qubits", qubit_count(QubitKind::kDvrDirect, dims, points)},
                   {"binary_qubits", qubit_count(QubitKind::kDvrBinary, dims, points)}});
    md << "| " << dims << " | " << big_to_sci(g) << " | " << qubit_count(QubitKind::kDvrDirect, dims, points)
       << " | " << qubit_count(QubitKind::kDvrBinary, dims, points) << " |\n";
  }
  j["nuclear"] = nuc;

  md << "\n## Requirements summary\n\n"
     << "| Application | Model type | Size (min / target) | Interaction structure | Computational target | Accuracy |\n"
     << "|---|---|---|---|---|---|\n"
     << "| 1 Reaction-pathway energetics | Fermionic Hamiltonian | 64 / 650 spin orbitals | Sparse irregular | Ground state | 1 mHartree |\n"
     << "| 2 Quantum molecular dynamics | Fermionic Hamiltonian | 64 / 650 spin orbitals | Sparse irregular | Ground state and forces | 1 mHartree |\n"
     << "| 3 Nuclear quantum dynamics | Nuclear Hamiltonian and PES | 15 / 90 dimensions | Sparse irregular | Reaction probability and rate | 10% in rate |\n";
  markdown = md.str();
  return j;
}

inline void resources(const RunConfig& rc, RunManifest& m) {
  const json& o = rc.options;
  std::string md;
  json j;
  {
    detail::StageClock clk(m, "resources");
    j = resource_tables(o, md);
    if (o.contains("fcidump")) {
      const auto h = ingest_fcidump(o["fcidump"].get<std::string>(), detail::get_opt<json>(o, "active_space", json()));
      const Encoding e = parse_encoding(detail::get_opt<std::string>(o, "mapping", "jw"));
      auto rep = resource_report(encoding_name(e), qubit_hamiltonian(h, e, detail::get_opt<double>(o, "threshold", kDefaultDropThreshold)));
      if ((h.n_electrons + h.ms2) % 2 == 0) {
        rep.fci = fci_dimension((h.n_electrons + h.ms2) / 2, (h.n_electrons - h.ms2) / 2, h.n_spin_orbitals / 2);
      }
      j["system"] = to_json(rep);
      std::ostringstream s;
      s << "\n## Input system (" << rep.mapping << ")\n\n| Qubits | Pauli terms | Two-qubit gates per Trotter step | Rotations |\n"
        << "|---|---|---|---|\n| " << rep.qubits << " | " << rep.terms << " | " << rep.trotter.two_qubit << " | "
        << rep.trotter.rotations << " |\n";
      md += s.str();
    }
  }
  detail::write_text(rc.out_dir / "resources.json", detail::dump(j));
  detail::write_text(rc.out_dir / "resources.md", md);
  m.outputs = {"resources.json", "resources.md"};
  if (!detail::get_opt<bool>(o, "quiet", false)) std::cout << md;
}

}  // namespace cmd

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"encode", "eigensolve", "pathway", "qmd", "nqd", "resources"};
  return s;
}

/**
 * Runs one subcommand and always leaves <out>/manifest.json behind.
 * Returns the process exit status; on failure the error JSON is also
 * printed to `err`.
 */
inline int execute(RunConfig rc, std::ostream& err = std::cerr) {
  RunManifest m;
  m.subcommand = rc.subcommand;
  m.config = rc.options;
  int status = 0;
  try {
    if (std::find(subcommands().begin(), subcommands().end(), rc.subcommand) == subcommands().end()) {
      throw ParseError("unknown subcommand '" + rc.subcommand + "'");
    }
    require(!rc.out_dir.empty(), "no output directory");
    fs::create_directories(rc.out_dir);
    if (rc.subcommand == "encode") cmd::encode(rc, m);
    else if (rc.subcommand == "eigensolve") cmd::eigensolve(rc, m);
    else if (rc.subcommand == "pathway") cmd::pathway(rc, m);
    else if (rc.subcommand == "qmd") cmd::qmd(rc, m);
    else if (rc.subcommand == "nqd") cmd::nqd(rc, m);
    else cmd::resources(rc, m);
  } catch (const Error& e) {
    m.status = "error";
    m.error = error_json(e.kind(), e.what());
    status = exit_code(e.kind());
  } catch (const json::exception& e) {
    m.status = "error";
    m.error = error_json(ErrorKind::kParse, e.what());
    status = 2;
  } catch (const fs::filesystem_error& e) {
    m.status = "error";
    m.error = error_json(ErrorKind::kInvalidInput, e.what());
    status = 2;
  }
  if (status != 0) err << json{{"error", m.error}}.dump() << '\n';
  if (!rc.out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(rc.out_dir, ec);
    if (!ec) detail::write_text(rc.out_dir / "manifest.json", detail::dump(m.to_json()));
  }
  return status;
}

}  // namespace qcat
