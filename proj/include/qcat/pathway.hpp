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
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcat/core.hpp"
#include "qcat/fcidump.hpp"
#include "qcat/molecular.hpp"

namespace qcat {

/// One point on a reaction pathway: the reactant "R", transition states
/// "TS1".."TSn", or the product "P".
struct PathwayStation {
  std::string label;
  std::string source;  // integral file; empty when the energy is supplied directly
  std::optional<double> energy;
  double uncertainty = 0.0;

  bool is_transition_state() const { return label.rfind("TS", 0) == 0; }
};

struct Pathway {
  std::string id;
  std::vector<PathwayStation> stations;
};

/// max over TS stations of E_TS - E_R; zero without transition states.
inline double activation_energy(const std::vector<PathwayStation>& stations) {
  require(!stations.empty(), "activation_energy: pathway has no stations");
  if (stations.front().label != "R") {
    throw InvalidInput("activation_energy: first station must be the reactant 'R', got '" +
                       stations.front().label + "'");
  }
  for (const auto& s : stations) {
    if (!s.energy) throw InvalidInput("activation_energy: station '" + s.label + "' has no energy");
  }
  const double er = *stations.front().energy;
  std::optional<double> ea;
  for (const auto& s : stations) {
    if (s.is_transition_state()) ea = std::max(ea.value_or(*s.energy - er), *s.energy - er);
  }
  return ea.value_or(0.0);
}

/// exp(-Ea / (k_B T)); the prefactor is left out, so only ratios carry meaning.
inline double arrhenius_factor(double ea, double temperature) {
  if (!(temperature > 0.0)) {
    throw InvalidInput("arrhenius_factor: temperature must be positive, got " + format_double(temperature));
  }
  return std::exp(-ea / (kBoltzmannHartree * temperature));
}

/// Ground-state energy of each station that names an integral file. The
/// eigenvalue error of a converged pair is bounded by its residual, which
/// is what the uncertainty records (never less than tol).
inline void compute_station_energies(Pathway& p, double tol = kDefaultEigenTol, const std::string& base_dir = "") {
  for (auto& s : p.stations) {
    if (s.energy) {
      s.uncertainty = std::max(s.uncertainty, tol);
      continue;
    }
    require(!s.source.empty(), "station '" + s.label + "' of pathway '" + p.id + "' has neither energy nor integrals");
    std::filesystem::path path(s.source);
    if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
    const auto h = build_molecular_hamiltonian(read_fcidump_file(path.string()));
    const auto sol = solve_electronic(h, 1, tol);
    s.energy = sol.spectrum.eigenvalues[0];
    s.uncertainty = std::max(tol, sol.spectrum.residual_norms[0]);
  }
}

struct CatalystReport {
  std::string catalyst;
  std::map<std::string, double> pathway_ea;
  std::string best_pathway;
  double best_ea = 0.0;
  /// Eₐ is a difference of two energies, so its uncertainty is twice the
  /// per-energy bound.
  double ea_uncertainty = 0.0;
  double temperature = 0.0;
  std::map<std::string, double> rate_factors;  // per pathway
  double relative_rate = 1.0;                  // versus the top-ranked catalyst
  bool unresolved = false;                     // Eₐ gap to a neighbour below the uncertainty
  std::vector<std::string> unresolved_with;
};

struct Catalyst {
  std::string id;
  std::vector<Pathway> pathways;
};

/// Builds the report of one catalyst whose station energies are known.
inline CatalystReport make_catalyst_report(const Catalyst& c, double temperature) {
  require(!c.pathways.empty(), "catalyst '" + c.id + "' has no pathways");
  CatalystReport r;
  r.catalyst = c.id;
  r.temperature = temperature;
  bool first = true;
  for (const auto& p : c.pathways) {
    if (r.pathway_ea.count(p.id)) throw InvalidInput("catalyst '" + c.id + "' lists pathway '" + p.id + "' twice");
    const double ea = activation_energy(p.stations);
    double tau = 0.0;
    for (const auto& s : p.stations) tau = std::max(tau, s.uncertainty);
    r.pathway_ea[p.id] = ea;
    r.rate_factors[p.id] = arrhenius_factor(ea, temperature);
    if (first || ea < r.best_ea || (ea == r.best_ea && p.id < r.best_pathway)) {
      r.best_ea = ea;
      r.best_pathway = p.id;
      r.ea_uncertainty = 2.0 * tau;
      first = false;
    }
  }
  return r;
}

/**
 * Sorts by best-pathway Eₐ (ties broken by catalyst id) and flags every
 * pair of catalysts whose Eₐ values are closer than the larger of their
 * uncertainties as unresolved.
 */
inline std::vector<CatalystReport> rank_catalysts(std::vector<CatalystReport> reports) {
  require(!reports.empty(), "rank_catalysts: no catalysts");
  std::sort(reports.begin(), reports.end(), [](const CatalystReport& a, const CatalystReport& b) {
    if (a.best_ea != b.best_ea) return a.best_ea < b.best_ea;
    return a.catalyst < b.catalyst;
  });
  for (std::size_t i = 1; i < reports.size(); ++i) {
    require(reports[i].catalyst != reports[i - 1].catalyst, "rank_catalysts: duplicate catalyst '" + reports[i].catalyst + "'");
  }
  for (auto& r : reports) {
    r.unresolved = false;
    r.unresolved_with.clear();
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (std::size_t j = i + 1; j < reports.size(); ++j) {
      const double tol = std::max(reports[i].ea_uncertainty, reports[j].ea_uncertainty);
      if (reports[j].best_ea - reports[i].best_ea >= tol) break;
      reports[i].unresolved = reports[j].unresolved = true;
      reports[i].unresolved_with.push_back(reports[j].catalyst);
      reports[j].unresolved_with.push_back(reports[i].catalyst);
    }
  }
  const double top = reports.front().best_ea;
  for (auto& r : reports) {
    r.relative_rate = r.temperature > 0.0 ? std::exp(-(r.best_ea - top) / (kBoltzmannHartree * r.temperature)) : 1.0;
  }
  return reports;
}

// ---------------------------------------------------------------------------
// Manifest and report formats

struct PathwayManifest {
  double temperature = 298.15;
  double tolerance = kDefaultEigenTol;
  std::vector<Catalyst> catalysts;
};

/**
 * {"temperature": K, "tolerance": Ha,
 *  "catalysts": [{"id": .., "pathways": [{"id": .., "stations":
 *      [{"label": "R", "integrals": "file"} | {"label": "TS1", "energy": -1.2}, ...]}]}]}
 */
inline PathwayManifest parse_pathway_manifest(const nlohmann::json& j) {
  PathwayManifest m;
  try {
    m.temperature = j.value("temperature", m.temperature);
    m.tolerance = j.value("tolerance", m.tolerance);
    for (const auto& jc : j.at("catalysts")) {
      Catalyst c;
      c.id = jc.at("id").get<std::string>();
      for (const auto& jp : jc.at("pathways")) {
        Pathway p;
        p.id = jp.at("id").get<std::string>();
        for (const auto& js : jp.at("stations")) {
          PathwayStation s;
          s.label = js.at("label").get<std::string>();
          const bool has_file = js.contains("integrals");
          const bool has_energy = js.contains("energy");
          if (has_file == has_energy) {
            throw InvalidInput("station '" + s.label + "' of " + c.id + "/" + p.id +
                               " needs exactly one of 'integrals' or 'energy'");
          }
          if (has_file) s.source = js.at("integrals").get<std::string>();
          if (has_energy) s.energy = js.at("energy").get<double>();
          p.stations.push_back(std::move(s));
        }
        c.pathways.push_back(std::move(p));
      }
      m.catalysts.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("pathway manifest: ") + e.what());
  }
  if (!(m.temperature > 0.0)) throw InvalidInput("pathway manifest: temperature must be positive");
  if (!(m.tolerance > 0.0)) throw InvalidInput("pathway manifest: tolerance must be positive");
  if (m.catalysts.empty()) throw InvalidInput("pathway manifest: no catalysts");
  return m;
}

/// Computes every missing station energy and ranks the catalysts.
inline std::vector<CatalystReport> evaluate_pathways(PathwayManifest& m, const std::string& base_dir = "") {
  std::vector<CatalystReport> reports;
  for (auto& c : m.catalysts) {
    for (auto& p : c.pathways) compute_station_energies(p, m.tolerance, base_dir);
    reports.push_back(make_catalyst_report(c, m.temperature));
  }
  return rank_catalysts(std::move(reports));
}

inline nlohmann::json report_to_json(const std::vector<CatalystReport>& ranked) {
  nlohmann::json out = nlohmann::json::array();
  int rank = 1;
  for (const auto& r : ranked) {
    nlohmann::json jr;
    jr["rank"] = rank++;
    jr["catalyst"] = r.catalyst;
    jr["best_pathway"] = r.best_pathway;
    jr["best_ea_hartree"] = r.best_ea;
    jr["ea_uncertainty_hartree"] = r.ea_uncertainty;
    jr["temperature_kelvin"] = r.temperature;
    jr["relative_rate"] = r.relative_rate;
    jr["unresolved"] = r.unresolved;
    jr["unresolved_with"] = r.unresolved_with;
    for (const auto& [id, ea] : r.pathway_ea) {
      jr["pathways"][id] = {{"ea_hartree", ea}, {"arrhenius_factor", r.rate_factors.at(id)}};
    }
    out.push_back(jr);
  }
  return out;
}

inline void write_report_csv(std::ostream& os, const std::vector<CatalystReport>& ranked) {
  os << "rank,catalyst,pathway,ea_hartree,arrhenius_factor,best,unresolved\n";
  int rank = 1;
  for (const auto& r : ranked) {
    for (const auto& [id, ea] : r.pathway_ea) {
      os << rank << ',' << r.catalyst << ',' << id << ',' << format_double(ea) << ','
         << format_double(r.rate_factors.at(id)) << ',' << (id == r.best_pathway ? 1 : 0) << ','
         << (r.unresolved ? 1 : 0) << '\n';
    }
    ++rank;
  }
}

}  // namespace qcat
