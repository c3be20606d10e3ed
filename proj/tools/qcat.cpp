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


#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qcat/workflow.hpp"

namespace {

using qcat::json;
namespace fs = std::filesystem;

struct Flags {
  json values = json::object();
  std::vector<std::string> paths;  // keys whose values are paths relative to the working directory
};

void add_string(CLI::App* app, Flags& f, const std::string& flag, const std::string& key, const std::string& help,
                bool is_path = false) {
  app->add_option_function<std::string>(flag, [&f, key](const std::string& v) { f.values[key] = v; }, help);
  if (is_path) f.paths.push_back(key);
}

template <class T>
void add_value(CLI::App* app, Flags& f, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_option_function<T>(flag, [&f, key](const T& v) { f.values[key] = v; }, help);
}

void add_bool(CLI::App* app, Flags& f, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_flag_function(flag, [&f, key](std::int64_t) { f.values[key] = true; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcat: quantum-chemistry and catalysis workflows at desk scale"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qcat::kVersion);

  std::string config_path;
  std::string out_dir;
  std::map<std::string, Flags> flags;
  std::map<std::string, CLI::App*> subs;

  auto make = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--config", config_path, "JSON config, or a manifest.json from an earlier run");
    s->add_option("--out", out_dir, "output directory (default: qcat-<subcommand>)");
    Flags& f = flags[name];
    add_value<std::uint64_t>(s, f, "--seed", "seed", "random seed");
    add_value<double>(s, f, "--tol", "tol", "eigensolver residual tolerance (Hartree)");
    add_value<int>(s, f, "--max-qubits", "max_qubits", "qubit cap for dense/sparse matrices");
    add_value<std::int64_t>(s, f, "--max-dim", "max_dim", "dimension cap for state vectors");
    subs[name] = s;
    return s;
  };

  {
    auto* s = make("encode", "map an electronic or grid Hamiltonian to qubits");
    Flags& f = flags["encode"];
    add_string(s, f, "--fcidump", "fcidump", "integral file", true);
    add_string(s, f, "--pes", "pes", "potential energy surface grid file", true);
    add_string(s, f, "--mapping", "mapping", "jw | bk | parity (electrons), direct | binary (grids)");
    add_value<double>(s, f, "--threshold", "threshold", "drop Pauli terms below this magnitude");
    add_value<int>(s, f, "--surface", "surface", "surface index for grid encodings");
  }
  {
    auto* s = make("eigensolve", "lowest eigenpairs of a Hamiltonian");
    Flags& f = flags["eigensolve"];
    add_string(s, f, "--fcidump", "fcidump", "integral file", true);
    add_string(s, f, "--pauli", "pauli", "Pauli operator text file", true);
    add_string(s, f, "--pes", "pes", "potential energy surface grid file", true);
    add_value<int>(s, f, "-k,--k", "k", "number of eigenpairs");
    add_value<int>(s, f, "--surface", "surface", "surface index for grid Hamiltonians");
  }
  {
    auto* s = make("pathway", "activation energies and catalyst ranking");
    Flags& f = flags["pathway"];
    add_string(s, f, "--manifest", "manifest", "pathway manifest (JSON)", true);
    add_value<double>(s, f, "--temperature", "temperature", "temperature (K)");
  }
  {
    auto* s = make("qmd", "Born-Oppenheimer trajectory ensemble");
    Flags& f = flags["qmd"];
    add_value<int>(s, f, "--count", "count", "number of trajectories");
    add_value<double>(s, f, "--temperature", "temperature", "temperature (K)");
    add_value<double>(s, f, "--dt", "dt", "time step (atomic units)");
    add_value<double>(s, f, "--t-max", "t_max", "trajectory length (atomic units)");
    add_bool(s, f, "--dump-trajectories", "dump_trajectories", "write trajectories.csv");
  }
  {
    auto* s = make("nqd", "nuclear wavepacket dynamics");
    Flags& f = flags["nqd"];
    add_string(s, f, "--pes", "pes", "potential energy surface grid file", true);
    add_value<double>(s, f, "--dt", "dt", "time step (atomic units)");
    add_value<int>(s, f, "--steps", "steps", "number of steps");
    add_string(s, f, "--method", "method", "exact_krylov | trotter2");
    add_string(s, f, "--flux", "flux", "exact | centered");
    add_bool(s, f, "--lenient", "lenient", "warn instead of failing on truncated initial packets");
  }
  {
    auto* s = make("resources", "qubit counts and classical cost comparators");
    Flags& f = flags["resources"];
    add_string(s, f, "--fcidump", "fcidump", "integral file to analyse", true);
    add_string(s, f, "--mapping", "mapping", "jw | bk | parity");
    add_value<int>(s, f, "--points", "points", "grid points per nuclear dimension");
    add_value<int>(s, f, "--bond-dimension", "bond_dimension", "DMRG bond dimension");
    add_value<int>(s, f, "--bytes-per-amplitude", "bytes_per_amplitude", "bytes per stored amplitude");
    add_bool(s, f, "--quiet", "quiet", "do not print the table");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help() << '\n';
    std::cerr << json{{"error", qcat::error_json(qcat::ErrorKind::kParse, e.what())}}.dump() << '\n';
    return 2;
  }

  qcat::RunConfig rc;
  for (const auto& [name, s] : subs) {
    if (s->parsed()) rc.subcommand = name;
  }
  Flags& f = flags[rc.subcommand];
  try {
    if (!config_path.empty()) {
      json cfg = qcat::detail::read_json_file(config_path);
      if (cfg.contains("tool") && cfg.contains("config") && cfg.contains("subcommand")) {
        if (cfg["subcommand"] != rc.subcommand) {
          throw qcat::InvalidInput("manifest records subcommand '" + cfg["subcommand"].get<std::string>() +
                                   "', not '" + rc.subcommand + "'");
        }
        cfg = cfg["config"];
      }
      if (!cfg.is_object()) throw qcat::ParseError(config_path + ": config must be a JSON object");
      qcat::resolve_paths(cfg, fs::absolute(config_path).parent_path());
      rc.options = cfg;
    }
    for (const auto& key : f.paths) qcat::detail::resolve_path(f.values, key, fs::current_path());
    if (f.values.contains("lenient")) {
      f.values.erase("lenient");
      f.values["strict"] = false;
    }
    rc.options.update(f.values);
  } catch (const qcat::Error& e) {
    std::cerr << json{{"error", qcat::error_json(e.kind(), e.what())}}.dump() << '\n';
    return qcat::exit_code(e.kind());
  }
  rc.out_dir = out_dir.empty() ? fs::path("qcat-" + rc.subcommand) : fs::path(out_dir);
  return qcat::execute(rc);
}
