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
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qcat/core.hpp"
#include "qcat/pauli.hpp"

namespace qcat {

/// How the two-electron values in an integral file are indexed.
/// kChemist: (pq|rs) = <pr|qs>, the FCIDUMP default.
/// kPhysicist: <pq|rs>, selected by CONVENTION='PHYSICIST' in the namelist.
enum class IntegralConvention { kChemist, kPhysicist };

/**
 * Spatial-orbital integrals as read from an FCIDUMP-style file.
 *
 * Indices are stored zero-based. Two-electron entries are kept exactly as
 * listed (after conversion to chemist order); consumers expand the
 * eight-fold permutational symmetry of real orbitals.
 */
struct IntegralFile {
  int norb = 0;
  int nelec = 0;
  int ms2 = 0;
  std::vector<int> orbsym;
  IntegralConvention convention = IntegralConvention::kChemist;
  double core_energy = 0.0;
  std::map<std::array<int, 2>, double> one_body;   // (p, q) as listed
  std::map<std::array<int, 4>, double> two_body;   // chemist (pq|rs)
  std::map<int, double> orbital_energies;          // "e i 0 0 0" lines
};

namespace detail {

inline std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

/// Accepts Fortran exponents: 1.0D-03 reads as 1e-3.
inline double parse_fortran_double(std::string tok) {
  for (char& c : tok) {
    if (c == 'D' || c == 'd') c = 'E';
  }
  std::size_t used = 0;
  const double v = std::stod(tok, &used);
  if (used != tok.size()) throw std::invalid_argument(tok);
  return v;
}

inline std::map<std::string, std::vector<std::string>> parse_namelist(const std::string& body) {
  // body has the leading &FCI and trailing &END or / removed.
  std::map<std::string, std::vector<std::string>> out;
  std::vector<std::pair<std::size_t, std::size_t>> keys;  // (start, '=' position)
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '=') continue;
    std::size_t e = i;
    while (e > 0 && std::isspace(static_cast<unsigned char>(body[e - 1]))) --e;
    std::size_t s = e;
    while (s > 0 && (std::isalnum(static_cast<unsigned char>(body[s - 1])) || body[s - 1] == '_')) --s;
    if (s == e) throw std::invalid_argument("namelist '=' without a key");
    keys.emplace_back(s, i);
  }
  for (std::size_t k = 0; k < keys.size(); ++k) {
    const auto [s, eq] = keys[k];
    std::size_t key_end = eq;
    while (key_end > s && std::isspace(static_cast<unsigned char>(body[key_end - 1]))) --key_end;
    const std::string key = upper(body.substr(s, key_end - s));
    const std::size_t vend = k + 1 < keys.size() ? keys[k + 1].first : body.size();
    std::string raw = body.substr(eq + 1, vend - eq - 1);
    std::vector<std::string> vals;
    std::string cur;
    for (char c : raw) {
      if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
        if (!cur.empty()) vals.push_back(cur);
        cur.clear();
      } else if (c != '\'' && c != '"') {
        cur += c;
      }
    }
    if (!cur.empty()) vals.push_back(cur);
    out[key] = vals;
  }
  return out;
}

}  // namespace detail

inline IntegralFile read_fcidump(std::istream& is, const std::string& source = "<fcidump>") {
  IntegralFile f;
  std::string line;
  std::size_t lineno = 0;
  std::string header;
  bool in_header = false;
  bool header_done = false;
  while (!header_done && std::getline(is, line)) {
    ++lineno;
    std::string u = detail::upper(line);
    if (!in_header) {
      const auto pos = u.find("&FCI");
      if (pos == std::string::npos) {
        if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw ParseError(source, lineno, "expected '&FCI' namelist header");
      }
      in_header = true;
      u = u.substr(pos + 4);
      line = line.substr(pos + 4);
    }
    std::size_t end = u.find("&END");
    if (end == std::string::npos) {
      const auto slash = u.find('/');
      if (slash != std::string::npos) end = slash;
    }
    if (end != std::string::npos) {
      header += line.substr(0, end);
      header_done = true;
    } else {
      header += line + " ";
    }
  }
  if (!header_done) throw ParseError(source, lineno, "unterminated &FCI namelist");

  std::map<std::string, std::vector<std::string>> nl;
  try {
    nl = detail::parse_namelist(header);
  } catch (const std::exception& e) {
    throw ParseError(source, lineno, std::string("bad namelist: ") + e.what());
  }
  auto get_int = [&](const std::string& key, bool required, int fallback) {
    auto it = nl.find(key);
    if (it == nl.end() || it->second.empty()) {
      if (required) throw ParseError(source, lineno, "namelist is missing " + key);
      return fallback;
    }
    try {
      return std::stoi(it->second.front());
    } catch (const std::exception&) {
      throw ParseError(source, lineno, "bad integer for " + key);
    }
  };
  f.norb = get_int("NORB", true, 0);
  f.nelec = get_int("NELEC", true, 0);
  f.ms2 = get_int("MS2", false, 0);
  if (f.norb <= 0) throw ParseError(source, lineno, "NORB must be positive");
  if (f.nelec < 0 || f.nelec > 2 * f.norb) {
    throw ParseError(source, lineno, "NELEC=" + std::to_string(f.nelec) + " does not fit in " +
                                         std::to_string(f.norb) + " orbitals");
  }
  if (auto it = nl.find("ORBSYM"); it != nl.end()) {
    for (const auto& v : it->second) f.orbsym.push_back(std::stoi(v));
  }
  if (auto it = nl.find("CONVENTION"); it != nl.end() && !it->second.empty()) {
    const std::string c = detail::upper(it->second.front());
    if (c == "PHYSICIST") {
      f.convention = IntegralConvention::kPhysicist;
    } else if (c != "CHEMIST") {
      throw ParseError(source, lineno, "unknown CONVENTION '" + it->second.front() + "'");
    }
  }

  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string vtok;
    if (!(ls >> vtok)) continue;
    int idx[4];
    if (!(ls >> idx[0] >> idx[1] >> idx[2] >> idx[3])) {
      throw ParseError(source, lineno, "expected 'value p q r s'");
    }
    std::string extra;
    if (ls >> extra) throw ParseError(source, lineno, "trailing text '" + extra + "'");
    double v = 0.0;
    try {
      v = detail::parse_fortran_double(vtok);
    } catch (const std::exception&) {
      throw ParseError(source, lineno, "bad number '" + vtok + "'");
    }
    for (int k = 0; k < 4; ++k) {
      if (idx[k] < 0 || idx[k] > f.norb) {
        throw ParseError(source, lineno, "orbital index " + std::to_string(idx[k]) +
                                             " outside 1.." + std::to_string(f.norb));
      }
    }
    const int p = idx[0] - 1, q = idx[1] - 1, r = idx[2] - 1, s = idx[3] - 1;
    if (idx[0] == 0 && idx[1] == 0 && idx[2] == 0 && idx[3] == 0) {
      f.core_energy = v;
    } else if (idx[1] == 0 && idx[2] == 0 && idx[3] == 0) {
      f.orbital_energies[p] = v;
    } else if (idx[2] == 0 && idx[3] == 0) {
      if (idx[0] == 0 || idx[1] == 0) throw ParseError(source, lineno, "malformed one-body index");
      f.one_body[{p, q}] = v;
    } else {
      if (idx[0] == 0 || idx[1] == 0 || idx[2] == 0 || idx[3] == 0) {
        throw ParseError(source, lineno, "malformed two-body index");
      }
      if (f.convention == IntegralConvention::kPhysicist) {
        f.two_body[{p, r, q, s}] = v;  // <pq|rs> = (pr|qs)
      } else {
        f.two_body[{p, q, r, s}] = v;
      }
    }
  }
  return f;
}

inline IntegralFile read_fcidump_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open integral file '" + path + "'");
  return read_fcidump(is, path);
}

/// Writes FCIDUMP text in the file's declared convention; read_fcidump
/// reproduces every field.
inline void write_fcidump(std::ostream& os, const IntegralFile& f) {
  const bool phys = f.convention == IntegralConvention::kPhysicist;
  os << "&FCI NORB=" << f.norb << ",NELEC=" << f.nelec << ",MS2=" << f.ms2 << ",\n";
  if (!f.orbsym.empty()) {
    os << " ORBSYM=";
    for (int s : f.orbsym) os << s << ',';
    os << '\n';
  }
  if (phys) os << " CONVENTION='PHYSICIST',\n";
  os << "&END\n";
  for (const auto& [k, v] : f.two_body) {
    // chemist (pq|rs) is physicist <pr|qs>
    const std::array<int, 4> out = phys ? std::array<int, 4>{k[0], k[2], k[1], k[3]} : k;
    os << format_double(v) << ' ' << out[0] + 1 << ' ' << out[1] + 1 << ' ' << out[2] + 1 << ' '
       << out[3] + 1 << '\n';
  }
  for (const auto& [k, v] : f.one_body) {
    os << format_double(v) << ' ' << k[0] + 1 << ' ' << k[1] + 1 << " 0 0\n";
  }
  for (const auto& [i, v] : f.orbital_energies) os << format_double(v) << ' ' << i + 1 << " 0 0 0\n";
  os << format_double(f.core_energy) << " 0 0 0 0\n";
}

}  // namespace qcat
