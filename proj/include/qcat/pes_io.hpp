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

// PES grid files.
//
//   dims=M
//   axis 0: L x_min dx mass
//   ...
//   surfaces=S
//   couplings=yes          (optional)
//   <one line per grid point, last axis fastest>
//
// Each body line holds the S surface energies followed, when couplings are
// present, by V_IJ for I < J in the order (0,1), (0,2), ..., (1,2), ...
// Lines starting with '#' and blank lines are ignored.

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qcat/dvr.hpp"

namespace qcat {

namespace detail {

inline bool parse_double_token(const std::string& tok, double& v) {
  const char* b = tok.data();
  const char* e = b + tok.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  return ec == std::errc() && ptr == e;
}

inline std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline DvrSystem read_pes(std::istream& is, const std::string& source = "<pes>",
                          const Caps& caps = default_caps()) {
  std::size_t lineno = 0;
  std::string line;
  auto next = [&]() -> bool {
    while (std::getline(is, line)) {
      ++lineno;
      line = detail::strip(line);
      if (!line.empty() && line[0] != '#') return true;
    }
    return false;
  };
  auto header_value = [&](const std::string& key) -> std::string {
    if (!next()) throw ParseError(source, lineno, "unexpected end of file, expected '" + key + "='");
    const std::string prefix = key + "=";
    if (line.rfind(prefix, 0) != 0) throw ParseError(source, lineno, "expected '" + prefix + "'");
    return detail::strip(line.substr(prefix.size()));
  };
  auto to_int = [&](const std::string& s, const std::string& what) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ParseError(source, lineno, "bad integer for " + what + ": '" + s + "'");
    }
    return v;
  };

  DvrSystem sys;
  const int dims = to_int(header_value("dims"), "dims");
  if (dims < 1) throw ParseError(source, lineno, "dims must be at least 1");
  for (int a = 0; a < dims; ++a) {
    if (!next()) throw ParseError(source, lineno, "missing axis " + std::to_string(a));
    std::istringstream ls(line);
    std::string word, label;
    ls >> word >> label;
    if (word != "axis" || label != std::to_string(a) + ":") {
      throw ParseError(source, lineno, "expected 'axis " + std::to_string(a) + ": L x_min dx mass'");
    }
    DvrAxis ax;
    std::string sl, sx, sd, sm, extra;
    if (!(ls >> sl >> sx >> sd >> sm) || (ls >> extra)) {
      throw ParseError(source, lineno, "axis line needs exactly L x_min dx mass");
    }
    ax.points = to_int(sl, "L");
    if (!detail::parse_double_token(sx, ax.x_min) || !detail::parse_double_token(sd, ax.dx) ||
        !detail::parse_double_token(sm, ax.mass)) {
      throw ParseError(source, lineno, "bad number on axis line");
    }
    try {
      ax.validate();
    } catch (const InvalidInput& e) {
      throw ParseError(source, lineno, e.what());
    }
    sys.grid.axes.push_back(ax);
  }
  const int ns = to_int(header_value("surfaces"), "surfaces");
  if (ns < 1) throw ParseError(source, lineno, "surfaces must be at least 1");

  bool couplings = false;
  bool have_body_line = next();
  if (have_body_line && line.rfind("couplings=", 0) == 0) {
    const std::string v = detail::strip(line.substr(10));
    if (v == "yes") {
      couplings = true;
    } else if (v != "no") {
      throw ParseError(source, lineno, "couplings must be 'yes' or 'no'");
    }
    have_body_line = next();
  }
  if (couplings && ns < 2) throw ParseError(source, lineno, "couplings need at least two surfaces");

  std::int64_t n = 0;
  try {
    n = sys.grid.size(caps, "PES grid");
  } catch (const CapExceeded& e) {
    throw CapExceeded(source + ": " + e.what());
  }
  const int npairs = couplings ? ns * (ns - 1) / 2 : 0;
  const int cols = ns + npairs;
  sys.surfaces.assign(ns, RVec(n));
  std::vector<RVec> pair_values(npairs, RVec(n));

  std::int64_t row = 0;
  while (have_body_line) {
    if (row >= n) {
      throw ParseError(source, lineno, "more data lines than the " + sys.grid.size_report() +
                                           " declared in the header");
    }
    std::istringstream ls(line);
    std::string tok;
    int c = 0;
    while (ls >> tok) {
      double v = 0.0;
      if (!detail::parse_double_token(tok, v)) throw ParseError(source, lineno, "bad number '" + tok + "'");
      if (c >= cols) {
        ++c;
        continue;
      }
      if (c < ns) {
        sys.surfaces[c][row] = v;
      } else {
        pair_values[c - ns][row] = v;
      }
      ++c;
    }
    if (c != cols) {
      throw ParseError(source, lineno, "expected " + std::to_string(cols) + " columns");
    }
    ++row;
    have_body_line = next();
  }
  if (row != n) {
    throw ParseError(source, lineno, "found " + std::to_string(row) + " data lines, header declares " +
                                         sys.grid.size_report());
  }
  int k = 0;
  for (int i = 0; i < ns; ++i) {
    for (int j = i + 1; j < ns && couplings; ++j) sys.couplings[{i, j}] = pair_values[k++];
  }
  return sys;
}

inline DvrSystem read_pes_file(const std::string& path, const Caps& caps = default_caps()) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open PES file '" + path + "'");
  return read_pes(is, path, caps);
}

inline void write_pes(std::ostream& os, const DvrSystem& sys) {
  sys.validate();
  os << "dims=" << sys.grid.dims() << '\n';
  for (int a = 0; a < sys.grid.dims(); ++a) {
    const auto& ax = sys.grid.axes[a];
    os << "axis " << a << ": " << ax.points << ' ' << format_double(ax.x_min) << ' '
       << format_double(ax.dx) << ' ' << format_double(ax.mass) << '\n';
  }
  const int ns = sys.n_surfaces();
  os << "surfaces=" << ns << '\n';
  const bool couplings = !sys.couplings.empty();
  if (couplings) os << "couplings=yes\n";
  for (std::int64_t g = 0; g < sys.surfaces.front().size(); ++g) {
    for (int s = 0; s < ns; ++s) os << (s ? " " : "") << format_double(sys.surfaces[s][g]);
    if (couplings) {
      for (int i = 0; i < ns; ++i) {
        for (int j = i + 1; j < ns; ++j) {
          const RVec* v = sys.coupling(i, j);
          os << ' ' << format_double(v ? (*v)[g] : 0.0);
        }
      }
    }
    os << '\n';
  }
}

}  // namespace qcat
