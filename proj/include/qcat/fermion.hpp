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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qcat/core.hpp"
#include "qcat/pauli.hpp"

namespace qcat {

struct Ladder {
  int mode = 0;
  bool dagger = false;
  friend auto operator<=>(const Ladder&, const Ladder&) = default;
};

inline Ladder cre(int p) { return {p, true}; }
inline Ladder ann(int p) { return {p, false}; }

/// Sum of products of fermionic ladder operators. A term is the ordered
/// product of its Ladder entries, leftmost first; the empty product is the
/// identity.
class FermionOperator {
 public:
  using Term = std::vector<Ladder>;
  using TermMap = std::map<Term, cplx>;

  FermionOperator() = default;

  static FermionOperator constant(cplx c) {
    FermionOperator f;
    f.add({}, c);
    return f;
  }

  static FermionOperator term(Term t, cplx c = 1.0) {
    FermionOperator f;
    f.add(std::move(t), c);
    return f;
  }

  void add(const Term& t, cplx c) {
    if (c == cplx{0.0}) return;
    auto [it, inserted] = terms_.try_emplace(t, c);
    if (!inserted) {
      it->second += c;
      if (it->second == cplx{0.0}) terms_.erase(it);
    }
  }

  const TermMap& terms() const { return terms_; }
  std::size_t n_terms() const { return terms_.size(); }

  int max_mode() const {
    int m = -1;
    for (const auto& [t, c] : terms_) {
      for (const auto& l : t) m = std::max(m, l.mode);
    }
    return m;
  }

  FermionOperator& operator+=(const FermionOperator& o) {
    for (const auto& [t, c] : o.terms_) add(t, c);
    return *this;
  }
  FermionOperator& operator*=(cplx s) {
    for (auto& kv : terms_) kv.second *= s;
    return *this;
  }
  friend FermionOperator operator+(FermionOperator a, const FermionOperator& b) { return a += b; }
  friend FermionOperator operator*(cplx s, FermionOperator a) { return a *= s; }

  friend FermionOperator operator*(const FermionOperator& a, const FermionOperator& b) {
    FermionOperator out;
    for (const auto& [ta, ca] : a.terms_) {
      for (const auto& [tb, cb] : b.terms_) {
        Term t = ta;
        t.insert(t.end(), tb.begin(), tb.end());
        out.add(t, ca * cb);
      }
    }
    return out;
  }

  FermionOperator adjoint() const {
    FermionOperator out;
    for (const auto& [t, c] : terms_) {
      Term r(t.rbegin(), t.rend());
      for (auto& l : r) l.dagger = !l.dagger;
      out.add(r, std::conj(c));
    }
    return out;
  }

  /// Canonical form: creators left of annihilators, creators by descending
  /// mode, annihilators by descending mode; anticommutator contractions are
  /// expanded and products with a repeated creator or annihilator vanish.
  FermionOperator normal_ordered() const {
    FermionOperator out;
    for (const auto& [t, c] : terms_) normal_order_into(t, c, out);
    return out;
  }

  FermionOperator& simplify(double threshold = kDefaultDropThreshold) {
    std::erase_if(terms_, [threshold](const auto& kv) { return std::abs(kv.second) < threshold; });
    return *this;
  }

  /// True when the canonical form equals its adjoint within tol.
  bool is_hermitian(double tol = 1e-12) const {
    const FermionOperator a = normal_ordered();
    const FermionOperator b = adjoint().normal_ordered();
    for (const auto& [t, c] : a.terms_) {
      auto it = b.terms_.find(t);
      if (std::abs(c - (it == b.terms_.end() ? cplx{0.0} : it->second)) > tol) return false;
    }
    for (const auto& [t, c] : b.terms_) {
      if (!a.terms_.count(t) && std::abs(c) > tol) return false;
    }
    return true;
  }

 private:
  static bool before(const Ladder& a, const Ladder& b) {
    if (a.dagger != b.dagger) return a.dagger;
    return a.mode > b.mode;
  }

  static void normal_order_into(Term t, cplx c, FermionOperator& out) {
    // Insertion sort with signs; each swap of unlike operators on the same
    // mode spawns the contracted term.
    for (std::size_t i = 1; i < t.size(); ++i) {
      for (std::size_t j = i; j > 0; --j) {
        Ladder& left = t[j - 1];
        Ladder& right = t[j];
        if (!before(right, left)) {
          if (left == right) return;  // a a or a+ a+ on the same mode
          break;
        }
        if (left.mode == right.mode && !left.dagger && right.dagger) {
          // a_p a+_p = 1 - a+_p a_p
          Term contracted;
          contracted.reserve(t.size() - 2);
          contracted.insert(contracted.end(), t.begin(), t.begin() + static_cast<long>(j) - 1);
          contracted.insert(contracted.end(), t.begin() + static_cast<long>(j) + 1, t.end());
          normal_order_into(std::move(contracted), c, out);
        }
        std::swap(left, right);
        c = -c;
      }
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (t[i] == t[i - 1]) return;
    }
    out.add(t, c);
  }

  TermMap terms_;
};

// ---------------------------------------------------------------------------
// Fermion-to-qubit encodings.
//
// Every supported encoding stores qubit bits b = A n (mod 2) for occupations
// n. With U(j) the qubits whose bit flips when n_j flips, P(j) the qubits
// whose parity equals sum_{k<j} n_k and O(j) the qubits whose parity equals
// n_j, the ladder operators are
//   a_j  = X_{U(j)} (I - Z_{O(j)})/2 Z_{P(j)}
//   a+_j = X_{U(j)} (I + Z_{O(j)})/2 Z_{P(j)}.

enum class Encoding { kJordanWigner, kBravyiKitaev, kParity };

inline std::string encoding_name(Encoding e) {
  switch (e) {
    case Encoding::kJordanWigner: return "jw";
    case Encoding::kBravyiKitaev: return "bk";
    case Encoding::kParity: return "parity";
  }
  return "?";
}

inline Encoding parse_encoding(const std::string& s) {
  if (s == "jw" || s == "jordan_wigner") return Encoding::kJordanWigner;
  if (s == "bk" || s == "bravyi_kitaev") return Encoding::kBravyiKitaev;
  if (s == "parity") return Encoding::kParity;
  throw InvalidInput("unknown fermion encoding '" + s + "' (expected jw, bk or parity)");
}

struct EncodingSets {
  std::vector<int> update;
  std::vector<int> parity;
  std::vector<int> occupation;
};

/// Fenwick-tree sets for the Bravyi-Kitaev encoding. Qubit i stores the
/// parity of modes (i & (i + 1)) .. i.
inline EncodingSets bravyi_kitaev_sets(int j, int n) {
  EncodingSets s;
  for (int i = j; i < n; i |= i + 1) s.update.push_back(i);
  for (int i = j - 1; i >= 0; i = (i & (i + 1)) - 1) s.parity.push_back(i);
  s.occupation.push_back(j);
  const int start = j & (j + 1);
  for (int i = j - 1; i >= start; i = (i & (i + 1)) - 1) s.occupation.push_back(i);
  return s;
}

inline EncodingSets encoding_sets(Encoding e, int j, int n) {
  EncodingSets s;
  switch (e) {
    case Encoding::kJordanWigner:
      s.update = {j};
      for (int k = 0; k < j; ++k) s.parity.push_back(k);
      s.occupation = {j};
      break;
    case Encoding::kParity:
      for (int k = j; k < n; ++k) s.update.push_back(k);
      if (j > 0) s.parity = {j - 1};
      s.occupation = {j};
      if (j > 0) s.occupation.push_back(j - 1);
      break;
    case Encoding::kBravyiKitaev:
      s = bravyi_kitaev_sets(j, n);
      break;
  }
  return s;
}

/// Qubit basis index holding the occupation bitstring `occ` (bit k is n_k).
inline std::uint64_t encode_occupation(std::uint64_t occ, Encoding e, int n) {
  require(n <= 64, "encode_occupation: more than 64 modes");
  std::uint64_t b = 0;
  for (int j = 0; j < n; ++j) {
    if (!((occ >> j) & 1U)) continue;
    for (int q : encoding_sets(e, j, n).update) b ^= std::uint64_t{1} << q;
  }
  return b;
}

/// Cached ladder images for one encoding and mode count.
class LadderTable {
 public:
  LadderTable(Encoding e, int n_modes) : encoding_(e), n_(n_modes) {
    require(n_modes >= 0, "LadderTable: negative mode count");
    ann_.reserve(n_modes);
    cre_.reserve(n_modes);
    for (int j = 0; j < n_modes; ++j) {
      const EncodingSets s = encoding_sets(e, j, n_modes);
      PauliString xu(n_), zp(n_), zo(n_);
      for (int q : s.update) xu.set(q, Pauli::X);
      for (int q : s.parity) zp.set(q, Pauli::Z);
      for (int q : s.occupation) zo.set(q, Pauli::Z);
      const PauliOperator flip = PauliOperator::single(xu);
      const PauliOperator sign = PauliOperator::single(zp);
      PauliOperator lower = PauliOperator::identity(n_, 0.5);
      lower.add(zo, -0.5);
      PauliOperator raise = PauliOperator::identity(n_, 0.5);
      raise.add(zo, 0.5);
      ann_.push_back((flip * lower * sign).simplify(0.0));
      cre_.push_back((flip * raise * sign).simplify(0.0));
    }
  }

  const PauliOperator& operator()(const Ladder& l) const {
    if (l.mode < 0 || l.mode >= n_) {
      throw InvalidInput("fermion mode " + std::to_string(l.mode) + " outside [0, " +
                         std::to_string(n_) + ")");
    }
    return l.dagger ? cre_[l.mode] : ann_[l.mode];
  }

  Encoding encoding() const { return encoding_; }
  int n_modes() const { return n_; }

 private:
  Encoding encoding_;
  int n_;
  std::vector<PauliOperator> ann_;
  std::vector<PauliOperator> cre_;
};

inline PauliOperator map_fermion_operator(const FermionOperator& f, int n_modes, Encoding e,
                                          double drop_threshold = kDefaultDropThreshold) {
  const LadderTable table(e, n_modes);
  PauliOperator out(n_modes);
  for (const auto& [t, c] : f.terms()) {
    PauliOperator prod = PauliOperator::identity(n_modes, c);
    for (const auto& l : t) prod = prod * table(l);
    out += prod;
  }
  return out.simplify(drop_threshold);
}

inline PauliOperator jordan_wigner(const FermionOperator& f, int n_modes,
                                   double drop_threshold = kDefaultDropThreshold) {
  return map_fermion_operator(f, n_modes, Encoding::kJordanWigner, drop_threshold);
}

inline PauliOperator bravyi_kitaev(const FermionOperator& f, int n_modes,
                                   double drop_threshold = kDefaultDropThreshold) {
  return map_fermion_operator(f, n_modes, Encoding::kBravyiKitaev, drop_threshold);
}

inline PauliOperator parity_map(const FermionOperator& f, int n_modes,
                                double drop_threshold = kDefaultDropThreshold) {
  return map_fermion_operator(f, n_modes, Encoding::kParity, drop_threshold);
}

/// Total number operator sum_p a+_p a_p.
inline FermionOperator number_operator(int n_modes) {
  FermionOperator f;
  for (int p = 0; p < n_modes; ++p) f.add({cre(p), ann(p)}, 1.0);
  return f;
}

}  // namespace qcat
