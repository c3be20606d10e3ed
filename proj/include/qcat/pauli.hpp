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
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qcat/core.hpp"
#include "qcat/state.hpp"

namespace qcat {

/// Single-qubit Pauli letters. The enumerator order is the lexicographic
/// order used everywhere terms are sorted.
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

/**
 * Tensor product of single-qubit Pauli letters over a fixed number of qubits.
 *
 * Stored as a pair of bit masks: qubit q carries X if only x[q] is set, Z if
 * only z[q] is set and Y if both are set. The matrix of the string is
 * i^{|x&z|} X^x Z^z, so every string is Hermitian and P|k> equals
 * i^{|x&z|} (-1)^{|k&z|} |k^x>. Qubit 0 is the least significant bit of a
 * basis-state index.
 */
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n_qubits)
      : n_(n_qubits), x_(words_for(n_qubits), 0), z_(words_for(n_qubits), 0) {
    require(n_qubits >= 0, "PauliString: negative qubit count");
  }

  /// Dense letter form, qubit 0 first: "XIZ" is X0 Z2.
  static PauliString from_letters(std::string_view letters) {
    PauliString s(static_cast<int>(letters.size()));
    for (std::size_t q = 0; q < letters.size(); ++q) {
      s.set(static_cast<int>(q), letter_from_char(letters[q]));
    }
    return s;
  }

  /// Sparse form "X0 Z3 Y7"; an empty string or "I" is the identity.
  static PauliString parse(std::string_view text, int n_qubits) {
    PauliString s(n_qubits);
    std::size_t pos = 0;
    while (pos < text.size()) {
      while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
      if (pos >= text.size()) break;
      std::size_t end = pos;
      while (end < text.size() && text[end] != ' ' && text[end] != '\t') ++end;
      std::string_view tok = text.substr(pos, end - pos);
      pos = end;
      if (tok == "I") continue;
      if (tok.size() < 2) throw ParseError("bad Pauli token '" + std::string(tok) + "'");
      const Pauli p = letter_from_char(tok[0]);
      int q = -1;
      auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), q);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("bad qubit index in '" + std::string(tok) + "'");
      }
      if (q < 0 || q >= n_qubits) {
        throw ParseError("qubit index " + std::to_string(q) + " outside [0, " +
                         std::to_string(n_qubits) + ")");
      }
      if (s.letter(q) != Pauli::I) {
        throw ParseError("qubit " + std::to_string(q) + " repeated in Pauli string");
      }
      s.set(q, p);
    }
    return s;
  }

  /// Single-letter string acting on one qubit.
  static PauliString single(int n_qubits, int qubit, Pauli p) {
    PauliString s(n_qubits);
    s.set(qubit, p);
    return s;
  }

  int n_qubits() const { return n_; }

  Pauli letter(int q) const {
    const bool x = bit(x_, q);
    const bool z = bit(z_, q);
    if (x) return z ? Pauli::Y : Pauli::X;
    return z ? Pauli::Z : Pauli::I;
  }

  void set(int q, Pauli p) {
    require(q >= 0 && q < n_, "PauliString::set: qubit out of range");
    const bool x = (p == Pauli::X || p == Pauli::Y);
    const bool z = (p == Pauli::Z || p == Pauli::Y);
    set_bit(x_, q, x);
    set_bit(z_, q, z);
  }

  const std::vector<std::uint64_t>& x_words() const { return x_; }
  const std::vector<std::uint64_t>& z_words() const { return z_; }
  std::vector<std::uint64_t>& x_words() { return x_; }
  std::vector<std::uint64_t>& z_words() { return z_; }

  /// Low 64 bits of the masks; only meaningful when n_qubits <= 64.
  std::uint64_t x_mask() const { return x_.empty() ? 0 : x_[0]; }
  std::uint64_t z_mask() const { return z_.empty() ? 0 : z_[0]; }

  int weight() const {
    int w = 0;
    for (std::size_t i = 0; i < x_.size(); ++i) w += std::popcount(x_[i] | z_[i]);
    return w;
  }

  int y_count() const {
    int w = 0;
    for (std::size_t i = 0; i < x_.size(); ++i) w += std::popcount(x_[i] & z_[i]);
    return w;
  }

  bool is_identity() const { return weight() == 0; }

  /// True when the string contains only I and Z letters.
  bool is_diagonal() const {
    return std::all_of(x_.begin(), x_.end(), [](std::uint64_t w) { return w == 0; });
  }

  /// Sparse text form "X0 Z3"; the identity prints as an empty string.
  std::string str() const {
    std::string out;
    for (int q = 0; q < n_; ++q) {
      const Pauli p = letter(q);
      if (p == Pauli::I) continue;
      if (!out.empty()) out += ' ';
      out += pauli_char(p);
      out += std::to_string(q);
    }
    return out;
  }

  std::string dense_str() const {
    std::string out(static_cast<std::size_t>(n_), 'I');
    for (int q = 0; q < n_; ++q) out[q] = pauli_char(letter(q));
    return out;
  }

  bool commutes_with(const PauliString& o) const {
    require(n_ == o.n_, "commutes_with: qubit count mismatch");
    int anti = 0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      anti += std::popcount((x_[i] & o.z_[i]) ^ (z_[i] & o.x_[i]));
    }
    return anti % 2 == 0;
  }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.n_ == b.n_ && a.x_ == b.x_ && a.z_ == b.z_;
  }

  /// Lexicographic over qubits starting at qubit 0, with I < X < Y < Z.
  friend bool operator<(const PauliString& a, const PauliString& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    for (std::size_t i = 0; i < a.x_.size(); ++i) {
      const std::uint64_t diff = (a.x_[i] ^ b.x_[i]) | (a.z_[i] ^ b.z_[i]);
      if (diff == 0) continue;
      const int q = static_cast<int>(i * 64) + std::countr_zero(diff);
      return a.letter(q) < b.letter(q);
    }
    return false;
  }

  std::size_t hash() const {
    std::size_t h = std::hash<int>{}(n_);
    for (std::size_t i = 0; i < x_.size(); ++i) {
      h ^= std::hash<std::uint64_t>{}(x_[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h ^= std::hash<std::uint64_t>{}(z_[i] * 31) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

 private:
  static std::size_t words_for(int n) { return static_cast<std::size_t>((n + 63) / 64); }

  static Pauli letter_from_char(char c) {
    switch (c) {
      case 'I': case 'i': case '_': return Pauli::I;
      case 'X': case 'x': return Pauli::X;
      case 'Y': case 'y': return Pauli::Y;
      case 'Z': case 'z': return Pauli::Z;
      default: throw ParseError(std::string("unknown Pauli letter '") + c + "'");
    }
  }

  static bool bit(const std::vector<std::uint64_t>& w, int q) {
    return (w[static_cast<std::size_t>(q) / 64] >> (q % 64)) & 1U;
  }
  static void set_bit(std::vector<std::uint64_t>& w, int q, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (q % 64);
    if (v) {
      w[static_cast<std::size_t>(q) / 64] |= m;
    } else {
      w[static_cast<std::size_t>(q) / 64] &= ~m;
    }
  }

  int n_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& s) const noexcept { return s.hash(); }
};

/// Phase in {1, i, -1, -i} stored as a power of i.
struct PauliPhase {
  int power = 0;  // 0..3
  cplx value() const {
    static constexpr cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[power & 3];
  }
};

struct PauliProduct {
  PauliPhase phase;
  PauliString product;
};

/// matrix(a) * matrix(b) == phase * matrix(product).
inline PauliProduct pauli_multiply(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw InvalidInput("pauli_multiply: qubit count mismatch (" +
                       std::to_string(a.n_qubits()) + " vs " +
                       std::to_string(b.n_qubits()) + ")");
  }
  PauliString out(a.n_qubits());
  int plus = 0;
  int minus = 0;
  const auto& ax = a.x_words();
  const auto& az = a.z_words();
  const auto& bx = b.x_words();
  const auto& bz = b.z_words();
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const std::uint64_t xa = ax[i] & ~az[i], ya = ax[i] & az[i], za = ~ax[i] & az[i];
    const std::uint64_t xb = bx[i] & ~bz[i], yb = bx[i] & bz[i], zb = ~bx[i] & bz[i];
    // XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i.
    plus += std::popcount((xa & yb) | (ya & zb) | (za & xb));
    minus += std::popcount((ya & xb) | (za & yb) | (xa & zb));
    out.x_words()[i] = ax[i] ^ bx[i];
    out.z_words()[i] = az[i] ^ bz[i];
  }
  return {PauliPhase{((plus - minus) % 4 + 4) % 4}, std::move(out)};
}

/// Default coefficient drop threshold in Hartree.
inline constexpr double kDefaultDropThreshold = 1e-12;

/**
 * Weighted sum of Pauli strings over a fixed number of qubits.
 *
 * Terms live in an ordered map so iteration is lexicographic by string and
 * every downstream consumer (serialization, Trotter ordering, gate counts)
 * sees the same order.
 */
class PauliOperator {
 public:
  using TermMap = std::map<PauliString, cplx>;

  PauliOperator() = default;
  explicit PauliOperator(int n_qubits) : n_(n_qubits) {}

  static PauliOperator identity(int n_qubits, cplx c = 1.0) {
    PauliOperator op(n_qubits);
    op.add(PauliString(n_qubits), c);
    return op;
  }

  static PauliOperator single(const PauliString& s, cplx c = 1.0) {
    PauliOperator op(s.n_qubits());
    op.add(s, c);
    return op;
  }

  int n_qubits() const { return n_; }
  std::size_t n_terms() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  cplx coefficient(const PauliString& s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? cplx{0.0} : it->second;
  }

  void add(const PauliString& s, cplx c) {
    if (s.n_qubits() != n_) {
      throw InvalidInput("PauliOperator::add: string has " + std::to_string(s.n_qubits()) +
                         " qubits, operator has " + std::to_string(n_));
    }
    if (c == cplx{0.0}) return;
    auto [it, inserted] = terms_.try_emplace(s, c);
    if (!inserted) {
      it->second += c;
      if (it->second == cplx{0.0}) terms_.erase(it);
    }
  }

  void add(const PauliOperator& o, cplx scale = 1.0) {
    if (o.n_ != n_) throw InvalidInput("PauliOperator::add: qubit count mismatch");
    for (const auto& [s, c] : o.terms_) add(s, scale * c);
  }

  /// Removes terms with |c| < threshold.
  PauliOperator& simplify(double threshold = kDefaultDropThreshold) {
    std::erase_if(terms_, [threshold](const auto& kv) { return std::abs(kv.second) < threshold; });
    return *this;
  }

  bool is_hermitian(double tol = kDefaultDropThreshold) const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [tol](const auto& kv) { return std::abs(kv.second.imag()) <= tol; });
  }

  bool is_diagonal() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& kv) { return kv.first.is_diagonal(); });
  }

  PauliOperator adjoint() const {
    PauliOperator out(n_);
    for (const auto& [s, c] : terms_) out.terms_.emplace(s, std::conj(c));
    return out;
  }

  /// Sum of |c| over all terms (the 1-norm of the coefficient vector).
  double one_norm() const {
    double n = 0.0;
    for (const auto& kv : terms_) n += std::abs(kv.second);
    return n;
  }

  PauliOperator& operator+=(const PauliOperator& o) { add(o); return *this; }
  PauliOperator& operator-=(const PauliOperator& o) { add(o, -1.0); return *this; }
  PauliOperator& operator*=(cplx c) {
    for (auto& kv : terms_) kv.second *= c;
    return *this;
  }

  friend PauliOperator operator+(PauliOperator a, const PauliOperator& b) { return a += b; }
  friend PauliOperator operator-(PauliOperator a, const PauliOperator& b) { return a -= b; }
  friend PauliOperator operator*(PauliOperator a, cplx c) { return a *= c; }
  friend PauliOperator operator*(cplx c, PauliOperator a) { return a *= c; }

  friend PauliOperator operator*(const PauliOperator& a, const PauliOperator& b) {
    if (a.n_ != b.n_) throw InvalidInput("PauliOperator product: qubit count mismatch");
    PauliOperator out(a.n_);
    for (const auto& [sa, ca] : a.terms_) {
      for (const auto& [sb, cb] : b.terms_) {
        auto [phase, prod] = pauli_multiply(sa, sb);
        out.add(prod, phase.value() * ca * cb);
      }
    }
    return out;
  }

  friend bool operator==(const PauliOperator& a, const PauliOperator& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  int n_ = 0;
  TermMap terms_;
};

/// Linear combination sum_k w_k * op_k with like terms merged and terms
/// below drop_threshold removed.
inline PauliOperator op_combine(std::span<const std::pair<cplx, PauliOperator>> ops,
                                double drop_threshold = kDefaultDropThreshold) {
  require(drop_threshold >= 0.0, "op_combine: negative drop threshold");
  if (ops.empty()) return PauliOperator(0);
  const int n = ops.front().second.n_qubits();
  PauliOperator out(n);
  for (const auto& [w, op] : ops) {
    if (op.n_qubits() != n) {
      throw InvalidInput("op_combine: operands act on " + std::to_string(n) + " and " +
                         std::to_string(op.n_qubits()) + " qubits");
    }
    out.add(op, w);
  }
  return out.simplify(drop_threshold);
}

inline PauliOperator op_combine(std::initializer_list<std::pair<cplx, PauliOperator>> ops,
                                double drop_threshold = kDefaultDropThreshold) {
  return op_combine(std::span<const std::pair<cplx, PauliOperator>>(ops.begin(), ops.size()),
                    drop_threshold);
}

/// Commutator norm helper: [a, b] as a Pauli operator.
inline PauliOperator commutator(const PauliOperator& a, const PauliOperator& b) {
  return (a * b - b * a).simplify(0.0);
}

namespace detail {

/// Terms grouped by X mask. Every string in a group maps |k> to |k ^ x>.
struct XGroup {
  std::uint64_t x = 0;
  std::vector<std::uint64_t> z;
  std::vector<cplx> coeff;  // includes the i^{|x&z|} factor
};

inline std::vector<XGroup> group_by_x(const PauliOperator& op) {
  std::map<std::uint64_t, XGroup> groups;
  for (const auto& [s, c] : op.terms()) {
    auto& g = groups[s.x_mask()];
    g.x = s.x_mask();
    g.z.push_back(s.z_mask());
    g.coeff.push_back(c * PauliPhase{s.y_count() % 4}.value());
  }
  std::vector<XGroup> out;
  out.reserve(groups.size());
  for (auto& kv : groups) out.push_back(std::move(kv.second));
  return out;
}

inline cplx group_element(const XGroup& g, std::uint64_t col) {
  cplx v{0.0};
  for (std::size_t t = 0; t < g.z.size(); ++t) {
    v += (std::popcount(col & g.z[t]) & 1) ? -g.coeff[t] : g.coeff[t];
  }
  return v;
}

inline void check_matrix_cap(int n_qubits, const Caps& caps) {
  if (n_qubits > caps.max_qubits || n_qubits > 62) {
    throw CapExceeded("operator on " + std::to_string(n_qubits) +
                      " qubits needs a 2^" + std::to_string(n_qubits) +
                      "-dimensional matrix; cap is " + std::to_string(caps.max_qubits) +
                      " qubits");
  }
}

}  // namespace detail

/// Sparse 2^n x 2^n matrix of the operator (qubit 0 least significant).
inline SpMat op_to_matrix(const PauliOperator& op, const Caps& caps = default_caps()) {
  const int n = op.n_qubits();
  detail::check_matrix_cap(n, caps);
  const std::int64_t dim = std::int64_t{1} << n;
  const auto groups = detail::group_by_x(op);
  SpMat m(dim, dim);
  m.reserve(Eigen::VectorXi::Constant(dim, static_cast<int>(groups.size())));
  for (std::int64_t row = 0; row < dim; ++row) {
    std::vector<std::pair<std::int64_t, cplx>> entries;
    entries.reserve(groups.size());
    for (const auto& g : groups) {
      const std::uint64_t col = static_cast<std::uint64_t>(row) ^ g.x;
      const cplx v = detail::group_element(g, col);
      if (v != cplx{0.0}) entries.emplace_back(static_cast<std::int64_t>(col), v);
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [col, v] : entries) m.insert(row, col) = v;
  }
  m.makeCompressed();
  return m;
}

/// Matrix of the operator compressed onto the span of the given
/// computational basis states: entry (i, j) is <basis[i]|op|basis[j]>.
inline SpMat op_to_matrix(const PauliOperator& op, std::span<const std::uint64_t> basis) {
  if (op.n_qubits() > 63) {
    throw CapExceeded("restricted matrix needs basis indices of " +
                      std::to_string(op.n_qubits()) + " bits; limit is 63");
  }
  std::unordered_map<std::uint64_t, std::int64_t> pos;
  pos.reserve(basis.size() * 2);
  for (std::size_t i = 0; i < basis.size(); ++i) pos.emplace(basis[i], static_cast<std::int64_t>(i));
  const auto groups = detail::group_by_x(op);
  std::vector<Eigen::Triplet<cplx, std::int64_t>> trips;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const std::uint64_t col = basis[j];
    for (const auto& g : groups) {
      auto it = pos.find(col ^ g.x);
      if (it == pos.end()) continue;
      const cplx v = detail::group_element(g, col);
      if (v != cplx{0.0}) trips.emplace_back(it->second, static_cast<std::int64_t>(j), v);
    }
  }
  const auto d = static_cast<std::int64_t>(basis.size());
  SpMat m(d, d);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

/// out = op * in without materializing the matrix.
inline void op_apply(const PauliOperator& op, const CVec& in, CVec& out) {
  const int n = op.n_qubits();
  detail::check_matrix_cap(n, Caps{62, std::int64_t{1} << 62});
  const std::int64_t dim = std::int64_t{1} << n;
  if (in.size() != dim) {
    throw InvalidInput("op_apply: state dimension " + std::to_string(in.size()) +
                       " does not match 2^" + std::to_string(n));
  }
  out = CVec::Zero(dim);
  for (const auto& g : detail::group_by_x(op)) {
    for (std::int64_t col = 0; col < dim; ++col) {
      const cplx v = detail::group_element(g, static_cast<std::uint64_t>(col));
      out[static_cast<std::int64_t>(static_cast<std::uint64_t>(col) ^ g.x)] += v * in[col];
    }
  }
}

/// <psi|op|psi> for a normalized state on 2^n amplitudes.
inline cplx op_expectation(const PauliOperator& op, const StateVector& psi) {
  const std::int64_t dim = std::int64_t{1} << op.n_qubits();
  if (psi.dim() != dim) {
    throw InvalidInput("op_expectation: state has " + std::to_string(psi.dim()) +
                       " amplitudes, operator needs " + std::to_string(dim));
  }
  if (!psi.is_normalized(1e-10)) {
    throw InvalidInput("op_expectation: state norm " + std::to_string(psi.norm()) +
                       " differs from 1 by more than 1e-10");
  }
  CVec hpsi;
  op_apply(op, psi.amplitudes, hpsi);
  return psi.amplitudes.dot(hpsi);
}

/// In-place unnormalized Walsh-Hadamard transform: v[z] <- sum_k (-1)^{|k&z|} v[k].
inline void walsh_hadamard(CVec& v) {
  const std::int64_t n = v.size();
  require(n > 0 && (n & (n - 1)) == 0, "walsh_hadamard: length must be a power of two");
  for (std::int64_t h = 1; h < n; h <<= 1) {
    for (std::int64_t i = 0; i < n; i += 2 * h) {
      for (std::int64_t j = i; j < i + h; ++j) {
        const cplx a = v[j];
        const cplx b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

/**
 * Pauli expansion of a 2^K x 2^K matrix.
 *
 * For each X mask x the coefficients of all strings (x, z) come from one
 * Walsh-Hadamard transform of the x-shifted diagonal f(k) = M[k^x, k]:
 * c(x, z) = i^{-|x&z|} 2^{-K} sum_k (-1)^{|k&z|} f(k).
 */
inline PauliOperator matrix_to_pauli(const CMat& m, double drop_threshold = kDefaultDropThreshold) {
  const std::int64_t dim = m.rows();
  require(m.cols() == dim && dim > 0 && (dim & (dim - 1)) == 0,
          "matrix_to_pauli: matrix must be square with power-of-two size");
  const int k = std::countr_zero(static_cast<std::uint64_t>(dim));
  PauliOperator out(k);
  if (k == 0) {
    if (std::abs(m(0, 0)) >= drop_threshold) out.add(PauliString(0), m(0, 0));
    return out;
  }
  CVec f(dim);
  for (std::int64_t x = 0; x < dim; ++x) {
    for (std::int64_t c = 0; c < dim; ++c) f[c] = m(c ^ x, c);
    if (f.cwiseAbs().maxCoeff() == 0.0) continue;
    walsh_hadamard(f);
    for (std::int64_t z = 0; z < dim; ++z) {
      const cplx v = f[z] / static_cast<double>(dim);
      if (std::abs(v) < drop_threshold || v == cplx{0.0}) continue;
      const int y = std::popcount(static_cast<std::uint64_t>(x & z));
      PauliString s(k);
      s.x_words()[0] = static_cast<std::uint64_t>(x);
      s.z_words()[0] = static_cast<std::uint64_t>(z);
      out.add(s, v * PauliPhase{(4 - y % 4) % 4}.value());
    }
  }
  return out;
}

/// Copy of `op` acting on qubits offset .. offset + op.n_qubits() - 1 of a
/// larger register.
inline PauliOperator embed_operator(const PauliOperator& op, int n_total, int offset) {
  require(offset >= 0 && offset + op.n_qubits() <= n_total, "embed_operator: qubits out of range");
  PauliOperator out(n_total);
  for (const auto& [s, c] : op.terms()) {
    PauliString t(n_total);
    for (int q = 0; q < s.n_qubits(); ++q) {
      if (s.letter(q) != Pauli::I) t.set(offset + q, s.letter(q));
    }
    out.add(t, c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text serialization: header "nqubits=<n>", then one "<re> <im> <string>" line
// per term in lexicographic order. Values use 17 significant digits.

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_pauli_operator(std::ostream& os, const PauliOperator& op) {
  os << "nqubits=" << op.n_qubits() << '\n';
  for (const auto& [s, c] : op.terms()) {
    os << format_double(c.real()) << ' ' << format_double(c.imag());
    const std::string str = s.str();
    if (!str.empty()) os << ' ' << str;
    os << '\n';
  }
}

inline std::string to_text(const PauliOperator& op) {
  std::ostringstream os;
  write_pauli_operator(os, op);
  return os.str();
}

inline PauliOperator read_pauli_operator(std::istream& is, const std::string& source = "<stream>") {
  std::string line;
  std::size_t lineno = 0;
  int n = -1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("nqubits=", 0) != 0) {
      throw ParseError(source, lineno, "expected header 'nqubits=<n>'");
    }
    try {
      n = std::stoi(line.substr(8));
    } catch (const std::exception&) {
      throw ParseError(source, lineno, "bad qubit count in header");
    }
    if (n < 0) throw ParseError(source, lineno, "negative qubit count");
    break;
  }
  if (n < 0) throw ParseError(source, lineno, "missing 'nqubits=' header");
  PauliOperator op(n);
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string re_s, im_s;
    if (!(ls >> re_s >> im_s)) throw ParseError(source, lineno, "expected '<re> <im> <string>'");
    double re = 0.0, im = 0.0;
    try {
      std::size_t used = 0;
      re = std::stod(re_s, &used);
      if (used != re_s.size()) throw std::invalid_argument(re_s);
      im = std::stod(im_s, &used);
      if (used != im_s.size()) throw std::invalid_argument(im_s);
    } catch (const std::exception&) {
      throw ParseError(source, lineno, "bad coefficient");
    }
    std::string rest;
    std::getline(ls, rest);
    try {
      op.add(PauliString::parse(rest, n), cplx{re, im});
    } catch (const ParseError& e) {
      throw ParseError(source, lineno, e.what());
    }
  }
  return op;
}

inline PauliOperator from_text(const std::string& text) {
  std::istringstream is(text);
  return read_pauli_operator(is);
}

}  // namespace qcat
