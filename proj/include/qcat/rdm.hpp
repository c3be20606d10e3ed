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

#include <bit>
#include <cstdint>
#include <vector>

#include "qcat/core.hpp"
#include "qcat/state.hpp"

namespace qcat {

/// Occupation-number (determinant) basis helpers. Bit p of a basis index is
/// the occupation of spin orbital p; operators carry the Jordan-Wigner sign
/// (-1)^{number of occupied modes below p}.
namespace fock {

inline double parity_below(std::uint64_t det, int p) {
  const std::uint64_t mask = (std::uint64_t{1} << p) - 1;
  return (std::popcount(det & mask) & 1) ? -1.0 : 1.0;
}

/// out = a_p in
inline CVec annihilate(const CVec& in, int p) {
  CVec out = CVec::Zero(in.size());
  const std::uint64_t bit = std::uint64_t{1} << p;
  for (std::int64_t k = 0; k < in.size(); ++k) {
    const auto det = static_cast<std::uint64_t>(k);
    if (!(det & bit) || in[k] == cplx{0.0}) continue;
    out[static_cast<std::int64_t>(det ^ bit)] += parity_below(det, p) * in[k];
  }
  return out;
}

/// out = a_p^dagger in
inline CVec create(const CVec& in, int p) {
  CVec out = CVec::Zero(in.size());
  const std::uint64_t bit = std::uint64_t{1} << p;
  for (std::int64_t k = 0; k < in.size(); ++k) {
    const auto det = static_cast<std::uint64_t>(k);
    if ((det & bit) || in[k] == cplx{0.0}) continue;
    out[static_cast<std::int64_t>(det ^ bit)] += parity_below(det, p) * in[k];
  }
  return out;
}

}  // namespace fock

/// Two-body density tensor with rho(p, q, r, s) = <a+_q a+_p a_r a_s>.
class Rdm2 {
 public:
  Rdm2() = default;
  explicit Rdm2(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, cplx{0.0}) {}
  int n_modes() const { return n_; }
  cplx& operator()(int p, int q, int r, int s) { return data_[index(p, q, r, s)]; }
  cplx operator()(int p, int q, int r, int s) const { return data_[index(p, q, r, s)]; }

 private:
  std::size_t index(int p, int q, int r, int s) const {
    return ((static_cast<std::size_t>(p) * n_ + q) * n_ + r) * n_ + s;
  }
  int n_ = 0;
  std::vector<cplx> data_;
};

namespace detail {
inline void check_determinant_state(const StateVector& psi, int n_modes, const char* who) {
  require(n_modes >= 0 && n_modes <= 30, std::string(who) + ": mode count out of range");
  if (psi.dim() != (std::int64_t{1} << n_modes)) {
    throw InvalidInput(std::string(who) + ": state has " + std::to_string(psi.dim()) +
                       " amplitudes, determinant basis of " + std::to_string(n_modes) +
                       " modes has " + std::to_string(std::int64_t{1} << n_modes));
  }
  if (psi.basis == BasisTag::kGrid) {
    throw InvalidInput(std::string(who) + ": state is tagged as a grid wavefunction");
  }
}
}  // namespace detail

/// rho1(p, q) = <a+_q a_p>.
inline CMat measure_rdm1(const StateVector& psi, int n_modes) {
  detail::check_determinant_state(psi, n_modes, "measure_rdm1");
  std::vector<CVec> lowered;
  lowered.reserve(n_modes);
  for (int p = 0; p < n_modes; ++p) lowered.push_back(fock::annihilate(psi.amplitudes, p));
  CMat rho(n_modes, n_modes);
  for (int p = 0; p < n_modes; ++p) {
    for (int q = 0; q < n_modes; ++q) rho(p, q) = lowered[q].dot(lowered[p]);
  }
  return rho;
}

/// rho2(p, q, r, s) = <a+_q a+_p a_r a_s> = <a_p a_q psi | a_r a_s psi>.
inline Rdm2 measure_rdm2(const StateVector& psi, int n_modes) {
  detail::check_determinant_state(psi, n_modes, "measure_rdm2");
  std::vector<CVec> singles;
  singles.reserve(n_modes);
  for (int s = 0; s < n_modes; ++s) singles.push_back(fock::annihilate(psi.amplitudes, s));
  std::vector<CVec> pairs(static_cast<std::size_t>(n_modes) * n_modes);
  for (int r = 0; r < n_modes; ++r) {
    for (int s = 0; s < n_modes; ++s) {
      pairs[static_cast<std::size_t>(r) * n_modes + s] = fock::annihilate(singles[s], r);
    }
  }
  Rdm2 rho(n_modes);
  for (int p = 0; p < n_modes; ++p) {
    for (int q = 0; q < n_modes; ++q) {
      const CVec& bra = pairs[static_cast<std::size_t>(p) * n_modes + q];
      for (int r = 0; r < n_modes; ++r) {
        for (int s = 0; s < n_modes; ++s) {
          rho(p, q, r, s) = bra.dot(pairs[static_cast<std::size_t>(r) * n_modes + s]);
        }
      }
    }
  }
  return rho;
}

}  // namespace qcat
