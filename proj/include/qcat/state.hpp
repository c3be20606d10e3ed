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
#include <cstdint>
#include <string>
#include <utility>

#include "qcat/core.hpp"

namespace qcat {

enum class BasisTag { kQubit, kDeterminant, kGrid };

/// Complex amplitudes over a labeled basis. Unitary operations keep the norm
/// at 1 to within 1e-10.
struct StateVector {
  CVec amplitudes;
  BasisTag basis = BasisTag::kQubit;

  StateVector() = default;
  explicit StateVector(CVec amps, BasisTag tag = BasisTag::kQubit)
      : amplitudes(std::move(amps)), basis(tag) {}

  static StateVector basis_state(std::int64_t dim, std::int64_t index,
                                 BasisTag tag = BasisTag::kQubit) {
    require(index >= 0 && index < dim, "basis_state: index out of range");
    CVec v = CVec::Zero(dim);
    v[index] = 1.0;
    return StateVector(std::move(v), tag);
  }

  std::int64_t dim() const { return amplitudes.size(); }
  double norm() const { return amplitudes.norm(); }
  bool is_normalized(double tol = 1e-10) const {
    return std::abs(norm() - 1.0) <= tol;
  }
  StateVector normalized() const {
    const double n = norm();
    if (n == 0.0) throw InvalidInput("cannot normalize a zero-norm state");
    return StateVector(amplitudes / n, basis);
  }
  cplx operator[](std::int64_t i) const { return amplitudes[i]; }
};

}  // namespace qcat
