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

#include <functional>
#include <memory>
#include <utility>

#include "qcat/core.hpp"
#include "qcat/pauli.hpp"

namespace qcat {

/// A Hermitian operator known only through its action on vectors.
struct LinearOperator {
  std::int64_t dim = 0;
  std::function<void(const CVec&, CVec&)> apply;

  CVec operator*(const CVec& v) const {
    CVec out;
    apply(v, out);
    return out;
  }

  static LinearOperator from_sparse(SpMat m) {
    require(m.rows() == m.cols(), "LinearOperator: matrix must be square");
    auto shared = std::make_shared<const SpMat>(std::move(m));
    return {shared->rows(), [shared](const CVec& in, CVec& out) { out = (*shared) * in; }};
  }

  static LinearOperator from_dense(CMat m) {
    require(m.rows() == m.cols(), "LinearOperator: matrix must be square");
    auto shared = std::make_shared<const CMat>(std::move(m));
    return {shared->rows(), [shared](const CVec& in, CVec& out) { out.noalias() = (*shared) * in; }};
  }

  static LinearOperator from_pauli(PauliOperator op, const Caps& caps = default_caps()) {
    detail::check_matrix_cap(op.n_qubits(), caps);
    auto shared = std::make_shared<const PauliOperator>(std::move(op));
    return {std::int64_t{1} << shared->n_qubits(),
            [shared](const CVec& in, CVec& out) { op_apply(*shared, in, out); }};
  }
};

inline void check_dim_cap(std::int64_t dim, const Caps& caps, const std::string& what) {
  if (dim > caps.max_dim) {
    throw CapExceeded(what + ": dimension " + std::to_string(dim) + " exceeds cap " +
                      std::to_string(caps.max_dim));
  }
}

}  // namespace qcat
