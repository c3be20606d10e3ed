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

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qcat {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor, std::int64_t>;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Boltzmann constant in Hartree per Kelvin.
inline constexpr double kBoltzmannHartree = 3.166811563e-6;
/// One femtosecond in atomic time units.
inline constexpr double kFemtosecond = 41.341373335;

/// Coarse failure classes; the CLI maps each to its own exit status.
enum class ErrorKind { kInvalidInput, kParse, kNumerical, kCapExceeded };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string& w) : Error(ErrorKind::kInvalidInput, w) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(ErrorKind::kParse, w) {}
  ParseError(const std::string& source, std::size_t line, const std::string& w)
      : Error(ErrorKind::kParse,
              source + ":" + std::to_string(line) + ": " + w) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& w) : Error(ErrorKind::kNumerical, w) {}
};

struct CapExceeded : Error {
  explicit CapExceeded(const std::string& w) : Error(ErrorKind::kCapExceeded, w) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidInput(msg);
}

/// Size limits for anything that materializes a vector or matrix.
/// Defaults: 24 qubits, 2^24 basis states. QCAT_MAX_QUBITS and QCAT_MAX_DIM
/// override them.
struct Caps {
  int max_qubits = 24;
  std::int64_t max_dim = std::int64_t{1} << 24;

  static Caps from_env() {
    Caps c;
    if (const char* q = std::getenv("QCAT_MAX_QUBITS")) c.max_qubits = std::atoi(q);
    if (const char* d = std::getenv("QCAT_MAX_DIM")) c.max_dim = std::atoll(d);
    return c;
  }
};

inline const Caps& default_caps() {
  static const Caps caps = Caps::from_env();
  return caps;
}

}  // namespace qcat
