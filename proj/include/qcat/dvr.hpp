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
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_int.hpp>

#include "qcat/core.hpp"
#include "qcat/linear_operator.hpp"
#include "qcat/pauli.hpp"

namespace qcat {

/// One uniformly spaced grid dimension.
struct DvrAxis {
  int points = 0;
  double x_min = 0.0;
  double dx = 0.0;
  double mass = 1.0;

  double coord(int i) const { return x_min + dx * i; }
  double x_max() const { return coord(points - 1); }

  static DvrAxis spanning(double lo, double hi, int points, double mass = 1.0) {
    require(points >= 2, "DvrAxis: need at least two points");
    return {points, lo, (hi - lo) / (points - 1), mass};
  }

  void validate() const {
    require(points >= 2, "DVR axis needs L >= 2 points, got " + std::to_string(points));
    require(dx > 0.0, "DVR axis spacing must be positive");
    require(mass > 0.0, "DVR axis mass must be positive");
  }
};

/// Product grid; flattened indices are row-major with the last axis fastest.
struct DvrGrid {
  std::vector<DvrAxis> axes;

  int dims() const { return static_cast<int>(axes.size()); }

  boost::multiprecision::cpp_int exact_size() const {
    boost::multiprecision::cpp_int n = 1;
    for (const auto& a : axes) n *= a.points;
    return n;
  }

  /// Point count written as "256^15 = <exact integer> grid points".
  std::string size_report() const {
    std::ostringstream os;
    const bool uniform = std::all_of(axes.begin(), axes.end(),
                                     [&](const DvrAxis& a) { return a.points == axes.front().points; });
    if (uniform && axes.size() > 1) {
      os << axes.front().points << '^' << axes.size();
    } else {
      for (std::size_t a = 0; a < axes.size(); ++a) os << (a ? " x " : "") << axes[a].points;
    }
    os << " = " << exact_size().str() << " grid points";
    return os.str();
  }

  /// Point count, refusing anything above the cap.
  std::int64_t size(const Caps& caps = default_caps(), const std::string& what = "DVR grid") const {
    if (exact_size() > caps.max_dim) {
      throw CapExceeded(what + ": " + size_report() + " exceeds the cap of " +
                        std::to_string(caps.max_dim) + " basis states");
    }
    return static_cast<std::int64_t>(exact_size());
  }

  std::vector<std::int64_t> strides() const {
    std::vector<std::int64_t> s(axes.size(), 1);
    for (int a = dims() - 2; a >= 0; --a) s[a] = s[a + 1] * axes[a + 1].points;
    return s;
  }

  std::vector<int> unflatten(std::int64_t g) const {
    std::vector<int> idx(axes.size());
    for (int a = dims() - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(g % axes[a].points);
      g /= axes[a].points;
    }
    return idx;
  }

  std::int64_t flatten(std::span<const int> idx) const {
    std::int64_t g = 0;
    for (int a = 0; a < dims(); ++a) g = g * axes[a].points + idx[a];
    return g;
  }

  void validate() const {
    require(!axes.empty(), "DVR grid has no dimensions");
    for (const auto& a : axes) a.validate();
  }
};

/**
 * Grid, tabulated potential energy surfaces and optional diabatic couplings.
 * Couplings are stored once per unordered pair (I < J), which makes
 * V_IJ = V_JI by construction.
 */
struct DvrSystem {
  DvrGrid grid;
  std::vector<RVec> surfaces;
  std::map<std::pair<int, int>, RVec> couplings;

  int n_surfaces() const { return static_cast<int>(surfaces.size()); }

  const RVec* coupling(int i, int j) const {
    if (i == j) return nullptr;
    auto it = couplings.find({std::min(i, j), std::max(i, j)});
    return it == couplings.end() ? nullptr : &it->second;
  }

  void validate() const {
    grid.validate();
    require(!surfaces.empty(), "DVR system has no surfaces");
    const auto n = grid.exact_size();
    for (std::size_t i = 0; i < surfaces.size(); ++i) {
      if (surfaces[i].size() != n) {
        throw InvalidInput("surface " + std::to_string(i) + " has " +
                           std::to_string(surfaces[i].size()) + " values, grid has " +
                           grid.size_report());
      }
    }
    for (const auto& [k, v] : couplings) {
      require(k.first < k.second && k.first >= 0 && k.second < n_surfaces(),
              "coupling indices out of range");
      require(v.size() == n, "coupling array size does not match the grid");
    }
  }

  void check_surface(int s) const {
    if (s < 0 || s >= n_surfaces()) {
      throw InvalidInput("surface index " + std::to_string(s) + " outside [0, " +
                         std::to_string(n_surfaces()) + ")");
    }
  }
};

/// Tabulates f(coordinates) over the grid.
template <class F>
RVec tabulate(const DvrGrid& g, F&& f, const Caps& caps = default_caps()) {
  const std::int64_t n = g.size(caps, "tabulate");
  RVec v(n);
  std::vector<double> x(g.axes.size());
  for (std::int64_t k = 0; k < n; ++k) {
    const auto idx = g.unflatten(k);
    for (int a = 0; a < g.dims(); ++a) x[a] = g.axes[a].coord(idx[a]);
    v[k] = f(std::span<const double>(x));
  }
  return v;
}

// ---------------------------------------------------------------------------
// Kinetic energy

/// Colbert-Miller sinc-DVR kinetic matrix for -1/(2m) d^2/dx^2 on a uniform
/// grid: pi^2/(6 m dx^2) on the diagonal and (-1)^{i-j}/(m dx^2 (i-j)^2) off it.
inline RMat sinc_dvr_kinetic(const DvrAxis& axis) {
  axis.validate();
  const int l = axis.points;
  const double scale = 1.0 / (axis.mass * axis.dx * axis.dx);
  RMat t(l, l);
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < l; ++j) {
      if (i == j) {
        t(i, j) = scale * kPi * kPi / 6.0;
      } else {
        const double d = i - j;
        t(i, j) = scale * (((i - j) % 2 == 0) ? 1.0 : -1.0) / (d * d);
      }
    }
  }
  return t;
}

/// Same matrix from explicit coordinates; rejects non-uniform spacing.
inline RMat sinc_dvr_kinetic(std::span<const double> coords, double mass) {
  require(coords.size() >= 2, "sinc_dvr_kinetic: need at least two points");
  const double dx = coords[1] - coords[0];
  for (std::size_t i = 1; i < coords.size(); ++i) {
    const double d = coords[i] - coords[i - 1];
    if (!(d > 0.0) || std::abs(d - dx) > 1e-9 * std::max(1.0, std::abs(dx))) {
      throw InvalidInput("sinc_dvr_kinetic: grid is not uniform at point " + std::to_string(i));
    }
  }
  return sinc_dvr_kinetic(DvrAxis{static_cast<int>(coords.size()), coords[0], dx, mass});
}

namespace detail {

/// out += (I x .. x K x .. x I) in for a dense per-axis matrix K acting on
/// the axis with the given stride. Views the flat array as blocks of shape
/// (stride, L) in column-major order so each block is one matrix product.
template <class Mat>
void apply_axis(const Mat& k, std::int64_t stride, const CVec& in, CVec& out) {
  const std::int64_t l = k.rows();
  const std::int64_t block = l * stride;
  const std::int64_t outer = in.size() / block;
  const auto kt = k.transpose();
  for (std::int64_t o = 0; o < outer; ++o) {
    Eigen::Map<const CMat> src(in.data() + o * block, stride, l);
    Eigen::Map<CMat> dst(out.data() + o * block, stride, l);
    dst.noalias() += src * kt;
  }
}

}  // namespace detail

/**
 * Matrix-free action of the block Hamiltonian over all surfaces:
 * diagonal blocks T + E_I, off-diagonal blocks diag(V_IJ). Amplitudes are
 * ordered surface-major (index = I * grid_size + g).
 */
class DvrOperator {
 public:
  DvrOperator(const DvrSystem& sys, std::vector<int> surfaces, const Caps& caps)
      : grid_size_(sys.grid.size(caps, "DVR Hamiltonian")), surfaces_(std::move(surfaces)) {
    sys.validate();
    check_dim_cap(grid_size_ * static_cast<std::int64_t>(surfaces_.size()), caps, "DVR Hamiltonian");
    const auto st = sys.grid.strides();
    for (int a = 0; a < sys.grid.dims(); ++a) {
      kinetic_.push_back(sinc_dvr_kinetic(sys.grid.axes[a]).cast<cplx>());
      strides_.push_back(st[a]);
    }
    for (int s : surfaces_) {
      sys.check_surface(s);
      potential_.push_back(sys.surfaces[s]);
    }
    for (std::size_t i = 0; i < surfaces_.size(); ++i) {
      for (std::size_t j = i + 1; j < surfaces_.size(); ++j) {
        if (const RVec* v = sys.coupling(surfaces_[i], surfaces_[j])) {
          coupling_.push_back({static_cast<int>(i), static_cast<int>(j), *v});
        }
      }
    }
  }

  std::int64_t dim() const { return grid_size_ * static_cast<std::int64_t>(surfaces_.size()); }
  std::int64_t grid_size() const { return grid_size_; }

  void apply(const CVec& in, CVec& out) const {
    require(in.size() == dim(), "DvrOperator: state dimension mismatch");
    out = CVec::Zero(dim());
    const std::int64_t g = grid_size_;
    for (std::size_t s = 0; s < surfaces_.size(); ++s) {
      const CVec block = in.segment(static_cast<std::int64_t>(s) * g, g);
      CVec res = potential_[s].cast<cplx>().cwiseProduct(block);
      for (std::size_t a = 0; a < kinetic_.size(); ++a) detail::apply_axis(kinetic_[a], strides_[a], block, res);
      out.segment(static_cast<std::int64_t>(s) * g, g) = res;
    }
    for (const auto& c : coupling_) {
      out.segment(c.i * g, g) += c.v.cast<cplx>().cwiseProduct(in.segment(c.j * g, g));
      out.segment(c.j * g, g) += c.v.cast<cplx>().cwiseProduct(in.segment(c.i * g, g));
    }
  }

  LinearOperator as_linear_operator() const {
    auto self = std::make_shared<const DvrOperator>(*this);
    return {dim(), [self](const CVec& in, CVec& out) { self->apply(in, out); }};
  }

 private:
  struct Coupling {
    int i, j;
    RVec v;
  };
  std::int64_t grid_size_;
  std::vector<int> surfaces_;
  std::vector<CMat> kinetic_;
  std::vector<std::int64_t> strides_;
  std::vector<RVec> potential_;
  std::vector<Coupling> coupling_;
};

/// Sparse DVR Hamiltonian on one surface: Kronecker sum of per-axis kinetic
/// matrices plus the tabulated potential on the diagonal.
inline SpMat build_dvr_hamiltonian(const DvrSystem& sys, int surface,
                                   const Caps& caps = default_caps()) {
  sys.grid.validate();
  const std::int64_t n = sys.grid.size(caps, "DVR Hamiltonian");
  sys.validate();
  sys.check_surface(surface);
  const auto st = sys.grid.strides();
  std::vector<RMat> kin;
  for (const auto& a : sys.grid.axes) kin.push_back(sinc_dvr_kinetic(a));
  std::vector<Eigen::Triplet<cplx, std::int64_t>> trips;
  std::int64_t nnz = n;
  for (const auto& a : sys.grid.axes) nnz += n * (a.points - 1);
  trips.reserve(static_cast<std::size_t>(nnz));
  for (std::int64_t g = 0; g < n; ++g) {
    const auto idx = sys.grid.unflatten(g);
    double diag = sys.surfaces[surface][g];
    for (int a = 0; a < sys.grid.dims(); ++a) {
      diag += kin[a](idx[a], idx[a]);
      for (int j = 0; j < sys.grid.axes[a].points; ++j) {
        if (j == idx[a]) continue;
        trips.emplace_back(g, g + (j - idx[a]) * st[a], kin[a](idx[a], j));
      }
    }
    trips.emplace_back(g, g, diag);
  }
  SpMat h(n, n);
  h.setFromTriplets(trips.begin(), trips.end());
  return h;
}

/// Block Hamiltonian over all surfaces with diabatic couplings, surface-major.
inline SpMat build_block_hamiltonian(const DvrSystem& sys, const Caps& caps = default_caps()) {
  sys.grid.validate();
  const std::int64_t n = sys.grid.size(caps, "DVR Hamiltonian");
  sys.validate();
  check_dim_cap(n * sys.n_surfaces(), caps, "DVR block Hamiltonian");
  std::vector<Eigen::Triplet<cplx, std::int64_t>> trips;
  for (int s = 0; s < sys.n_surfaces(); ++s) {
    const SpMat h = build_dvr_hamiltonian(sys, s, caps);
    for (std::int64_t r = 0; r < h.outerSize(); ++r) {
      for (SpMat::InnerIterator it(h, r); it; ++it) trips.emplace_back(s * n + r, s * n + it.col(), it.value());
    }
  }
  for (const auto& [k, v] : sys.couplings) {
    for (std::int64_t g = 0; g < n; ++g) {
      if (v[g] == 0.0) continue;
      trips.emplace_back(k.first * n + g, k.second * n + g, v[g]);
      trips.emplace_back(k.second * n + g, k.first * n + g, v[g]);
    }
  }
  SpMat h(n * sys.n_surfaces(), n * sys.n_surfaces());
  h.setFromTriplets(trips.begin(), trips.end());
  return h;
}

// ---------------------------------------------------------------------------
// Qubit encodings of the grid
//
// Both encodings place the last axis on the lowest qubits so that, for the
// binary encoding, the computational basis index equals the flattened grid
// index.

inline std::int64_t direct_qubit_count(std::int64_t dims, std::int64_t points) { return dims * points; }

inline std::int64_t binary_qubit_count(std::int64_t dims, std::int64_t points) {
  require(points >= 2 && std::has_single_bit(static_cast<std::uint64_t>(points)),
          "binary encoding needs a power-of-two point count, got " + std::to_string(points));
  return dims * std::countr_zero(static_cast<std::uint64_t>(points));
}

inline int direct_qubit_count(const DvrGrid& g) {
  int n = 0;
  for (const auto& a : g.axes) n += a.points;
  return n;
}

inline int binary_qubit_count(const DvrGrid& g) {
  int n = 0;
  for (const auto& a : g.axes) n += static_cast<int>(binary_qubit_count(1, a.points));
  return n;
}

namespace detail {

/// First qubit of each axis when axes are laid out last-axis-lowest.
inline std::vector<int> axis_offsets(const std::vector<int>& widths) {
  std::vector<int> off(widths.size(), 0);
  int acc = 0;
  for (int a = static_cast<int>(widths.size()) - 1; a >= 0; --a) {
    off[a] = acc;
    acc += widths[a];
  }
  return off;
}

inline std::vector<int> direct_offsets(const DvrGrid& g) {
  std::vector<int> w;
  for (const auto& a : g.axes) w.push_back(a.points);
  return axis_offsets(w);
}

inline std::vector<int> binary_offsets(const DvrGrid& g) {
  std::vector<int> w;
  for (const auto& a : g.axes) w.push_back(static_cast<int>(binary_qubit_count(1, a.points)));
  return axis_offsets(w);
}

}  // namespace detail

/// Basis states of the one-hot subspace in flattened grid order.
inline std::vector<std::uint64_t> one_hot_basis(const DvrGrid& g, const Caps& caps = default_caps()) {
  require(direct_qubit_count(g) <= 63, "one_hot_basis: more than 63 qubits");
  const std::int64_t n = g.size(caps, "one-hot basis");
  const auto off = detail::direct_offsets(g);
  std::vector<std::uint64_t> out(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) {
    const auto idx = g.unflatten(k);
    std::uint64_t b = 0;
    for (int a = 0; a < g.dims(); ++a) b |= std::uint64_t{1} << (off[a] + idx[a]);
    out[static_cast<std::size_t>(k)] = b;
  }
  return out;
}

/**
 * One-hot encoding: qubit (axis a, point i) is 1 when the coordinate of axis
 * a sits on point i. Hops |i><j| + |j><i| become (X_i X_j + Y_i Y_j)/2,
 * on-site terms use n_i = (I - Z_i)/2 and the potential at a grid point is
 * the product of the M projectors selecting it.
 */
inline PauliOperator direct_map(const DvrSystem& sys, int surface,
                                double drop_threshold = kDefaultDropThreshold,
                                const Caps& caps = default_caps()) {
  sys.validate();
  sys.check_surface(surface);
  const DvrGrid& g = sys.grid;
  const int nq = direct_qubit_count(g);
  const auto off = detail::direct_offsets(g);
  PauliOperator out(nq);
  auto number = [&](int q) {
    return op_combine({{0.5, PauliOperator::identity(nq)},
                       {-0.5, PauliOperator::single(PauliString::single(nq, q, Pauli::Z))}},
                      0.0);
  };
  for (int a = 0; a < g.dims(); ++a) {
    const RMat t = sinc_dvr_kinetic(g.axes[a]);
    for (int i = 0; i < g.axes[a].points; ++i) {
      const int qi = off[a] + i;
      out.add(number(qi), t(i, i));
      for (int j = i + 1; j < g.axes[a].points; ++j) {
        const int qj = off[a] + j;
        PauliString xx(nq), yy(nq);
        xx.set(qi, Pauli::X);
        xx.set(qj, Pauli::X);
        yy.set(qi, Pauli::Y);
        yy.set(qj, Pauli::Y);
        out.add(xx, 0.5 * t(i, j));
        out.add(yy, 0.5 * t(i, j));
      }
    }
  }
  const std::int64_t n = g.size(caps, "direct_map potential");
  const RVec& v = sys.surfaces[surface];
  const int m = g.dims();
  for (std::int64_t k = 0; k < n; ++k) {
    if (v[k] == 0.0) continue;
    const auto idx = g.unflatten(k);
    // prod_a (I - Z_a)/2 = 2^-M sum_{S} (-1)^{|S|} prod_{a in S} Z_a
    const double w = v[k] / static_cast<double>(std::int64_t{1} << m);
    for (std::uint32_t subset = 0; subset < (1U << m); ++subset) {
      PauliString s(nq);
      for (int a = 0; a < m; ++a) {
        if ((subset >> a) & 1U) s.set(off[a] + idx[a], Pauli::Z);
      }
      out.add(s, (std::popcount(subset) & 1) ? -w : w);
    }
  }
  return out.simplify(drop_threshold);
}

/**
 * Binary encoding: the grid index of each axis is written in log2(L) qubits
 * (bit j on qubit offset + j). Per-axis kinetic matrices and the full
 * diagonal potential are expanded in Pauli strings by Walsh-Hadamard
 * transforms.
 */
inline PauliOperator binary_map(const DvrSystem& sys, int surface,
                                double drop_threshold = kDefaultDropThreshold,
                                const Caps& caps = default_caps()) {
  sys.validate();
  sys.check_surface(surface);
  const DvrGrid& g = sys.grid;
  const int nq = binary_qubit_count(g);
  detail::check_matrix_cap(nq, caps);
  const auto off = detail::binary_offsets(g);
  PauliOperator out(nq);
  for (int a = 0; a < g.dims(); ++a) {
    const PauliOperator ta = matrix_to_pauli(sinc_dvr_kinetic(g.axes[a]).cast<cplx>(), 0.0);
    out.add(embed_operator(ta, nq, off[a]));
  }
  // With last-axis-lowest offsets the qubit index equals the grid index.
  CVec diag = sys.surfaces[surface].cast<cplx>();
  walsh_hadamard(diag);
  const double inv = 1.0 / static_cast<double>(diag.size());
  for (std::int64_t z = 0; z < diag.size(); ++z) {
    if (diag[z] == cplx{0.0}) continue;
    PauliString s(nq);
    if (nq > 0) s.z_words()[0] = static_cast<std::uint64_t>(z);
    out.add(s, diag[z].real() * inv);
  }
  return out.simplify(drop_threshold);
}

// ---------------------------------------------------------------------------
// Harmonic analysis

struct HarmonicModes {
  std::vector<double> frequencies;            // ascending, real modes
  std::vector<RVec> displacements;            // mass-weighted eigenvectors
  std::vector<double> imaginary_frequencies;  // |omega| of negative-curvature modes
  std::vector<RVec> imaginary_displacements;
  RMat hessian;                               // mass-weighted
};

/**
 * Normal modes at a grid point near `minimum`. The Hessian comes from
 * central differences on the tabulated surface with one grid spacing as the
 * step, is mass-weighted and diagonalized; positive eigenvalues give
 * frequencies, negative ones are reported as imaginary modes.
 */
inline HarmonicModes harmonic_modes(const DvrSystem& sys, std::span<const double> minimum,
                                    int surface = 0) {
  sys.validate();
  sys.check_surface(surface);
  const DvrGrid& g = sys.grid;
  require(static_cast<int>(minimum.size()) == g.dims(), "harmonic_modes: coordinate count mismatch");
  std::vector<int> c(g.dims());
  for (int a = 0; a < g.dims(); ++a) {
    const auto& ax = g.axes[a];
    const long i = std::lround((minimum[a] - ax.x_min) / ax.dx);
    if (i <= 0 || i >= ax.points - 1) {
      throw InvalidInput("harmonic_modes: point " + format_double(minimum[a]) + " on axis " +
                         std::to_string(a) + " is on or outside the grid boundary");
    }
    c[a] = static_cast<int>(i);
  }
  const RVec& v = sys.surfaces[surface];
  auto at = [&](std::vector<int> idx) { return v[g.flatten(idx)]; };
  const int m = g.dims();
  RMat h(m, m);
  const double v0 = at(c);
  for (int a = 0; a < m; ++a) {
    const double dx = g.axes[a].dx;
    auto p = c, q = c;
    ++p[a];
    --q[a];
    h(a, a) = (at(p) - 2.0 * v0 + at(q)) / (dx * dx);
    for (int b = a + 1; b < m; ++b) {
      const double dy = g.axes[b].dx;
      auto pp = c, pm = c, mp = c, mm = c;
      ++pp[a], ++pp[b];
      ++pm[a], --pm[b];
      --mp[a], ++mp[b];
      --mm[a], --mm[b];
      h(a, b) = h(b, a) = (at(pp) - at(pm) - at(mp) + at(mm)) / (4.0 * dx * dy);
    }
  }
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) h(a, b) /= std::sqrt(g.axes[a].mass * g.axes[b].mass);
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(h);
  HarmonicModes out;
  out.hessian = h;
  for (int k = 0; k < m; ++k) {
    const double lam = es.eigenvalues()[k];
    if (lam >= 0.0) {
      out.frequencies.push_back(std::sqrt(lam));
      out.displacements.push_back(es.eigenvectors().col(k));
    } else {
      out.imaginary_frequencies.push_back(std::sqrt(-lam));
      out.imaginary_displacements.push_back(es.eigenvectors().col(k));
    }
  }
  return out;
}

}  // namespace qcat
