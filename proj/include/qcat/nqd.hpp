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
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qcat/core.hpp"
#include "qcat/dvr.hpp"
#include "qcat/eigensolver.hpp"
#include "qcat/evolution.hpp"
#include "qcat/state.hpp"

namespace qcat {

/**
 * Nuclear wavefunction over all surfaces of a DvrSystem.
 *
 * Amplitudes are surface-major (index = I * grid_size + g) and normalized as
 * sum |c|^2 = 1; the continuum density at grid point g is |c_g|^2 / dV with
 * dV the product of the grid spacings.
 */
struct Wavepacket {
  std::shared_ptr<const DvrSystem> system;
  CVec amplitudes;
  double time = 0.0;
  std::vector<std::string> warnings;

  std::int64_t grid_size() const { return amplitudes.size() / system->n_surfaces(); }
  double norm() const { return amplitudes.norm(); }

  double population(int surface) const {
    return amplitudes.segment(surface * grid_size(), grid_size()).squaredNorm();
  }

  /// <x_a> over all surfaces.
  double mean_position(int axis) const {
    const auto& g = system->grid;
    const std::int64_t n = grid_size();
    double m = 0.0;
    for (std::int64_t k = 0; k < amplitudes.size(); ++k) {
      m += std::norm(amplitudes[k]) * g.axes[axis].coord(g.unflatten(k % n)[axis]);
    }
    return m / amplitudes.squaredNorm();
  }

  double position_spread(int axis) const {
    const auto& g = system->grid;
    const std::int64_t n = grid_size();
    const double mu = mean_position(axis);
    double v = 0.0;
    for (std::int64_t k = 0; k < amplitudes.size(); ++k) {
      const double x = g.axes[axis].coord(g.unflatten(k % n)[axis]) - mu;
      v += std::norm(amplitudes[k]) * x * x;
    }
    return std::sqrt(v / amplitudes.squaredNorm());
  }

  StateVector state() const { return StateVector(amplitudes, BasisTag::kGrid); }
};

/// Fraction of the norm a Gaussian of the given position spread loses outside
/// [lo, hi] (grid cell edges).
inline double gaussian_tail_outside(double center, double sigma, double lo, double hi) {
  const double s = sigma * std::sqrt(2.0);
  const double inside = 0.5 * (std::erf((hi - center) / s) - std::erf((lo - center) / s));
  return std::max(0.0, 1.0 - inside);
}

/**
 * Product of 1-D Gaussians exp(-(x-x0)^2/(4 sigma^2) + i k (x-x0)) placed on
 * one surface and normalized on the grid. When more than 1e-8 of the
 * continuum norm falls outside the grid the packet is rejected (strict) or
 * carries a warning.
 */
inline Wavepacket gaussian_packet(std::shared_ptr<const DvrSystem> sys, int surface,
                                  std::span<const double> center, std::span<const double> widths,
                                  std::span<const double> momenta, bool strict = true,
                                  const Caps& caps = default_caps()) {
  require(sys != nullptr, "gaussian_packet: no system");
  sys->validate();
  sys->check_surface(surface);
  const DvrGrid& g = sys->grid;
  const int m = g.dims();
  require(static_cast<int>(center.size()) == m && static_cast<int>(widths.size()) == m &&
              static_cast<int>(momenta.size()) == m,
          "gaussian_packet: center, widths and momenta need one entry per dimension");
  double kept = 1.0;
  for (int a = 0; a < m; ++a) {
    const auto& ax = g.axes[a];
    require(widths[a] > 0.0, "gaussian_packet: widths must be positive");
    require(center[a] >= ax.x_min && center[a] <= ax.x_max(),
            "gaussian_packet: center " + format_double(center[a]) + " outside axis " + std::to_string(a));
    kept *= 1.0 - gaussian_tail_outside(center[a], widths[a], ax.x_min - 0.5 * ax.dx, ax.x_max() + 0.5 * ax.dx);
  }
  Wavepacket wp;
  wp.system = sys;
  const std::int64_t n = g.size(caps, "wavepacket");
  check_dim_cap(n * sys->n_surfaces(), caps, "wavepacket");
  if (1.0 - kept > 1e-8) {
    const std::string msg = "gaussian_packet: grid truncates " + format_double(1.0 - kept) +
                            " of the packet norm (limit 1e-8)";
    if (strict) throw InvalidInput(msg);
    wp.warnings.push_back(msg);
  }
  wp.amplitudes = CVec::Zero(n * sys->n_surfaces());
  for (std::int64_t k = 0; k < n; ++k) {
    const auto idx = g.unflatten(k);
    cplx v = 1.0;
    for (int a = 0; a < m; ++a) {
      const double d = g.axes[a].coord(idx[a]) - center[a];
      v *= std::exp(cplx(-d * d / (4.0 * widths[a] * widths[a]), momenta[a] * d));
    }
    wp.amplitudes[surface * n + k] = v;
  }
  wp.amplitudes /= wp.amplitudes.norm();
  return wp;
}

/// Ground state of the surface-0 Hamiltonian placed unchanged on `target`.
inline Wavepacket franck_condon_initial(std::shared_ptr<const DvrSystem> sys, int target,
                                        double tol = kDefaultEigenTol, const Caps& caps = default_caps()) {
  require(sys != nullptr, "franck_condon_initial: no system");
  sys->validate();
  if (sys->n_surfaces() < 2) {
    throw InvalidInput("franck_condon_initial: need at least two surfaces, system has " +
                       std::to_string(sys->n_surfaces()));
  }
  sys->check_surface(target);
  const DvrOperator h0(*sys, {0}, caps);
  const auto r = ground_states(h0.as_linear_operator(), 1, tol);
  const std::int64_t n = h0.grid_size();
  Wavepacket wp;
  wp.system = sys;
  wp.amplitudes = CVec::Zero(n * sys->n_surfaces());
  CVec v = r.eigenvectors.col(0);
  // fix the global phase so the largest amplitude is real and positive
  std::int64_t imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  v *= std::abs(v[imax]) / v[imax];
  wp.amplitudes.segment(target * n, n) = v / v.norm();
  return wp;
}

// ---------------------------------------------------------------------------
// Propagation

enum class PropagationMethod { kExactKrylov, kTrotter2 };

inline PropagationMethod parse_propagation_method(const std::string& s) {
  if (s == "exact_krylov" || s == "exact") return PropagationMethod::kExactKrylov;
  if (s == "trotter2" || s == "split_operator") return PropagationMethod::kTrotter2;
  throw InvalidInput("unknown propagation method '" + s + "' (expected exact_krylov or trotter2)");
}

inline std::string propagation_method_name(PropagationMethod m) {
  return m == PropagationMethod::kExactKrylov ? "exact_krylov" : "trotter2";
}

struct PropagationOptions {
  PropagationMethod method = PropagationMethod::kExactKrylov;
  /// Norm allowed in the boundary zone before the run aborts; <= 0 disables.
  double leak_threshold = 1e-4;
  KrylovOptions krylov;
};

/// Number of outermost points per side that form the boundary zone.
inline int boundary_zone_width(int points) { return std::max(2, points / 20); }

/// Population within the boundary zone of any axis.
inline double boundary_population(const Wavepacket& wp) {
  const auto& g = wp.system->grid;
  const std::int64_t n = wp.grid_size();
  double p = 0.0;
  for (std::int64_t k = 0; k < wp.amplitudes.size(); ++k) {
    const auto idx = g.unflatten(k % n);
    for (int a = 0; a < g.dims(); ++a) {
      const int w = boundary_zone_width(g.axes[a].points);
      if (idx[a] < w || idx[a] >= g.axes[a].points - w) {
        p += std::norm(wp.amplitudes[k]);
        break;
      }
    }
  }
  return p;
}

/**
 * Steps a wavepacket under the block Hamiltonian with a fixed time step.
 *
 * kExactKrylov applies exp(-i H dt) by Lanczos projection. kTrotter2 is the
 * symmetric split exp(-i V dt/2) exp(-i T dt) exp(-i V dt/2): the kinetic
 * factor is applied axis by axis through dense per-axis exponentials, and
 * the potential factor exponentiates the S x S surface/coupling block at
 * every grid point.
 */
class Propagator {
 public:
  Propagator(std::shared_ptr<const DvrSystem> sys, double dt, PropagationOptions opt = {},
             const Caps& caps = default_caps())
      : sys_(std::move(sys)), dt_(dt), opt_(opt) {
    require(sys_ != nullptr, "Propagator: no system");
    require(dt > 0.0, "Propagator: dt must be positive");
    std::vector<int> all(sys_->n_surfaces());
    for (int s = 0; s < sys_->n_surfaces(); ++s) all[s] = s;
    h_ = std::make_shared<DvrOperator>(*sys_, all, caps);
    if (opt_.method == PropagationMethod::kTrotter2) build_split_factors();
  }

  const DvrOperator& hamiltonian() const { return *h_; }
  double dt() const { return dt_; }

  double energy(const Wavepacket& wp) const {
    CVec hv;
    h_->apply(wp.amplitudes, hv);
    return wp.amplitudes.dot(hv).real() / wp.amplitudes.squaredNorm();
  }

  void step(Wavepacket& wp) const {
    require(wp.amplitudes.size() == h_->dim(), "Propagator: wavepacket does not match the system");
    if (opt_.method == PropagationMethod::kExactKrylov) {
      wp.amplitudes = evolve_exact(h_->as_linear_operator(), wp.state(), dt_, opt_.krylov).amplitudes;
    } else {
      apply_potential_half(wp.amplitudes);
      apply_kinetic(wp.amplitudes);
      apply_potential_half(wp.amplitudes);
    }
    wp.time += dt_;
    if (opt_.leak_threshold > 0.0) {
      const double leak = boundary_population(wp);
      if (leak > opt_.leak_threshold) {
        throw NumericalError("boundary leak: population " + format_double(leak) +
                             " in the outer grid zone at t=" + format_double(wp.time) +
                             " exceeds " + format_double(opt_.leak_threshold) +
                             "; enlarge the grid or shorten the run");
      }
    }
  }

 private:
  void build_split_factors() {
    const DvrGrid& g = sys_->grid;
    const auto st = g.strides();
    for (int a = 0; a < g.dims(); ++a) {
      Eigen::SelfAdjointEigenSolver<RMat> es(sinc_dvr_kinetic(g.axes[a]));
      CVec ph(es.eigenvalues().size());
      for (int i = 0; i < ph.size(); ++i) ph[i] = std::exp(cplx(0.0, -es.eigenvalues()[i] * dt_));
      const CMat u = es.eigenvectors().cast<cplx>();
      kinetic_.push_back(u * ph.asDiagonal() * u.adjoint());
      strides_.push_back(st[a]);
    }
    const int ns = sys_->n_surfaces();
    const std::int64_t n = h_->grid_size();
    if (ns == 1) {
      diag_phase_ = CVec(n);
      for (std::int64_t k = 0; k < n; ++k) diag_phase_[k] = std::exp(cplx(0.0, -0.5 * dt_ * sys_->surfaces[0][k]));
      return;
    }
    blocks_.resize(static_cast<std::size_t>(n));
    RMat w(ns, ns);
    for (std::int64_t k = 0; k < n; ++k) {
      for (int i = 0; i < ns; ++i) {
        w(i, i) = sys_->surfaces[i][k];
        for (int j = i + 1; j < ns; ++j) {
          const RVec* v = sys_->coupling(i, j);
          w(i, j) = w(j, i) = v ? (*v)[k] : 0.0;
        }
      }
      Eigen::SelfAdjointEigenSolver<RMat> es(w);
      CVec ph(ns);
      for (int i = 0; i < ns; ++i) ph[i] = std::exp(cplx(0.0, -0.5 * dt_ * es.eigenvalues()[i]));
      const CMat u = es.eigenvectors().cast<cplx>();
      blocks_[static_cast<std::size_t>(k)] = u * ph.asDiagonal() * u.adjoint();
    }
  }

  void apply_potential_half(CVec& c) const {
    const std::int64_t n = h_->grid_size();
    if (diag_phase_.size() > 0) {
      c.array() *= diag_phase_.array();
      return;
    }
    const int ns = sys_->n_surfaces();
    CVec local(ns);
    for (std::int64_t k = 0; k < n; ++k) {
      for (int i = 0; i < ns; ++i) local[i] = c[i * n + k];
      local = blocks_[static_cast<std::size_t>(k)] * local;
      for (int i = 0; i < ns; ++i) c[i * n + k] = local[i];
    }
  }

  void apply_kinetic(CVec& c) const {
    const std::int64_t n = h_->grid_size();
    for (int s = 0; s < sys_->n_surfaces(); ++s) {
      CVec block = c.segment(s * n, n);
      for (std::size_t a = 0; a < kinetic_.size(); ++a) {
        CVec out = CVec::Zero(n);
        detail::apply_axis(kinetic_[a], strides_[a], block, out);
        block = std::move(out);
      }
      c.segment(s * n, n) = block;
    }
  }

  std::shared_ptr<const DvrSystem> sys_;
  double dt_;
  PropagationOptions opt_;
  std::shared_ptr<DvrOperator> h_;
  std::vector<CMat> kinetic_;
  std::vector<std::int64_t> strides_;
  CVec diag_phase_;
  std::vector<CMat> blocks_;
};

/// Propagates `steps` steps; the observer sees the packet at t0 and after
/// every step. Returns the final packet.
inline Wavepacket propagate(Wavepacket wp, double dt, int steps, const PropagationOptions& opt,
                            const std::function<void(const Wavepacket&)>& observer = {},
                            const Caps& caps = default_caps()) {
  require(steps >= 0, "propagate: negative step count");
  const Propagator prop(wp.system, dt, opt, caps);
  if (observer) observer(wp);
  for (int s = 0; s < steps; ++s) {
    prop.step(wp);
    if (observer) observer(wp);
  }
  return wp;
}

/// Full time series of packets, initial packet included.
inline std::vector<Wavepacket> propagate_series(const Wavepacket& wp, double dt, int steps,
                                                const PropagationOptions& opt = {},
                                                const Caps& caps = default_caps()) {
  std::vector<Wavepacket> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  propagate(wp, dt, steps, opt, [&](const Wavepacket& w) { out.push_back(w); }, caps);
  return out;
}

// ---------------------------------------------------------------------------
// Observables

/// Hyperplane x_axis = threshold separating reactants from products.
struct DividingSurface {
  int axis = 0;
  double threshold = 0.0;
  bool product_above = true;

  /// Last grid index on the reactant-facing side of the plane along `axis`
  /// (points 0..i are below the threshold).
  int last_below(const DvrGrid& g) const {
    require(axis >= 0 && axis < g.dims(), "dividing surface axis out of range");
    const auto& ax = g.axes[axis];
    const int i = static_cast<int>(std::floor((threshold - ax.x_min) / ax.dx));
    if (i < 0 || i >= ax.points - 1) {
      throw InvalidInput("dividing surface at " + format_double(threshold) +
                         " is not inside the grid range [" + format_double(ax.x_min) + ", " +
                         format_double(ax.x_max()) + "]");
    }
    return i;
  }

  bool is_product(const DvrGrid& g, std::span<const int> idx) const {
    const bool above = idx[axis] > last_below(g);
    return above == product_above;
  }
};

inline double product_probability(const Wavepacket& wp, const DividingSurface& ds) {
  const auto& g = wp.system->grid;
  const int cut = ds.last_below(g);
  const std::int64_t stride = g.strides()[ds.axis];
  const int l = g.axes[ds.axis].points;
  double q = 0.0;
  for (std::int64_t k = 0; k < wp.amplitudes.size(); ++k) {
    const bool above = (k / stride) % l > cut;
    if (above == ds.product_above) q += std::norm(wp.amplitudes[k]);
  }
  return q;
}

enum class FluxMethod { kExact, kCenteredDifference };

/**
 * Probability current into the product region.
 *
 * kExact is the rate of change of the product population implied by the
 * grid Hamiltonian, J = 2 sum_{i in P, j not in P} Im(c_i^* H_ij c_j); only the
 * kinetic matrix of the dividing axis links the two sides. It satisfies
 * dQ/dt = J exactly for exact propagation.
 *
 * kCenteredDifference is the symmetrized current (1/m) Im(chi^* dchi/dx)
 * evaluated midway between the two grid points that bracket the surface and
 * summed over the transverse grid: J = sum Im(c_i^* c_{i+1}) / (m dx^2).
 */
inline double probability_flux(const Wavepacket& wp, const DividingSurface& ds,
                               FluxMethod method = FluxMethod::kExact) {
  const auto& g = wp.system->grid;
  const int cut = ds.last_below(g);
  const std::int64_t n = wp.grid_size();
  const auto st = g.strides();
  const auto& ax = g.axes[ds.axis];
  const double sign = ds.product_above ? 1.0 : -1.0;
  double j = 0.0;
  if (method == FluxMethod::kCenteredDifference) {
    for (std::int64_t k = 0; k < wp.amplitudes.size(); ++k) {
      if (g.unflatten(k % n)[ds.axis] != cut) continue;
      j += std::imag(std::conj(wp.amplitudes[k]) * wp.amplitudes[k + st[ds.axis]]);
    }
    return sign * j / (ax.mass * ax.dx * ax.dx);
  }
  // T_ij depends only on i - j along the axis.
  const int l = ax.points;
  const double scale = 1.0 / (ax.mass * ax.dx * ax.dx);
  std::vector<double> t(static_cast<std::size_t>(l));
  for (int d = 1; d < l; ++d) t[d] = scale * (d % 2 == 0 ? 1.0 : -1.0) / (double(d) * d);
  const std::int64_t stride = st[ds.axis];
  for (std::int64_t k = 0; k < wp.amplitudes.size(); ++k) {
    if ((k / stride) % l != 0) continue;
    const cplx* c = wp.amplitudes.data() + k;
    for (int i = cut + 1; i < l; ++i) {
      cplx acc = 0.0;
      for (int jj = 0; jj <= cut; ++jj) acc += t[i - jj] * c[jj * stride];
      j += 2.0 * std::imag(std::conj(c[i * stride]) * acc);
    }
  }
  return sign * j;
}

struct NqdSeries {
  std::vector<double> times;
  std::vector<double> product;  // Q(t)
  std::vector<double> flux;     // J(t)
};

/// Trapezoid integral of J over the series.
inline double integrated_flux(const NqdSeries& s) {
  double acc = 0.0;
  for (std::size_t i = 1; i < s.times.size(); ++i) {
    acc += 0.5 * (s.flux[i] + s.flux[i - 1]) * (s.times[i] - s.times[i - 1]);
  }
  return acc;
}

/// k = <J> / rho_reactants with <J> the trapezoid time average of J.
inline double nqd_rate(const NqdSeries& s, double reactant_density) {
  require(s.times.size() == s.flux.size() && s.times.size() >= 2,
          "nqd_rate: need at least two aligned time/flux samples");
  if (!(reactant_density > 0.0)) throw InvalidInput("nqd_rate: reactant density must be positive");
  const double total = s.times.back() - s.times.front();
  require(total > 0.0, "nqd_rate: time series has zero span");
  return integrated_flux(s) / total / reactant_density;
}

}  // namespace qcat
