// Copyright 2026 The ratiolab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// The spherical ensemble M = A B^-1 with A, B independent Ginibre matrices,
// handled without an eigensolver: Kostlan moduli, the finite-n determinantal
// kernel and its infinite-Ginibre scaling limit, the stereographic picture
// and the Moebius maps that act on it.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ratiolab/cmatrix.hpp"
#include "ratiolab/rng.hpp"

namespace ratiolab {

// ---------------------------------------------------------------------------
// Kostlan moduli

/// The multiset {xi_{n,1}, ..., xi_{n,n}} with xi_{n,k}^2 = G_k / G'_{n-k+1}
/// (Beta prime(k, n-k+1)). Equal in law to the eigenvalue moduli of a
/// Ginibre ratio of size n.
inline std::vector<double> kostlan_moduli(std::size_t n, RandomStream& rng) {
  if (n < 1) throw std::invalid_argument("kostlan_moduli: n must be >= 1");
  std::vector<double> out(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double num = gamma_variate(rng, static_cast<double>(k));
    const double den = gamma_variate(rng, static_cast<double>(n - k + 1));
    out[k - 1] = std::sqrt(num / den);
  }
  return out;
}

/// (rho_max, rho_min) of a Ginibre ratio of size n, sampled exactly in law.
inline std::pair<double, double> spherical_radius_pair(std::size_t n, RandomStream& rng) {
  const auto moduli = kostlan_moduli(n, rng);
  const auto [lo, hi] = std::minmax_element(moduli.begin(), moduli.end());
  return {*hi, *lo};
}

// ---------------------------------------------------------------------------
// Kernels

/// kappa(z) = 1 / (pi (1 + |z|^2)^2), the stereographic image of the uniform
/// law on the sphere.
inline double spherical_density(Complex z) noexcept {
  const double s = 1.0 + std::norm(z);
  return 1.0 / (std::numbers::pi * s * s);
}

/// P(|z| <= r) under kappa: r^2 / (1 + r^2). Also the exact mean radial law
/// of a Ginibre ratio at every finite n.
inline double equilibrium_radial_cdf(double r) {
  if (r < 0.0) throw std::invalid_argument("equilibrium_radial_cdf: r must be >= 0");
  if (std::isinf(r)) return 1.0;
  const double r2 = r * r;
  return r2 / (1.0 + r2);
}

/// K_n(z, w) = sqrt(kappa(z) kappa(w)) n q^(n-1),
/// q = (1 + z conj(w)) / sqrt((1+|z|^2)(1+|w|^2)).
struct SphericalKernel {
  std::size_t n = 1;

  Complex operator()(Complex z, Complex w) const {
    const double nz = 1.0 + std::norm(z);
    const double nw = 1.0 + std::norm(w);
    const Complex q = (1.0 + z * std::conj(w)) / std::sqrt(nz * nw);
    const double prefactor = static_cast<double>(n) / (std::numbers::pi * nz * nw);
    if (n == 1) return prefactor;
    if (q == Complex{}) return 0.0;
    return prefactor * std::exp(static_cast<double>(n - 1) * std::log(q));
  }
};

/// K(z, w) = sqrt(gamma(z) gamma(w)) e^{z conj(w)}, gamma(z) = e^{-|z|^2} / pi.
struct GinibreInfinityKernel {
  Complex operator()(Complex z, Complex w) const {
    return std::exp(z * std::conj(w) - 0.5 * (std::norm(z) + std::norm(w))) / std::numbers::pi;
  }
};

inline Complex kernel_eval(const SphericalKernel& k, Complex z, Complex w) { return k(z, w); }
inline Complex kernel_eval(const GinibreInfinityKernel& k, Complex z, Complex w) { return k(z, w); }

using KernelPair = std::pair<Complex, Complex>;

/// The 25 pairs (z, w) over the points {0, 1, i, -1+0.5i, 1.5-i}.
inline std::vector<KernelPair> default_kernel_grid() {
  const std::array<Complex, 5> pts{Complex{0.0, 0.0}, Complex{1.0, 0.0}, Complex{0.0, 1.0},
                                   Complex{-1.0, 0.5}, Complex{1.5, -1.0}};
  std::vector<KernelPair> grid;
  for (const auto& z : pts)
    for (const auto& w : pts) grid.emplace_back(z, w);
  return grid;
}

/// sup over the grid of |(1/n) K_n(z/sqrt n, w/sqrt n) - K_inf(z, w)|.
inline double scaled_kernel_gap(std::size_t n, std::span<const KernelPair> grid) {
  if (grid.empty()) throw std::invalid_argument("scaled_kernel_gap: empty grid");
  const SphericalKernel kn{n};
  const GinibreInfinityKernel kinf;
  const double root = std::sqrt(static_cast<double>(n));
  double gap = 0.0;
  for (const auto& [z, w] : grid) {
    if (std::abs(z) > 5.0 || std::abs(w) > 5.0) {
      throw std::invalid_argument("scaled_kernel_gap: grid points must satisfy |z|, |w| <= 5");
    }
    const Complex scaled = kn(z / root, w / root) / static_cast<double>(n);
    gap = std::max(gap, std::abs(scaled - kinf(z, w)));
  }
  return gap;
}

/// det [K_n(z_i, z_j)] for n = points.size() <= 12: the joint density of the
/// n eigenvalues of a Ginibre ratio.
inline double joint_density(std::span<const Complex> points) {
  const std::size_t n = points.size();
  if (n < 1 || n > 12) throw std::invalid_argument("joint_density: need 1 <= n <= 12 points");
  const SphericalKernel k{n};
  ComplexMatrix gram(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gram(i, j) = k(points[i], points[j]);
  const auto lu = lu_decompose(gram);
  if (lu.singular()) return 0.0;
  // det = sign(P) * prod U_ii; the Gram matrix is Hermitian PSD so det is real.
  Complex det = 1.0;
  for (std::size_t i = 0; i < n; ++i) det *= lu.factors(i, i);
  std::vector<std::size_t> perm = lu.permutation;
  int sign = 1;
  for (std::size_t i = 0; i < n; ++i) {
    while (perm[i] != i) {
      std::swap(perm[i], perm[perm[i]]);
      sign = -sign;
    }
  }
  return std::max(0.0, sign * det.real());
}

// ---------------------------------------------------------------------------
// Sphere geometry

/// A point of C u {infinity}.
struct ExtendedComplex {
  Complex value{};
  bool infinite = false;

  static ExtendedComplex infinity() noexcept { return {Complex{}, true}; }
  ExtendedComplex() = default;
  ExtendedComplex(Complex z) noexcept : value(z) {}  // NOLINT: implicit on purpose

  friend bool operator==(const ExtendedComplex& a, const ExtendedComplex& b) noexcept {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }

 private:
  ExtendedComplex(Complex z, bool inf) noexcept : value(z), infinite(inf) {}
};

struct SpherePoint {
  double x1 = 0.0, x2 = 0.0, x3 = -1.0;

  double norm() const noexcept { return std::sqrt(x1 * x1 + x2 * x2 + x3 * x3); }
  bool is_north_pole() const noexcept { return x1 == 0.0 && x2 == 0.0 && x3 > 0.0; }

  static SpherePoint normalized(double a, double b, double c) {
    const double r = std::sqrt(a * a + b * b + c * c);
    if (r == 0.0) throw std::invalid_argument("SpherePoint: zero vector");
    return {a / r, b / r, c / r};
  }
};

/// North-pole stereographic projection T(x) = (x1 + i x2) / (1 - x3).
inline ExtendedComplex stereo_proj(const SpherePoint& p) {
  if (std::abs(p.norm() - 1.0) > 1e-12) throw std::invalid_argument("stereo_proj: point off the unit sphere");
  if (p.is_north_pole()) return ExtendedComplex::infinity();
  // 1 - x3 = (x1^2 + x2^2) / (1 + x3) avoids cancellation near the pole.
  const double rho2 = p.x1 * p.x1 + p.x2 * p.x2;
  const double denom = p.x3 > 0.0 ? rho2 / (1.0 + p.x3) : 1.0 - p.x3;
  return Complex{p.x1 / denom, p.x2 / denom};
}

/// T^-1(z) = (2 Re z, 2 Im z, |z|^2 - 1) / (|z|^2 + 1); infinity -> north pole.
inline SpherePoint stereo_inv(const ExtendedComplex& z) {
  if (z.infinite) return {0.0, 0.0, 1.0};
  const double r2 = std::norm(z.value);
  const double d = r2 + 1.0;
  return {2.0 * z.value.real() / d, 2.0 * z.value.imag() / d, (r2 - 1.0) / d};
}

/// z -> (alpha z + beta) / (-conj(beta) z + conj(alpha)), |alpha|^2 + |beta|^2 = 1.
/// These are exactly the sphere rotations seen through stereographic
/// projection.
class MobiusMap {
 public:
  MobiusMap() = default;

  /// Normalizes (alpha, beta) onto the unit sphere of C^2.
  MobiusMap(Complex alpha, Complex beta) {
    const double r = std::sqrt(std::norm(alpha) + std::norm(beta));
    if (r == 0.0) throw std::invalid_argument("MobiusMap: (alpha, beta) must not both vanish");
    alpha_ = alpha / r;
    beta_ = beta / r;
  }

  Complex alpha() const noexcept { return alpha_; }
  Complex beta() const noexcept { return beta_; }

  ExtendedComplex apply(const ExtendedComplex& z) const noexcept {
    if (z.infinite) {
      if (beta_ == Complex{}) return ExtendedComplex::infinity();
      return Complex{alpha_ / -std::conj(beta_)};
    }
    const Complex den = -std::conj(beta_) * z.value + std::conj(alpha_);
    if (den == Complex{}) return ExtendedComplex::infinity();
    return Complex{(alpha_ * z.value + beta_) / den};
  }

  Complex apply(Complex z) const {
    const auto r = apply(ExtendedComplex{z});
    if (r.infinite) throw std::domain_error("MobiusMap::apply: image is infinity");
    return r.value;
  }

  /// Complex derivative; the normalization makes the numerator 1.
  Complex derivative(Complex z) const noexcept {
    const Complex den = -std::conj(beta_) * z + std::conj(alpha_);
    return 1.0 / (den * den);
  }

 private:
  Complex alpha_{1.0, 0.0};
  Complex beta_{0.0, 0.0};
};

inline ExtendedComplex mobius_apply(const MobiusMap& map, const ExtendedComplex& z) {
  return map.apply(z);
}

/// The rotation R(z) = (z + lambda0) / (-conj(lambda0) z + 1), which sends 0
/// to lambda0.
inline MobiusMap mobius_from_center(Complex lambda0) { return MobiusMap(1.0, lambda0); }

}  // namespace ratiolab
