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

// Numerical diagnostics built on the Hermitized pencil
//
//   X^z = (A - z B) / sqrt(n),   H^z = [[0, X^z], [X^z*, 0]],
//
// whose 2n eigenvalues are +- the singular values of X^z. Trace convention:
// green_trace_im is the full 2n-dimensional Im Tr (H - i eta)^-1, so it
// behaves like 2n / eta for large eta; comparisons against the rescaled
// semicircle transform divide by 2n.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "ratiolab/cmatrix.hpp"
#include "ratiolab/entrylaws.hpp"
#include "ratiolab/parallel.hpp"
#include "ratiolab/rng.hpp"
#include "ratiolab/stats.hpp"

namespace ratiolab {

struct HermitizedPencil {
  Complex z{};
  ComplexMatrix x;
  ComplexMatrix h;
  /// All 2n eigenvalues of h, ascending; spectrum[n + i] = -spectrum[n - 1 - i].
  std::vector<double> spectrum;

  std::size_t n() const noexcept { return x.size(); }
  /// The n singular values of x, ascending.
  std::span<const double> singular_values() const noexcept {
    return std::span<const double>(spectrum).subspan(n());
  }
};

/// Pencil for an already-formed X.
inline HermitizedPencil hermitize_matrix(ComplexMatrix x, Complex z = {}) {
  HermitizedPencil p;
  p.z = z;
  const auto sv = ratiolab::singular_values(x);
  const std::size_t n = sv.size();
  p.spectrum.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    p.spectrum[n + i] = sv[i];
    p.spectrum[n - 1 - i] = -sv[i];
  }
  p.h = hermitize_block(x);
  p.x = std::move(x);
  return p;
}

/// X = A/sqrt(n) - z B/sqrt(n), then Hermitize.
inline HermitizedPencil hermitize(const ComplexMatrix& a, const ComplexMatrix& b, Complex z) {
  if (a.size() != b.size()) throw std::invalid_argument("hermitize: dimension mismatch");
  const double inv_root = 1.0 / std::sqrt(static_cast<double>(a.size()));
  ComplexMatrix x = a - z * b;
  x *= inv_root;
  return hermitize_matrix(std::move(x), z);
}

/// Im Tr (H - i eta)^-1 = sum over singular values of 2 eta / (s^2 + eta^2).
inline double green_trace_im(const HermitizedPencil& pencil, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("green_trace_im: eta must be positive");
  double s = 0.0;
  for (double sv : pencil.singular_values()) s += 2.0 * eta / (sv * sv + eta * eta);
  return s;
}

/// Stieltjes transform of the semicircle law on [-2, 2]: the root of
/// m^2 + w m + 1 = 0 with Im m * Im w > 0.
inline Complex msc(Complex w) {
  if (w.imag() == 0.0) throw std::domain_error("msc: w must be off the real axis");
  const Complex root = std::sqrt(w * w - 4.0);
  // Larger-magnitude root first, the other from the product m1 m2 = 1.
  Complex big = 0.5 * (-w - root);
  if (std::abs(0.5 * (-w + root)) > std::abs(big)) big = 0.5 * (-w + root);
  const Complex small = 1.0 / big;
  return big.imag() * w.imag() > 0.0 ? big : small;
}

/// msc rescaled to the variance (1 + |z|^2) of the entries of X^z.
inline Complex m_z(Complex z, Complex w) {
  const double s = std::sqrt(1.0 + std::norm(z));
  return msc(w / s) / s;
}

/// |Im Tr G(i eta) / (2n) - Im m_z(z, i eta)| for one sampled pencil.
inline double local_law_residual(const HermitizedPencil& pencil, double eta) {
  const double n = static_cast<double>(pencil.n());
  return std::abs(green_trace_im(pencil, eta) / (2.0 * n) - m_z(pencil.z, Complex{0.0, eta}).imag());
}

inline double local_law_residual(const EntryLaw& law_a, const EntryLaw& law_b, std::size_t n,
                                 Complex z, double eta, RandomStream& rng) {
  if (n < 1) throw std::invalid_argument("local_law_residual: n must be >= 1");
  if (eta < 1.0 / static_cast<double>(n)) {
    throw std::invalid_argument("local_law_residual: eta must be >= 1/n");
  }
  const auto a = sample_matrix(law_a, n, rng);
  const auto b = sample_matrix(law_b, n, rng);
  return local_law_residual(hermitize(a, b, z), eta);
}

/// Semicircle CDF on [-2, 2].
inline double semicircle_cdf(double x) noexcept {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) +
         std::asin(0.5 * x) / std::numbers::pi;
}

/// Mass of rho^z(x) = rho_sc(x / s) / s, s = sqrt(1 + |z|^2), on [e1, e2].
inline double rescaled_semicircle_mass(Complex z, double e1, double e2) noexcept {
  const double s = std::sqrt(1.0 + std::norm(z));
  return semicircle_cdf(e2 / s) - semicircle_cdf(e1 / s);
}

/// N(e1, e2) - 2n * rho^z([e1, e2]) with N counting all 2n eigenvalues of H
/// in the closed window.
inline double counting_residual(const HermitizedPencil& pencil, double e1, double e2) {
  if (!(e1 < e2)) throw std::invalid_argument("counting_residual: need e1 < e2");
  std::size_t count = 0;
  for (double l : pencil.spectrum) count += (l >= e1 && l <= e2) ? 1 : 0;
  const double n2 = 2.0 * static_cast<double>(pencil.n());
  return static_cast<double>(count) - n2 * rescaled_semicircle_mass(pencil.z, e1, e2);
}

// ---------------------------------------------------------------------------
// Log-determinant form of linear statistics

/// Square grid on [-extent, extent]^2 with `points` nodes per side.
struct QuadGrid {
  double extent = 4.0;
  std::size_t points = 101;

  double step() const noexcept { return 2.0 * extent / static_cast<double>(points - 1); }
  Complex node(std::size_t i, std::size_t j) const noexcept {
    return {-extent + step() * static_cast<double>(i), -extent + step() * static_cast<double>(j)};
  }
};

struct LogdetCheck {
  double lhs = 0.0;  ///< (1/n) sum f(lambda_i) over eigenvalues of A B^-1
  double rhs = 0.0;  ///< (1/2 pi n) sum Lap f * log|det X^z| * cell area
  bool coarse_grid = false;
  std::size_t clipped_cells = 0;

  double residual() const noexcept { return std::abs(lhs - rhs); }
};

/// Smooth radial bump exp(1 - 1/(1 - |z|^2/R^2)) supported in |z| < R, max 1.
inline double radial_bump(Complex z, double radius) noexcept {
  const double t = std::norm(z) / (radius * radius);
  if (t >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t));
}

/// Checks (1/n) sum f(lambda_i) = (1/2 pi n) int Lap f(z) log|det(A~ - z B~)| d^2z
/// with a 5-point Laplacian and LU log-determinants on `grid`.
inline LogdetCheck linear_statistic_logdet(const ComplexMatrix& a, const ComplexMatrix& b,
                                           const std::function<double(Complex)>& f,
                                           const QuadGrid& grid) {
  if (grid.points < 5) throw std::invalid_argument("linear_statistic_logdet: grid needs >= 5 points per side");
  const std::size_t n = a.size();
  const double nd = static_cast<double>(n);
  LogdetCheck out;

  const auto spec = spectrum_of_ratio(a, b);
  for (const auto& l : spec.eigenvalues) out.lhs += f(l);
  out.lhs /= nd;

  const std::size_t m = grid.points;
  std::vector<double> fv(m * m);
  std::size_t support_nodes = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      fv[i * m + j] = f(grid.node(i, j));
      if (fv[i * m + j] != 0.0) {
        ++support_nodes;
        if (i == 0 || j == 0 || i + 1 == m || j + 1 == m) out.coarse_grid = true;
      }
    }
  }
  if (support_nodes < 50) out.coarse_grid = true;

  const double h = grid.step();
  const double inv_root = 1.0 / std::sqrt(nd);
  const double floor = -30.0 * nd;
  double acc = 0.0;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    for (std::size_t j = 1; j + 1 < m; ++j) {
      const double lap = (fv[(i + 1) * m + j] + fv[(i - 1) * m + j] + fv[i * m + j + 1] +
                          fv[i * m + j - 1] - 4.0 * fv[i * m + j]) / (h * h);
      if (lap == 0.0) continue;
      ComplexMatrix x = a - grid.node(i, j) * b;
      x *= inv_root;
      double logdet = lu_decompose(std::move(x)).log_abs_det;
      if (logdet < floor) {
        logdet = floor;
        ++out.clipped_cells;
      }
      acc += lap * logdet;
    }
  }
  out.rhs = acc * h * h / (2.0 * std::numbers::pi * nd);
  return out;
}

/// Residuals of the log-det check on `grid` and on the grid with half the
/// step, over `draws` independent pencils. Single draws are noisy because an
/// eigenvalue landing close to a node perturbs the sum at order h^2 log h;
/// the averages expose the convergence order.
struct LogdetRefinement {
  std::vector<double> coarse;
  std::vector<double> fine;

  double mean_coarse() const noexcept { return mean(coarse); }
  double mean_fine() const noexcept { return mean(fine); }
  double max_coarse() const noexcept {
    return coarse.empty() ? 0.0 : *std::max_element(coarse.begin(), coarse.end());
  }
  /// mean_coarse / mean_fine; 2 or more means first-order convergence or better.
  double ratio() const noexcept { return mean_coarse() / mean_fine(); }

 private:
  static double mean(const std::vector<double>& v) noexcept {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  }
};

inline QuadGrid refined(const QuadGrid& grid) noexcept {
  return {grid.extent, 2 * (grid.points - 1) + 1};
}

inline LogdetRefinement logdet_refinement(const EntryLaw& law_a, const EntryLaw& law_b,
                                          std::size_t n, const std::function<double(Complex)>& f,
                                          const QuadGrid& grid, std::size_t draws,
                                          std::uint64_t seed, std::size_t workers = 1) {
  LogdetRefinement out;
  out.coarse.resize(draws);
  out.fine.resize(draws);
  const QuadGrid fine = refined(grid);
  parallel_for(draws, workers, [&](std::size_t d) {
    auto rng = derive_trial_rng(seed, d);
    const auto a = sample_matrix(law_a, n, rng);
    const auto b = sample_matrix(law_b, n, rng);
    out.coarse[d] = linear_statistic_logdet(a, b, f, grid).residual();
    out.fine[d] = linear_statistic_logdet(a, b, f, fine).residual();
  });
  return out;
}

// ---------------------------------------------------------------------------
// Smallest singular value tail

struct TailRow {
  double t = 0.0;
  double prob = 0.0;
  std::size_t count = 0;
};

/// Empirical P(lambda_1 <= t) for the smallest singular value of
/// X^z = (A - zB)/sqrt(n). Trial i draws from derive_trial_rng(seed, i).
inline std::vector<TailRow> sval_tail_experiment(const EntryLaw& law_a, const EntryLaw& law_b,
                                                 std::size_t n, Complex z,
                                                 std::span<const double> t_grid,
                                                 std::size_t trials, std::uint64_t seed,
                                                 std::size_t workers = 1) {
  if (trials < 1) throw std::invalid_argument("sval_tail_experiment: need trials >= 1");
  std::vector<double> smallest(trials);
  const double inv_root = 1.0 / std::sqrt(static_cast<double>(n));
  parallel_for(trials, workers, [&](std::size_t trial) {
    auto rng = derive_trial_rng(seed, trial);
    const auto a = sample_matrix(law_a, n, rng);
    const auto b = sample_matrix(law_b, n, rng);
    ComplexMatrix x = a - z * b;
    x *= inv_root;
    smallest[trial] = smallest_singular_value(x);
  });
  std::sort(smallest.begin(), smallest.end());
  std::vector<TailRow> rows;
  for (double t : t_grid) {
    const auto count = static_cast<std::size_t>(
        std::upper_bound(smallest.begin(), smallest.end(), t) - smallest.begin());
    rows.push_back({t, static_cast<double>(count) / static_cast<double>(trials), count});
  }
  return rows;
}

/// Log-log slope of P(lambda_1 <= t) against t, over rows with at least
/// `min_count` events.
inline double tail_slope(std::span<const TailRow> rows, std::size_t min_count = 10) {
  std::vector<double> lx, ly;
  for (const auto& r : rows) {
    if (r.count >= min_count && r.prob > 0.0) {
      lx.push_back(std::log(r.t));
      ly.push_back(std::log(r.prob));
    }
  }
  return least_squares_slope(lx, ly);
}

/// n_points values log-spaced over [lo, hi].
inline std::vector<double> log_spaced(double lo, double hi, std::size_t n_points) {
  if (!(lo > 0.0 && hi > lo) || n_points < 2) throw std::invalid_argument("log_spaced: bad range");
  std::vector<double> v(n_points);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n_points; ++i) {
    v[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n_points - 1));
  }
  return v;
}

}  // namespace ratiolab
