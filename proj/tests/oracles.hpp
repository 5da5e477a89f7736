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

// Independent reference computations for the tests. Nothing here calls the
// library routine it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

/// CDF of Beta-prime(a, b) for integer a, b: with p = x / (1 + x),
/// I_p(a, b) = P(Binomial(a + b - 1, p) >= a).
inline double beta_prime_cdf(int a, int b, double x) {
  if (x <= 0.0) return 0.0;
  const double p = x / (1.0 + x);
  const double q = 1.0 / (1.0 + x);
  const int m = a + b - 1;
  double s = 0.0;
  for (int j = a; j <= m; ++j) {
    const double log_term = std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0) +
                            j * std::log(p) + (m - j) * std::log(q);
    s += std::exp(log_term);
  }
  return std::min(1.0, s);
}

/// P(Gamma(k,1) >= x) by composite Simpson on the density over [0, x].
inline double gamma_survival_by_integration(int k, double x, int panels = 20000) {
  auto density = [k](double t) { return std::pow(t, k - 1) * std::exp(-t) / std::tgamma(k); };
  const double h = x / panels;
  double s = density(0.0) + density(x);
  for (int i = 1; i < panels; ++i) s += density(i * h) * (i % 2 ? 4.0 : 2.0);
  return 1.0 - s * h / 3.0;
}

/// E[X^a] for X ~ N(0, 1/2).
inline double half_normal_moment(int a) {
  if (a % 2) return 0.0;
  double m = 1.0;
  for (int j = a - 1; j > 0; j -= 2) m *= j;
  return m * std::pow(0.5, a / 2);
}

/// Dense matrix as nested vectors, kept separate from ComplexMatrix.
using Dense = std::vector<std::vector<Complex>>;

/// Inverse by Gauss-Jordan with full pivoting.
inline Dense invert(Dense a) {
  const std::size_t n = a.size();
  Dense inv(n, std::vector<Complex>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const Complex d = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const Complex f = a[r][c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

inline Dense multiply(const Dense& a, const Dense& b) {
  const std::size_t n = a.size();
  Dense c(n, std::vector<Complex>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Dense adjoint(const Dense& a) {
  const std::size_t n = a.size();
  Dense c(n, std::vector<Complex>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c[j][i] = std::conj(a[i][j]);
  return c;
}

/// Im Tr (H - i eta)^-1 by explicit inversion.
inline double green_trace_im_dense(Dense h, double eta) {
  for (std::size_t i = 0; i < h.size(); ++i) h[i][i] -= Complex(0.0, eta);
  const Dense g = invert(std::move(h));
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g[i][i].imag();
  return s;
}

/// Smallest singular value as 1 / sqrt(lambda_max((X* X)^-1)) by power iteration.
inline double sigma_min_inverse_power(const Dense& x, int iterations = 2000) {
  const Dense xi = invert(x);
  const Dense w = multiply(xi, adjoint(xi));  // (X X*)^-1, same spectrum as (X* X)^-1
  const std::size_t n = x.size();
  std::vector<Complex> v(n, 1.0);
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    std::vector<Complex> u(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) u[i] += w[i][j] * v[j];
    double norm = 0.0;
    for (auto& e : u) norm += std::norm(e);
    norm = std::sqrt(norm);
    for (auto& e : u) e /= norm;
    const double prev = lambda;
    lambda = norm;
    v = std::move(u);
    if (it > 10 && std::abs(lambda - prev) <= 1e-15 * lambda) break;
  }
  return 1.0 / std::sqrt(lambda);
}

/// Fourth-order central difference of a holomorphic map along the real axis.
inline Complex complex_derivative(const std::function<Complex(Complex)>& f, Complex z,
                                  double h = 1e-3) {
  return (-f(z + 2.0 * h) + 8.0 * f(z + h) - 8.0 * f(z - h) + f(z - 2.0 * h)) / (12.0 * h);
}

/// 99% DKW-type one-sample KS gate.
inline double dkw_gate(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

}  // namespace oracle
