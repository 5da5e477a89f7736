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

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ratiolab/cmatrix.hpp"

namespace ratiolab {

/// Nodes and weights of the physicists' Gauss-Hermite rule (weight e^{-x^2}).
/// Nodes are descending; weights sum to sqrt(pi).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes from the eigenvalues of the Jacobi matrix (Golub-Welsch), each
/// polished by Newton on the orthonormal recurrence, which also yields the
/// weight 2 / p'_n(x)^2. Stable for a few hundred points.
inline GaussHermiteRule gauss_hermite_rule(std::size_t points) {
  if (points == 0) throw std::invalid_argument("gauss_hermite_rule: need at least one point");
  const double pim4 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  const std::size_t n = points;
  const double nd = static_cast<double>(n);

  std::vector<double> off(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) off[k - 1] = std::sqrt(0.5 * static_cast<double>(k));
  const auto eig = tridiagonal_eigenvalues(std::vector<double>(n, 0.0), std::move(off));

  GaussHermiteRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = eig[n - 1 - i];
    double pp = 0.0;
    for (int it = 0; it < 3; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * nd) * p2;
      z -= p1 / pp;
    }
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / (pp * pp);
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// Physicists' Hermite polynomial H_m(x) by the three-term recurrence; these
/// are orthogonal under e^{-x^2}, i.e. under N(0, 1/2).
inline double hermite_polynomial(int m, double x) noexcept {
  if (m == 0) return 1.0;
  double prev = 1.0, cur = 2.0 * x;
  for (int j = 1; j < m; ++j) {
    const double next = 2.0 * x * cur - 2.0 * j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace ratiolab
