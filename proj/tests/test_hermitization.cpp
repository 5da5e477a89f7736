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


#include "ratiolab/hermitization.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace ratiolab {
namespace {

const EntryLaw kGauss = EntryLaw::complex_gaussian();

HermitizedPencil random_pencil(std::size_t n, Complex z, std::uint64_t seed) {
  RandomStream rng(seed);
  const auto a = sample_matrix(kGauss, n, rng);
  const auto b = sample_matrix(kGauss, n, rng);
  return hermitize(a, b, z);
}

oracle::Dense to_dense(const ComplexMatrix& m) {
  oracle::Dense d(m.size(), std::vector<Complex>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) d[i][j] = m(i, j);
  return d;
}

TEST(Hermitize, DiagonalAtOrigin) {
  const double r = std::sqrt(2.0);
  const std::vector<Complex> d = {2.0 * r, 5.0 * r};
  RandomStream rng(1);
  const auto p = hermitize(ComplexMatrix::diagonal(d), sample_matrix(kGauss, 2, rng), 0.0);
  const std::vector<double> expected = {-5.0, -2.0, 2.0, 5.0};
  ASSERT_EQ(p.spectrum.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(p.spectrum[i], expected[i], 1e-12);
}

TEST(Hermitize, SpectrumSymmetricAndHermitian) {
  const auto p = random_pencil(16, Complex(0.7, -0.4), 3);
  const std::size_t m = p.spectrum.size();
  for (std::size_t i = 0; i < m; ++i) EXPECT_NEAR(p.spectrum[i], -p.spectrum[m - 1 - i], 1e-12);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) EXPECT_LE(std::abs(p.h(i, j) - std::conj(p.h(j, i))), 1e-14);
}

TEST(Hermitize, DirectHermitianSolveAgrees) {
  const auto p = random_pencil(16, Complex(1.0, 1.0), 4);
  const auto direct = hermitian_eigenvalues(p.h);
  ASSERT_EQ(direct.size(), p.spectrum.size());
  for (std::size_t i = 0; i < direct.size(); ++i) EXPECT_NEAR(direct[i], p.spectrum[i], 1e-10);
}

TEST(Hermitize, DimensionMismatchThrows) {
  EXPECT_THROW(hermitize(ComplexMatrix::identity(2), ComplexMatrix::identity(3), 0.0),
               std::invalid_argument);
}

TEST(GreenTrace, MatchesDenseInverse) {
  for (std::size_t n : {1u, 4u, 8u}) {
    const auto p = random_pencil(n, Complex(0.3, 0.2), 10 + n);
    for (double eta : {0.01, 0.3, 2.0}) {
      EXPECT_NEAR(green_trace_im(p, eta), oracle::green_trace_im_dense(to_dense(p.h), eta), 1e-10)
          << n << " " << eta;
    }
  }
}

TEST(GreenTrace, LargeEtaAsymptotic) {
  const auto p = random_pencil(10, 0.0, 5);
  const double eta = 1e3 * p.spectrum.back();
  EXPECT_NEAR(green_trace_im(p, eta) * eta / 20.0, 1.0, 0.01);
}

TEST(GreenTrace, LinearInSmallEta) {
  const auto p = random_pencil(10, 0.0, 6);
  const double slope1 = green_trace_im(p, 1e-7) / 1e-7;
  const double slope2 = green_trace_im(p, 1e-9) / 1e-9;
  EXPECT_NEAR(slope1 / slope2, 1.0, 1e-6);
  EXPECT_GT(green_trace_im(p, 1e-9), 0.0);
}

TEST(GreenTrace, EtaTimesTraceNondecreasing) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto p = random_pencil(12, Complex(0.5 * seed, 0.0), 20 + seed);
    double prev = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double eta = std::pow(10.0, -3.0 + 6.0 * i / 49.0);
      const double v = eta * green_trace_im(p, eta);
      EXPECT_GE(v, prev * (1.0 - 1e-14));
      prev = v;
    }
  }
}

TEST(GreenTrace, RejectsNonPositiveEta) {
  const auto p = random_pencil(3, 0.0, 1);
  EXPECT_THROW(green_trace_im(p, 0.0), std::invalid_argument);
}

TEST(Msc, SolvesQuadraticOnStieltjesBranch) {
  RandomStream rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Complex w(3 * standard_normal(rng), 3 * standard_normal(rng));
    if (w.imag() == 0.0) continue;
    const Complex m = msc(w);
    if (i < 100) {
      EXPECT_LE(std::abs(m * m + w * m + 1.0), 1e-13 * std::max(1.0, std::abs(w)));
    }
    EXPECT_GT(m.imag() * w.imag(), 0.0);
  }
}

TEST(Msc, PurelyImaginaryArgument) {
  for (double eta : {1e-3, 0.5, 1.0, 10.0}) {
    const Complex m = msc(Complex(0.0, eta));
    EXPECT_NEAR(m.real(), 0.0, 1e-15);
    EXPECT_NEAR(m.imag(), 0.5 * (-eta + std::sqrt(eta * eta + 4.0)), 1e-14);
  }
}

TEST(Msc, RejectsRealArgument) { EXPECT_THROW(msc(Complex(1.0, 0.0)), std::domain_error); }

TEST(Msc, RescaledFormReducesAtOrigin) {
  for (const Complex w : {Complex(0.1, 0.5), Complex(-2.0, 0.01), Complex(3.0, -1.0)}) {
    EXPECT_EQ(m_z(0.0, w), msc(w));
  }
}

TEST(LocalLaw, RequiresEtaAtLeastOneOverN) {
  RandomStream rng(1);
  EXPECT_THROW(local_law_residual(kGauss, kGauss, 10, 0.0, 0.05, rng), std::invalid_argument);
}

TEST(LocalLaw, SmallAndShrinkingWithN) {
  for (const Complex z : {Complex(0.0), Complex(2.0)}) {
    std::vector<double> small, large;
    std::size_t within = 0;
    for (std::uint64_t t = 0; t < 40; ++t) {
      auto rng = derive_trial_rng(500, t);
      small.push_back(local_law_residual(kGauss, kGauss, 25, z, 0.5, rng));
      large.push_back(local_law_residual(kGauss, kGauss, 100, z, 0.5, rng));
      within += large.back() <= 0.05 ? 1 : 0;
    }
    EXPECT_GE(within, 38u);
    EXPECT_LT(median(large), median(small));
  }
}

TEST(Counting, FullIntervalIsExact) {
  for (const Complex z : {Complex(0.0), Complex(2.0, 1.0)}) {
    const auto p = random_pencil(20, z, 9);
    const double s = std::sqrt(1.0 + std::norm(z));
    EXPECT_NEAR(counting_residual(p, -10.0 * s, 10.0 * s), 0.0, 1e-12);
  }
}

TEST(Counting, SemicircleMassAgainstMidpointRule) {
  const Complex z(1.0, -0.5);
  const double s = std::sqrt(1.0 + std::norm(z));
  double acc = 0.0;
  const int steps = 200000;
  const double e1 = -0.7, e2 = 1.9;
  for (int i = 0; i < steps; ++i) {
    const double x = e1 + (i + 0.5) * (e2 - e1) / steps;
    const double u = x / s;
    acc += (u * u < 4.0 ? std::sqrt(4.0 - u * u) / (2.0 * std::numbers::pi) / s : 0.0) *
           (e2 - e1) / steps;
  }
  EXPECT_NEAR(rescaled_semicircle_mass(z, e1, e2), acc, 1e-9);
}

TEST(Counting, RigidityWindow) {
  std::size_t within = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    auto rng = derive_trial_rng(77, t);
    const auto a = sample_matrix(kGauss, 200, rng);
    const auto b = sample_matrix(kGauss, 200, rng);
    const auto p = hermitize(a, b, 0.0);
    within += std::abs(counting_residual(p, -0.5, 0.5)) <= 8.0 ? 1 : 0;
    EXPECT_LE(std::abs(counting_residual(p, -0.5, 0.0) - counting_residual(p, 0.0, 0.5)), 1.0);
  }
  EXPECT_GE(within, 95u);
}

TEST(Counting, RejectsEmptyWindow) {
  const auto p = random_pencil(3, 0.0, 2);
  EXPECT_THROW(counting_residual(p, 1.0, 1.0), std::invalid_argument);
}

TEST(Logdet, ZeroFunctionGivesZero) {
  RandomStream rng(3);
  const auto a = sample_matrix(kGauss, 6, rng);
  const auto b = sample_matrix(kGauss, 6, rng);
  const auto r = linear_statistic_logdet(a, b, [](Complex) { return 0.0; }, {4.0, 41});
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
}

TEST(Logdet, BumpIdentityOnDefaultGrid) {
  RandomStream rng(12);
  const auto a = sample_matrix(kGauss, 16, rng);
  const auto b = sample_matrix(kGauss, 16, rng);
  const auto r = linear_statistic_logdet(a, b, [](Complex z) { return radial_bump(z, 3.0); },
                                         {4.0, 101});
  EXPECT_LE(r.residual(), 0.02);
  EXPECT_FALSE(r.coarse_grid);
  EXPECT_GT(r.lhs, 0.0);
}

TEST(Logdet, RefinementAtLeastHalvesMeanResidual) {
  const auto ref = logdet_refinement(kGauss, kGauss, 16,
                                     [](Complex z) { return radial_bump(z, 3.0); }, {4.0, 51}, 20,
                                     2024);
  EXPECT_GE(ref.ratio(), 2.0);
  EXPECT_LE(ref.max_coarse(), 0.02);
}

TEST(Logdet, FlagsFunctionsTouchingTheBoundary) {
  RandomStream rng(4);
  const auto a = sample_matrix(kGauss, 4, rng);
  const auto b = sample_matrix(kGauss, 4, rng);
  const auto r = linear_statistic_logdet(a, b, [](Complex z) { return radial_bump(z, 10.0); },
                                         {4.0, 41});
  EXPECT_TRUE(r.coarse_grid);
}

TEST(Logdet, RadialBumpShape) {
  EXPECT_EQ(radial_bump(0.0, 3.0), 1.0);
  EXPECT_EQ(radial_bump(3.0, 3.0), 0.0);
  EXPECT_GT(radial_bump(Complex(0.0, 2.9), 3.0), 0.0);
}

TEST(SvalTail, ShapeOfSmallestSingularValueLaw) {
  const std::size_t n = 16;
  const auto t = log_spaced(0.006, 0.05, 8);
  const auto rows = sval_tail_experiment(kGauss, kGauss, n, 1.0, t, 2000, 5);
  double prev = 0.0;
  for (const auto& r : rows) {
    EXPECT_GE(r.prob, prev);
    prev = r.prob;
    EXPECT_LE(r.prob, 10.0 * n * n * r.t * r.t);
  }
  const double slope = tail_slope(rows);
  EXPECT_GE(slope, 1.6);
  EXPECT_LE(slope, 2.4);
}

TEST(SvalTail, WorkerCountDoesNotChangeResult) {
  const auto t = log_spaced(0.01, 0.2, 5);
  const auto a = sval_tail_experiment(kGauss, kGauss, 8, 1.0, t, 200, 9, 1);
  const auto b = sval_tail_experiment(kGauss, kGauss, 8, 1.0, t, 200, 9, 4);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].count, b[i].count);
}

TEST(SvalTail, LogSpacedEndpoints) {
  const auto v = log_spaced(1e-4, 1e-2, 3);
  EXPECT_NEAR(v[0], 1e-4, 1e-18);
  EXPECT_NEAR(v[1], 1e-3, 1e-17);
  EXPECT_NEAR(v[2], 1e-2, 1e-16);
  EXPECT_THROW(log_spaced(0.0, 1.0, 3), std::invalid_argument);
}

}  // namespace
}  // namespace ratiolab
