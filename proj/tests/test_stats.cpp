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


#include "ratiolab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "ratiolab/rng.hpp"
#include "oracles.hpp"

namespace ratiolab {
namespace {

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

TEST(Ks, SingleSampleAgainstUniform) {
  const std::vector<double> x = {0.5};
  EXPECT_DOUBLE_EQ(ks_statistic(x, uniform_cdf), 0.5);
}

TEST(Ks, SamplesBelowSupport) {
  std::vector<double> x(100);
  std::iota(x.begin(), x.end(), -200.0);
  EXPECT_NEAR(ks_statistic(x, uniform_cdf), 1.0, 1.0 / 100);
}

TEST(Ks, RejectsUnsortedAndEmpty) {
  const std::vector<double> x = {0.3, 0.1};
  EXPECT_THROW(ks_statistic(x, uniform_cdf), std::invalid_argument);
  EXPECT_THROW(ks_statistic(std::vector<double>{}, uniform_cdf), std::invalid_argument);
}

TEST(Ks, DkwGateHoldsAtNinetyNinePercent) {
  const std::size_t n = 10000;
  int exceed = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    auto rng = derive_trial_rng(314, r);
    std::vector<double> x(n);
    for (auto& v : x) v = uniform_open(rng);
    std::sort(x.begin(), x.end());
    exceed += ks_statistic(x, uniform_cdf) > oracle::dkw_gate(n) ? 1 : 0;
  }
  EXPECT_LE(exceed, 6);  // expectation 2
}

TEST(Ks, TwoSampleBasics) {
  EXPECT_DOUBLE_EQ(two_sample_ks({1.0, 2.0}, {1.0, 2.0}), 0.0);
  EXPECT_DOUBLE_EQ(two_sample_ks({1.0, 2.0}, {3.0, 4.0}), 1.0);
  EXPECT_DOUBLE_EQ(two_sample_ks({1.0, 3.0}, {2.0, 4.0}), 0.5);
  EXPECT_NEAR(two_sample_ks_threshold(0.05, 1000, 1000), 1.358 * std::sqrt(2.0 / 1000), 1e-3);
}

TEST(Histogram, CountsAndUnitIntegral) {
  RandomStream rng(1);
  std::vector<double> x(1000);
  for (auto& v : x) v = uniform_open(rng);
  const auto h = histogram(x, 10, 0.0, 1.0);
  std::size_t total = 0;
  double integral = 0.0;
  for (const auto& b : h) {
    total += b.count;
    integral += b.density * (b.right - b.left);
  }
  EXPECT_EQ(total, 1000u);
  EXPECT_NEAR(integral, 1.0, 1e-12);
  EXPECT_EQ(h.front().left, 0.0);
  EXPECT_EQ(h.back().right, 1.0);
}

TEST(Histogram, DropsOutOfRangeAndValidates) {
  const std::vector<double> x = {-1.0, 0.5, 2.0};
  const auto h = histogram(x, 2, 0.0, 1.0);
  EXPECT_EQ(h[0].count + h[1].count, 1u);
  EXPECT_THROW(histogram(x, 0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(histogram(x, 3, 1.0, 1.0), std::invalid_argument);
}

TEST(Slope, ExactLine) {
  const std::vector<double> x = {0, 1, 2, 3};
  const std::vector<double> y = {1, 3, 5, 7};
  EXPECT_DOUBLE_EQ(least_squares_slope(x, y), 2.0);
  EXPECT_THROW(least_squares_slope(std::vector<double>{1}, std::vector<double>{1}),
               std::invalid_argument);
}

TEST(Median, OddAndEven) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 3.0, 2.0}), 2.5);
  EXPECT_THROW(median({}), std::invalid_argument);
}

}  // namespace
}  // namespace ratiolab
