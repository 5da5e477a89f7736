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


#include "ratiolab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "mc_gate.hpp"
#include "oracles.hpp"

namespace ratiolab {
namespace {

ExperimentConfig gaussian_config(std::size_t n, std::size_t trials, Statistic s,
                                 std::uint64_t seed = 1) {
  ExperimentConfig c;
  c.n = n;
  c.trials = trials;
  c.statistic = s;
  c.seed = seed;
  return c;
}

std::string csv(const ExperimentResult& r) {
  std::ostringstream os;
  write_samples_csv(os, r);
  return os.str();
}

TEST(Config, Validation) {
  ExperimentConfig c;
  EXPECT_NO_THROW(c.validate());
  c.trials = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.rejection = {true, 0.0};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.rejection = {true, 2e-3};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.rejection = {true, 1e-3};
  EXPECT_NO_THROW(c.validate());
  c.law_a = "cauchy";
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Config, JsonRoundTrip) {
  ExperimentConfig c;
  c.law_a = "hermite:m=6";
  c.law_b = "ghq:k=4";
  c.n = 33;
  c.trials = 7;
  c.seed = 0xFFFFFFFFFFFFFFFFULL;
  c.statistic = Statistic::pooled_moduli;
  c.rejection = {true, 1e-6};
  c.workers = 3;
  const nlohmann::json j = c;
  const auto d = j.get<ExperimentConfig>();
  EXPECT_EQ(d.law_a, c.law_a);
  EXPECT_EQ(d.law_b, c.law_b);
  EXPECT_EQ(d.n, c.n);
  EXPECT_EQ(d.trials, c.trials);
  EXPECT_EQ(d.seed, c.seed);
  EXPECT_EQ(d.statistic, c.statistic);
  EXPECT_EQ(d.rejection.enabled, true);
  EXPECT_EQ(d.rejection.threshold, 1e-6);
  EXPECT_EQ(d.workers, 3u);
}

TEST(Config, JsonDefaultsAndShorthand) {
  const auto c = nlohmann::json::parse(R"({"law": "bernoulli", "rejection": true})")
                     .get<ExperimentConfig>();
  EXPECT_EQ(c.law_a, "bernoulli");
  EXPECT_EQ(c.law_b, "bernoulli");
  EXPECT_TRUE(c.rejection.enabled);
  EXPECT_EQ(c.rejection.threshold, 1e-12);
  EXPECT_THROW(parse_statistic("rho"), std::invalid_argument);
}

TEST(Radius, GaussianRhoMaxMatchesRinf) {
  const auto r = run_radius_experiment(gaussian_config(50, 2000, Statistic::rho_max_scaled, 11));
  EXPECT_TRUE(std::is_sorted(r.samples.begin(), r.samples.end()));
  EXPECT_EQ(r.samples.size(), 2000u);
  EXPECT_EQ(r.rejected_count, 0u);
  EXPECT_GE(r.ks_vs_limit, 0.0);
  EXPECT_MC_LE(r.ks_vs_limit, 0.06);

  // Mode of the histogram sits left of the mean: a long right tail.
  const auto h = histogram(r.samples, 30, 0.0, r.samples[r.samples.size() * 99 / 100]);
  const auto mode = std::max_element(h.begin(), h.end(), [](const auto& a, const auto& b) {
    return a.density < b.density;
  });
  double mean = 0.0;
  for (double x : r.samples) mean += x / r.samples.size();
  EXPECT_LT(mode->left, mean);
}

TEST(Radius, GaussianRhoMinMatchesR0) {
  const auto r = run_radius_experiment(gaussian_config(50, 2000, Statistic::rho_min_scaled, 12));
  EXPECT_MC_LE(r.ks_vs_limit, 0.06);
}

TEST(Radius, PooledModuliSmallN) {
  const auto r = run_radius_experiment(gaussian_config(8, 500, Statistic::pooled_moduli, 13));
  EXPECT_EQ(r.samples.size(), 4000u);
  EXPECT_MC_LE(r.ks_vs_limit, 0.03);
}

TEST(Radius, BernoulliWithRejectionIsWellDefined) {
  ExperimentConfig c = gaussian_config(3, 400, Statistic::rho_max_scaled, 5);
  c.law_a = c.law_b = "bernoulli";
  c.rejection.enabled = true;
  const auto r = run_radius_experiment(c);
  EXPECT_GT(r.rejected_count, 0u);
  EXPECT_EQ(r.samples.size(), 400u);
  for (double x : r.samples) EXPECT_TRUE(std::isfinite(x));
  std::size_t total = 0;
  for (auto k : r.trial_rejections) total += k;
  EXPECT_EQ(total, r.rejected_count);
}

TEST(Radius, SingularDenominatorWithoutRejectionAborts) {
  ExperimentConfig c = gaussian_config(2, 200, Statistic::rho_max_scaled, 5);
  c.law_a = c.law_b = "bernoulli";
  EXPECT_THROW(run_radius_experiment(c), ExperimentError);
}

TEST(Radius, RaisingThresholdOnlyRemovesTrials) {
  ExperimentConfig lo = gaussian_config(4, 300, Statistic::rho_max_scaled, 21);
  lo.law_a = lo.law_b = "bernoulli";
  lo.rejection.enabled = true;
  ExperimentConfig hi = lo;
  hi.rejection.threshold = 1e-3;
  const auto a = run_radius_experiment(lo);
  const auto b = run_radius_experiment(hi);
  EXPECT_GE(b.rejected_count, a.rejected_count);
  std::size_t compared = 0;
  for (std::size_t t = 0; t < lo.trials; ++t) {
    if (a.trial_rejections[t] == 0 && b.trial_rejections[t] == 0) {
      EXPECT_EQ(a.trial_values[t], b.trial_values[t]);
      ++compared;
    }
  }
  EXPECT_GT(compared, 0u);
}

TEST(Radius, WorkerCountIsInvisibleInOutput) {
  ExperimentConfig c = gaussian_config(12, 300, Statistic::rho_min_scaled, 99);
  c.law_a = "ghq:k=4";
  const auto one = run_radius_experiment(c);
  c.workers = 8;
  const auto eight = run_radius_experiment(c);
  EXPECT_EQ(one.samples, eight.samples);
  EXPECT_EQ(csv(one), csv(eight));
}

TEST(Radius, SameConfigSameBytes) {
  const auto c = gaussian_config(6, 50, Statistic::pooled_moduli, 3);
  EXPECT_EQ(csv(run_radius_experiment(c)), csv(run_radius_experiment(c)));
}

TEST(Radius, JsonCarriesSchemaAndProvenance) {
  const auto r = run_radius_experiment(gaussian_config(5, 10, Statistic::rho_max_scaled));
  const auto j = result_json(r);
  EXPECT_EQ(j.at("schema_version"), kSchemaVersion);
  EXPECT_EQ(j.at("version"), std::string(kVersion));
  EXPECT_EQ(j.at("config").at("n"), 5);
  EXPECT_EQ(j.at("samples").size(), 10u);
}

TEST(Csv, FormatIsShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Compare, RequiresCompatibleConfigs) {
  std::vector<ExperimentConfig> one = {gaussian_config(4, 10, Statistic::rho_max_scaled)};
  EXPECT_THROW(cross_law_comparison(one), std::invalid_argument);
  std::vector<ExperimentConfig> mixed = {gaussian_config(4, 10, Statistic::rho_max_scaled),
                                         gaussian_config(5, 10, Statistic::rho_max_scaled)};
  EXPECT_THROW(cross_law_comparison(mixed), std::invalid_argument);
}

TEST(Compare, GaussianAgainstItselfIsNull) {
  const std::size_t trials = 500;
  const double gate = 1.36 * std::sqrt(2.0 / trials) * 1.5;
  int within = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    std::vector<ExperimentConfig> cs = {
        gaussian_config(8, trials, Statistic::rho_max_scaled, 2 * rep + 1),
        gaussian_config(8, trials, Statistic::rho_max_scaled, 2 * rep + 2)};
    const auto table = cross_law_comparison(cs);
    ASSERT_EQ(table.rows.size(), 1u);
    within += table.rows[0].ks <= gate ? 1 : 0;
  }
  EXPECT_GE(within, 19);
}

TEST(Compare, TableHasAllPairs) {
  std::vector<ExperimentConfig> cs;
  for (const char* law : {"gaussian", "ghq:k=4", "hermite:m=6"}) {
    auto c = gaussian_config(6, 50, Statistic::rho_max_scaled);
    c.law_a = c.law_b = law;
    c.rejection.enabled = true;  // discrete atoms make a singular B possible at n = 6
    cs.push_back(c);
  }
  const auto table = cross_law_comparison(cs);
  ASSERT_EQ(table.rows.size(), 3u);
  EXPECT_EQ(table.rows[0].label_first, "gaussian");
  EXPECT_EQ(table.rows[2].label_second, "hermite:m=6");
  std::ostringstream os;
  write_comparison_csv(os, table.rows);
  EXPECT_EQ(os.str().substr(0, 15), "first,second,ks");
}

}  // namespace
}  // namespace ratiolab
