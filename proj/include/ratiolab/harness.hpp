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

// Seeded Monte Carlo over entry laws for the radii of M = A B^-1.
//
// Trial i draws everything from derive_trial_rng(seed, i), including any
// redraws forced by rejection, so results do not depend on the worker count
// or on the order in which trials run.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "ratiolab/cmatrix.hpp"
#include "ratiolab/entrylaws.hpp"
#include "ratiolab/limitlaw.hpp"
#include "ratiolab/parallel.hpp"
#include "ratiolab/rng.hpp"
#include "ratiolab/spherical.hpp"
#include "ratiolab/stats.hpp"

#ifndef RATIOLAB_VERSION
#define RATIOLAB_VERSION "0.1.0"
#endif

namespace ratiolab {

inline constexpr std::string_view kVersion = RATIOLAB_VERSION;
inline constexpr int kSchemaVersion = 1;

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Statistic { rho_max_scaled, rho_min_scaled, pooled_moduli };

inline std::string_view to_string(Statistic s) noexcept {
  switch (s) {
    case Statistic::rho_max_scaled: return "rho_max_scaled";
    case Statistic::rho_min_scaled: return "rho_min_scaled";
    case Statistic::pooled_moduli: return "pooled_moduli";
  }
  return "unknown";
}

inline Statistic parse_statistic(std::string_view s) {
  if (s == "rho_max_scaled" || s == "rho_max") return Statistic::rho_max_scaled;
  if (s == "rho_min_scaled" || s == "rho_min") return Statistic::rho_min_scaled;
  if (s == "pooled_moduli" || s == "pooled") return Statistic::pooled_moduli;
  throw std::invalid_argument("unknown statistic '" + std::string(s) + "'");
}

struct RejectionPolicy {
  bool enabled = false;
  /// Floor on min |U_ii| / max |entry| for both A and B.
  double threshold = 1e-12;
};

/// A trial that needs this many draws has seen a 99% rejection rate.
inline constexpr std::size_t kMaxDrawsPerTrial = 100;

struct ExperimentConfig {
  std::string law_a = "gaussian";
  std::string law_b = "gaussian";
  std::size_t n = 50;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  Statistic statistic = Statistic::rho_max_scaled;
  RejectionPolicy rejection{};
  std::size_t workers = 1;

  void validate() const {
    if (n < 1) throw std::invalid_argument("config: n must be >= 1");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
    if (rejection.enabled && !(rejection.threshold > 0.0 && rejection.threshold <= 1e-3)) {
      throw std::invalid_argument("config: rejection threshold must lie in (0, 1e-3]");
    }
    (void)EntryLaw::parse(law_a);
    (void)EntryLaw::parse(law_b);
  }
};

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{{"law_a", c.law_a},
                     {"law_b", c.law_b},
                     {"n", c.n},
                     {"trials", c.trials},
                     {"seed", c.seed},
                     {"statistic", std::string(to_string(c.statistic))},
                     {"rejection", {{"enabled", c.rejection.enabled},
                                    {"threshold", c.rejection.threshold}}},
                     {"workers", c.workers}};
}

/// Missing keys keep their defaults.
inline void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  if (j.contains("law")) c.law_a = c.law_b = j.at("law").get<std::string>();
  if (j.contains("law_a")) c.law_a = j.at("law_a").get<std::string>();
  if (j.contains("law_b")) c.law_b = j.at("law_b").get<std::string>();
  if (j.contains("n")) c.n = j.at("n").get<std::size_t>();
  if (j.contains("trials")) c.trials = j.at("trials").get<std::size_t>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("statistic")) c.statistic = parse_statistic(j.at("statistic").get<std::string>());
  if (j.contains("rejection")) {
    const auto& r = j.at("rejection");
    if (r.is_boolean()) {
      c.rejection.enabled = r.get<bool>();
    } else {
      if (r.contains("enabled")) c.rejection.enabled = r.at("enabled").get<bool>();
      if (r.contains("threshold")) c.rejection.threshold = r.at("threshold").get<double>();
    }
  }
  if (j.contains("workers")) c.workers = j.at("workers").get<std::size_t>();
}

struct ExperimentResult {
  ExperimentConfig config;
  /// All recorded values, ascending.
  std::vector<double> samples;
  /// Values recorded by each trial (one, or n for pooled_moduli).
  std::vector<std::vector<double>> trial_values;
  /// Rejected draws per trial.
  std::vector<std::size_t> trial_rejections;
  double ks_vs_limit = 0.0;
  std::size_t rejected_count = 0;
  double runtime_seconds = 0.0;
  std::string version{kVersion};
};

/// Reference CDF for a statistic: R_inf, R_0, or the spherical radial CDF.
inline double reference_cdf(Statistic s, double x) {
  static const LimitLawCdf rinf{LimitLaw::rinf};
  static const LimitLawCdf r0{LimitLaw::r0};
  switch (s) {
    case Statistic::rho_max_scaled: return x <= 0.0 ? 0.0 : rinf(x);
    case Statistic::rho_min_scaled: return x <= 0.0 ? 0.0 : r0(x);
    case Statistic::pooled_moduli: return equilibrium_radial_cdf(std::max(x, 0.0));
  }
  return 0.0;
}

inline bool rejects(const RejectionPolicy& policy, const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!policy.enabled) return false;
  return relative_min_pivot(a) < policy.threshold || relative_min_pivot(b) < policy.threshold;
}

inline ExperimentResult run_radius_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const EntryLaw law_a = EntryLaw::parse(config.law_a);
  const EntryLaw law_b = EntryLaw::parse(config.law_b);
  const std::size_t n = config.n;
  const double root_n = std::sqrt(static_cast<double>(n));

  ExperimentResult out;
  out.config = config;
  out.trial_values.resize(config.trials);
  out.trial_rejections.assign(config.trials, 0);

  parallel_for(config.trials, config.workers, [&](std::size_t trial) {
    auto rng = derive_trial_rng(config.seed, trial);
    std::size_t rejected = 0;
    ComplexMatrix a = sample_matrix(law_a, n, rng);
    ComplexMatrix b = sample_matrix(law_b, n, rng);
    while (rejects(config.rejection, a, b)) {
      if (++rejected + 1 >= kMaxDrawsPerTrial) {
        throw ExperimentError("trial " + std::to_string(trial) + ": " +
                              std::to_string(rejected) +
                              " consecutive draws rejected as singular; rejection rate above 99%");
      }
      a = sample_matrix(law_a, n, rng);
      b = sample_matrix(law_b, n, rng);
    }
    SpectrumSample s;
    try {
      s = spectrum_of_ratio(a, b);
    } catch (const SingularMatrixError& e) {
      throw ExperimentError("trial " + std::to_string(trial) + ": " + e.what() +
                            " (enable rejection for discrete laws)");
    }
    auto& values = out.trial_values[trial];
    switch (config.statistic) {
      case Statistic::rho_max_scaled: values = {s.rho_max / root_n}; break;
      case Statistic::rho_min_scaled: values = {s.rho_min * root_n}; break;
      case Statistic::pooled_moduli:
        values.reserve(n);
        for (const auto& l : s.eigenvalues) values.push_back(std::abs(l));
        break;
    }
    out.trial_rejections[trial] = rejected;
  });

  for (std::size_t t = 0; t < config.trials; ++t) {
    out.rejected_count += out.trial_rejections[t];
    out.samples.insert(out.samples.end(), out.trial_values[t].begin(), out.trial_values[t].end());
  }
  const double draws = static_cast<double>(out.rejected_count + config.trials);
  if (static_cast<double>(out.rejected_count) > 0.99 * draws) {
    throw ExperimentError("rejection rate above 99%: " + std::to_string(out.rejected_count) +
                          " of " + std::to_string(out.rejected_count + config.trials) + " draws");
  }
  std::sort(out.samples.begin(), out.samples.end());
  out.ks_vs_limit = ks_statistic(out.samples, [&](double x) { return reference_cdf(config.statistic, x); });
  out.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// ---------------------------------------------------------------------------
// Cross-law comparison

struct ComparisonRow {
  std::size_t first = 0;
  std::size_t second = 0;
  std::string label_first;
  std::string label_second;
  double ks = 0.0;
};

struct ComparisonTable {
  std::vector<ExperimentResult> results;
  std::vector<ComparisonRow> rows;
};

inline std::string law_label(const ExperimentConfig& c) {
  return c.law_a == c.law_b ? c.law_a : c.law_a + "/" + c.law_b;
}

/// Pairwise two-sample KS between already-run experiments.
inline std::vector<ComparisonRow> pairwise_ks(std::span<const ExperimentResult> results) {
  std::vector<ComparisonRow> rows;
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (std::size_t j = i + 1; j < results.size(); ++j) {
      rows.push_back({i, j, law_label(results[i].config), law_label(results[j].config),
                      two_sample_ks(results[i].samples, results[j].samples)});
    }
  }
  return rows;
}

inline ComparisonTable cross_law_comparison(std::span<const ExperimentConfig> configs) {
  if (configs.size() < 2) throw std::invalid_argument("cross_law_comparison: need >= 2 configs");
  for (const auto& c : configs) {
    if (c.n != configs[0].n || c.trials != configs[0].trials ||
        c.statistic != configs[0].statistic) {
      throw std::invalid_argument("cross_law_comparison: configs must share n, trials and statistic");
    }
  }
  ComparisonTable table;
  for (const auto& c : configs) table.results.push_back(run_radius_experiment(c));
  table.rows = pairwise_ks(table.results);
  return table;
}

// ---------------------------------------------------------------------------
// Output

/// Shortest round-trip decimal form; identical bytes on every run.
inline std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  if (r.ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, r.ptr);
}

/// Schema v1: trial,rejections,value (one row per recorded value, trial order).
inline void write_samples_csv(std::ostream& os, const ExperimentResult& r) {
  os << "trial,rejections,value\n";
  for (std::size_t t = 0; t < r.trial_values.size(); ++t) {
    for (double v : r.trial_values[t]) {
      os << t << ',' << r.trial_rejections[t] << ',' << format_double(v) << '\n';
    }
  }
}

inline nlohmann::json result_json(const ExperimentResult& r, bool include_samples = true) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "radius";
  j["config"] = r.config;
  j["version"] = r.version;
  j["ks_vs_limit"] = r.ks_vs_limit;
  j["rejected_count"] = r.rejected_count;
  j["runtime_seconds"] = r.runtime_seconds;
  j["sample_count"] = r.samples.size();
  if (include_samples) j["samples"] = r.samples;
  return j;
}

/// Schema v1: bin_left,bin_right,count,density.
inline void write_histogram_csv(std::ostream& os, std::span<const HistogramBin> bins) {
  os << "bin_left,bin_right,count,density\n";
  for (const auto& b : bins) {
    os << format_double(b.left) << ',' << format_double(b.right) << ',' << b.count << ','
       << format_double(b.density) << '\n';
  }
}

/// Schema v1: first,second,ks.
inline void write_comparison_csv(std::ostream& os, std::span<const ComparisonRow> rows) {
  os << "first,second,ks\n";
  for (const auto& r : rows) {
    os << r.label_first << ',' << r.label_second << ',' << format_double(r.ks) << '\n';
  }
}

}  // namespace ratiolab
