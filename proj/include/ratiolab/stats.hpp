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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ratiolab {

/// One-sample Kolmogorov-Smirnov distance between sorted samples and `cdf`:
/// max over i of max(|i/N - F(x_i)|, |(i-1)/N - F(x_i)|).
template <typename Cdf>
double ks_statistic(std::span<const double> sorted, Cdf&& cdf) {
  if (sorted.empty()) throw std::invalid_argument("ks_statistic: no samples");
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw std::invalid_argument("ks_statistic: samples must be sorted");
  }
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return std::clamp(d, 0.0, 1.0);
}

/// Two-sample KS distance sup_x |F_a(x) - F_b(x)|; inputs need not be sorted.
inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("two_sample_ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// Asymptotic two-sample KS critical value c(alpha) sqrt((na+nb)/(na nb)).
inline double two_sample_ks_threshold(double alpha, double na, double nb) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0) * (na + nb) / (na * nb));
}

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  std::size_t count = 0;
  double density = 0.0;
};

/// Equal-width bins over [lo, hi]; samples outside are dropped and density
/// is normalized over the binned samples so it integrates to 1.
inline std::vector<HistogramBin> histogram(std::span<const double> samples, std::size_t bins,
                                           double lo, double hi) {
  if (bins < 1) throw std::invalid_argument("histogram: need at least one bin");
  if (!(hi > lo)) throw std::invalid_argument("histogram: empty range");
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].left = lo + width * static_cast<double>(b);
    out[b].right = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
  }
  std::size_t total = 0;
  for (double x : samples) {
    if (!(x >= lo && x <= hi)) continue;
    auto b = static_cast<std::size_t>((x - lo) / width);
    if (b >= bins) b = bins - 1;
    ++out[b].count;
    ++total;
  }
  if (total > 0) {
    for (auto& bin : out) {
      bin.density = static_cast<double>(bin.count) / (static_cast<double>(total) * (bin.right - bin.left));
    }
  }
  return out;
}

/// Least-squares slope of y on x.
inline double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least_squares_slope: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares_slope: degenerate abscissae");
  return sxy / sxx;
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty input");
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

}  // namespace ratiolab
