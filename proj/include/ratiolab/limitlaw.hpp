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

// Limit laws of the rescaled extreme moduli of A B^-1:
//
//   R0   = sqrt(min_k gamma_k),  gamma_k ~ Gamma(k, 1) independent,
//   Rinf = 1 / R0,
//
//   P(R0 <= x)   = 1 - prod_k S_k(x^2),
//   P(Rinf <= x) = prod_k S_k(x^-2),
//
// where S_k(y) = P(gamma_k >= y) = e^-y sum_{j<k} y^j / j! is the Poisson
// form of the Gamma survival function. Products are accumulated in log space
// and truncated with the bound 1 - prod_{k>K} S_k <= sum_{k>K} P(gamma_k < y).

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ratiolab/rng.hpp"

namespace ratiolab {

/// Both tails of Gamma(k, 1) at y, each accurate in relative terms.
struct GammaTails {
  double upper = 1.0;      ///< P(gamma_k >= y)
  double lower = 0.0;      ///< P(gamma_k < y)
  double log_upper = 0.0;  ///< log P(gamma_k >= y), finite even when upper underflows
};

namespace detail {

/// e^-y y^k / k! as (mantissa, log scale), built multiplicatively. Rescaling
/// keeps the mantissa in range up to k = 10^4 and beyond; when no rescale is
/// needed the result carries only a few ulps of error.
struct ScaledTerm {
  double mantissa = 1.0;
  double log_scale = 0.0;
  double value() const { return mantissa * std::exp(log_scale); }
  double log_value() const { return std::log(mantissa) + log_scale; }
};

inline ScaledTerm poisson_term(int k, double y) {
  constexpr double kBig = 1e200, kSmall = 1e-200;
  const double log_big = std::log(kBig);
  ScaledTerm t{1.0, -y};
  for (int j = 1; j <= k; ++j) {
    t.mantissa *= y / j;
    if (t.mantissa > kBig) {
      t.mantissa *= kSmall;
      t.log_scale += log_big;
    } else if (t.mantissa < kSmall) {
      t.mantissa *= kBig;
      t.log_scale -= log_big;
    }
  }
  return t;
}

}  // namespace detail

inline GammaTails gamma_tails(int k, double y) {
  if (k < 1) throw std::invalid_argument("gamma_tails: k must be >= 1");
  if (!(y >= 0.0)) throw std::invalid_argument("gamma_tails: y must be >= 0");
  GammaTails t;
  if (y == 0.0) return t;
  if (static_cast<double>(k - 1) <= y) {
    // Dominant term is t_{k-1}; sum the upper tail downwards from it.
    const auto top = detail::poisson_term(k - 1, y);
    double ratio_sum = 1.0, term = 1.0;
    for (int j = k - 1; j > 0; --j) {
      term *= j / y;
      ratio_sum += term;
      if (term < 1e-18 * ratio_sum) break;
    }
    const detail::ScaledTerm upper{top.mantissa * ratio_sum, top.log_scale};
    t.log_upper = upper.log_value();
    t.upper = upper.value();
    t.lower = 1.0 - t.upper;
  } else {
    // Dominant term is t_k; the lower tail series decays with ratio y/(j+1).
    const auto first = detail::poisson_term(k, y);
    double ratio_sum = 1.0, term = 1.0;
    for (int j = k + 1;; ++j) {
      term *= y / j;
      ratio_sum += term;
      if (term < 1e-18 * ratio_sum) break;
    }
    t.lower = detail::ScaledTerm{first.mantissa * ratio_sum, first.log_scale}.value();
    t.upper = 1.0 - t.lower;
    t.log_upper = std::log1p(-t.lower);
  }
  return t;
}

/// S_k(x) = P(gamma_k >= x) = e^-x sum_{j<k} x^j / j!.
inline double gamma_survival(int k, double x) { return gamma_tails(k, x).upper; }

enum class LimitLaw { r0, rinf };

inline std::string_view to_string(LimitLaw w) noexcept {
  return w == LimitLaw::r0 ? "r0" : "rinf";
}

inline LimitLaw parse_limit_law(std::string_view s) {
  if (s == "r0") return LimitLaw::r0;
  if (s == "rinf") return LimitLaw::rinf;
  throw std::invalid_argument("unknown limit law '" + std::string(s) + "' (expected r0 or rinf)");
}

namespace detail {

/// Upper bound on sum_{k>K} P(gamma_k < y), using
/// P(gamma_{k+1} < y) <= y/(k+1) * P(gamma_k < y). Infinite while the ratio
/// bound is not yet contracting.
inline double gamma_remainder_bound(int K, double y, double next_lower) {
  const double ratio = y / (K + 2.0);
  if (ratio >= 0.5) return std::numeric_limits<double>::infinity();
  return next_lower / (1.0 - ratio);
}

}  // namespace detail

/// Result of a truncated product evaluation.
struct LimitCdfEvaluation {
  double value = 0.0;
  int factors = 0;
};

/// CDF evaluator for R0 or Rinf.
struct LimitLawCdf {
  LimitLaw which = LimitLaw::rinf;
  double truncation_eps = 1e-12;

  /// log prod_{k<=K} S_k(y), with K chosen adaptively unless `fixed_factors`.
  static std::pair<double, int> log_survival_product(double y, double eps,
                                                     std::optional<int> fixed_factors) {
    double log_prod = 0.0;
    int k = 1;
    for (;; ++k) {
      const auto tails = gamma_tails(k, y);
      log_prod += tails.log_upper;
      if (fixed_factors) {
        if (k >= *fixed_factors) break;
        continue;
      }
      // Both CDFs have saturated in double precision.
      if (!std::isfinite(log_prod) || log_prod < -800.0) break;
      const double next_lower = gamma_tails(k + 1, y).lower;
      if (detail::gamma_remainder_bound(k, y, next_lower) < eps) break;
    }
    return {log_prod, k};
  }

  LimitCdfEvaluation evaluate(double x, std::optional<int> fixed_factors = std::nullopt) const {
    if (!(x > 0.0)) return {0.0, 0};
    if (std::isinf(x)) return {1.0, 0};
    const double y = which == LimitLaw::r0 ? x * x : 1.0 / (x * x);
    const auto [log_prod, factors] = log_survival_product(y, truncation_eps, fixed_factors);
    const double value = which == LimitLaw::r0 ? -std::expm1(log_prod) : std::exp(log_prod);
    return {value, factors};
  }

  double operator()(double x) const { return evaluate(x).value; }

  /// 1 - cdf(x), accurate in the far tail.
  double survival(double x) const {
    if (!(x > 0.0)) return 1.0;
    if (std::isinf(x)) return 0.0;
    const double y = which == LimitLaw::r0 ? x * x : 1.0 / (x * x);
    const double log_prod = log_survival_product(y, truncation_eps, std::nullopt).first;
    return which == LimitLaw::r0 ? std::exp(log_prod) : -std::expm1(log_prod);
  }
};

inline double cdf(const LimitLawCdf& law, double x) { return law(x); }

/// Inverse CDF by bisection over an adaptively widened bracket, to absolute
/// 1e-12 in x.
inline double quantile(const LimitLawCdf& law, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: p must lie in (0, 1)");
  double lo = 1.0, hi = 1.0;
  while (law(lo) > p) lo *= 0.5;
  while (law(hi) < p) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (law(mid) < p) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Exact-in-law draw of sqrt(min_k gamma_k): gammas are drawn in order until
/// the chance that any later one undercuts the running minimum is below
/// `eps`.
inline double sample_r0(RandomStream& rng, double eps = 1e-12) {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 1;; ++k) {
    m = std::min(m, gamma_variate(rng, static_cast<double>(k)));
    const double next_lower = gamma_tails(k + 1, m).lower;
    if (detail::gamma_remainder_bound(k, m, next_lower) < eps) break;
  }
  return std::sqrt(m);
}

inline double sample_rinf(RandomStream& rng, double eps = 1e-12) {
  return 1.0 / sample_r0(rng, eps);
}

}  // namespace ratiolab
