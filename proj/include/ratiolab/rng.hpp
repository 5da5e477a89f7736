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

// Counter-derived random streams and the scalar samplers built on them.
//
// Every Monte Carlo trial owns a RandomStream obtained from
// derive_trial_rng(master_seed, trial_index). The derivation is a pure hash of
// the pair, so results never depend on worker count or execution order.
// All samplers below are written against the raw 64-bit output so that draws
// are bit-identical across standard library implementations.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>

namespace ratiolab {

/// One round of the SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  /// Seeds the 256-bit state from a SplitMix64 sequence started at `key`.
  explicit RandomStream(std::uint64_t key = 0) noexcept {
    for (auto& word : state_) {
      key += 0x9E3779B97F4A7C15ULL;
      word = mix64(key);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  friend bool operator==(const RandomStream&, const RandomStream&) = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

/// Stream for trial `trial_index` of an experiment seeded with `master_seed`.
inline RandomStream derive_trial_rng(std::uint64_t master_seed,
                                     std::uint64_t trial_index) noexcept {
  const std::uint64_t a = mix64(master_seed + 0x9E3779B97F4A7C15ULL);
  const std::uint64_t b = mix64(trial_index ^ 0xD1B54A32D192ED03ULL);
  return RandomStream(mix64(a ^ (b + 0x632BE59BD9B4E019ULL + (a << 6) + (a >> 2))));
}

/// Uniform draw on the open interval (0, 1) with 53-bit resolution.
inline double uniform_open(RandomStream& rng) noexcept {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Fair sign, +1 or -1.
inline double random_sign(RandomStream& rng) noexcept {
  return (rng() >> 63) != 0 ? -1.0 : 1.0;
}

/// Two independent N(0,1) draws (Box-Muller).
inline std::pair<double, double> standard_normal_pair(RandomStream& rng) noexcept {
  const double radius = std::sqrt(-2.0 * std::log(uniform_open(rng)));
  const double angle = 2.0 * std::numbers::pi * uniform_open(rng);
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

inline double standard_normal(RandomStream& rng) noexcept {
  return standard_normal_pair(rng).first;
}

inline double standard_exponential(RandomStream& rng) noexcept {
  return -std::log(uniform_open(rng));
}

/// Gamma(shape, 1). Integer shapes up to 16 use a sum of exponentials,
/// everything else goes through Marsaglia-Tsang (shape < 1 via the
/// U^(1/shape) boost).
inline double gamma_variate(RandomStream& rng, double shape) noexcept {
  if (shape == std::floor(shape) && shape >= 1.0 && shape <= 16.0) {
    double log_product = 0.0;
    for (int i = 0; i < static_cast<int>(shape); ++i) {
      log_product += std::log(uniform_open(rng));
    }
    return -log_product;
  }
  if (shape < 1.0) {
    const double boost = std::pow(uniform_open(rng), 1.0 / shape);
    return gamma_variate(rng, shape + 1.0) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = standard_normal(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform_open(rng);
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace ratiolab
