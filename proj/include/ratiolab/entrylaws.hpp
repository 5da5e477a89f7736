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

// I.i.d. complex entry laws for Girko matrices.
//
// Every law here is a product law: Re Z and Im Z are independent copies of a
// symmetric real "coordinate" law with variance 1/2, so E Z = 0, E|Z|^2 = 1
// and E Z^2 = 0 hold by construction. Moment audits compare coordinate
// moments against N(0, 1/2), the coordinate law of the standard complex
// Gaussian.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ratiolab/cmatrix.hpp"
#include "ratiolab/quadrature.hpp"
#include "ratiolab/rng.hpp"

namespace ratiolab {

enum class LawKind {
  complex_gaussian,
  symmetric_bernoulli,
  zipf_symmetric,
  hermite_perturbed,
  gauss_hermite_discrete,
};

/// Requested moment order is outside what a law declares.
class MomentOrderError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// E[X^a] for X ~ N(0, 1/2): zero for odd a, (a-1)!! / 2^(a/2) otherwise.
inline double gaussian_coordinate_moment(int a) noexcept {
  if (a % 2 != 0) return 0.0;
  double m = 1.0;
  for (int j = a - 1; j > 0; j -= 2) m *= 0.5 * j;
  return m;
}

namespace detail {

struct GaussianCoordinate {};

/// +-1/sqrt(2) with equal mass.
struct RademacherCoordinate {};

/// Finite symmetric law, e.g. a Gauss-Hermite rule.
struct DiscreteCoordinate {
  std::vector<double> atoms;
  std::vector<double> probabilities;
  std::vector<double> cumulative;
};

/// P(X = +-m*scale) proportional to m^-(alpha+1), 1 <= m <= support.
struct ZipfCoordinate {
  double alpha = 4.0;
  double scale = 1.0;
  std::size_t support = 0;
  /// survival[m] = P(|X| >= m*scale) for m in [1, support+1].
  std::shared_ptr<const std::vector<double>> survival;
};

/// Density (1 + H_m(x)/c) e^{-x^2}/sqrt(pi).
struct HermiteCoordinate {
  int degree = 6;
  double c = 1.0;
  double lo = 0.0;
  double step = 0.0;
  std::shared_ptr<const std::vector<double>> cdf_table;

  double pdf(double x) const noexcept {
    return (1.0 + hermite_polynomial(degree, x) / c) * std::exp(-x * x) /
           std::sqrt(std::numbers::pi);
  }
  /// Closed form: the antiderivative of H_m e^{-x^2} is -H_{m-1} e^{-x^2}.
  double cdf(double x) const noexcept {
    return 0.5 * std::erfc(-x) - hermite_polynomial(degree - 1, x) * std::exp(-x * x) /
                                     (c * std::sqrt(std::numbers::pi));
  }
};

using CoordinateLaw = std::variant<GaussianCoordinate, RademacherCoordinate,
                                   DiscreteCoordinate, ZipfCoordinate, HermiteCoordinate>;

inline double sample_coordinate(const DiscreteCoordinate& law, RandomStream& rng) {
  const double u = uniform_open(rng);
  auto it = std::upper_bound(law.cumulative.begin(), law.cumulative.end(), u);
  if (it == law.cumulative.end()) --it;
  return law.atoms[static_cast<std::size_t>(it - law.cumulative.begin())];
}

inline double sample_coordinate(const ZipfCoordinate& law, RandomStream& rng) {
  const double u = uniform_open(rng);
  const auto& s = *law.survival;
  // Largest m with P(|X| >= m) >= u.
  auto it = std::partition_point(s.begin() + 1, s.end(), [u](double v) { return v >= u; });
  const auto m = static_cast<double>(it - s.begin() - 1);
  return random_sign(rng) * m * law.scale;
}

inline double sample_coordinate(const HermiteCoordinate& law, RandomStream& rng) {
  const double u = uniform_open(rng);
  const auto& table = *law.cdf_table;
  auto it = std::upper_bound(table.begin(), table.end(), u);
  if (it == table.begin()) return law.lo;
  if (it == table.end()) return law.lo + law.step * static_cast<double>(table.size() - 1);
  const auto j = static_cast<std::size_t>(it - table.begin()) - 1;
  double a = law.lo + law.step * static_cast<double>(j);
  double b = a + law.step;
  const double fa = table[j], fb = table[j + 1];
  double x = fb > fa ? a + (u - fa) / (fb - fa) * law.step : 0.5 * (a + b);
  for (int it_count = 0; it_count < 60; ++it_count) {
    const double f = law.cdf(x) - u;
    if (std::abs(f) < 1e-14) break;
    if (f > 0.0) b = x; else a = x;
    if (b - a < 1e-14) break;
    const double dens = law.pdf(x);
    double next = dens > 0.0 ? x - f / dens : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    x = next;
  }
  return x;
}

}  // namespace detail

class EntryLaw {
 public:
  static EntryLaw complex_gaussian() {
    return EntryLaw(LawKind::complex_gaussian, 0.0, detail::GaussianCoordinate{}, true, 16);
  }

  /// Support {(+-1 +- i)/sqrt(2)}.
  static EntryLaw symmetric_bernoulli() {
    return EntryLaw(LawKind::symmetric_bernoulli, 0.0, detail::RademacherCoordinate{}, false, 16);
  }

  /// Symmetric discrete law with P(X = +-m s) ~ m^-(alpha+1), truncated at
  /// m <= support, s chosen so Var X = 1/2.
  static EntryLaw zipf_symmetric(double alpha, std::size_t support = 1'000'000) {
    if (!(alpha > 2.0)) throw std::invalid_argument("zipf: alpha must exceed 2 (finite variance)");
    if (support < 1) throw std::invalid_argument("zipf: empty support");
    auto survival = std::make_shared<std::vector<double>>(support + 2, 0.0);
    long double total = 0.0L, second = 0.0L;
    for (std::size_t m = support; m >= 1; --m) {
      const long double md = static_cast<long double>(m);
      const long double p = std::pow(md, -static_cast<long double>(alpha) - 1.0L);
      total += p;
      second += p * md * md;
      (*survival)[m] = static_cast<double>(total);  // unnormalized for now
    }
    for (std::size_t m = 1; m <= support; ++m) {
      (*survival)[m] = static_cast<double>(static_cast<long double>((*survival)[m]) / total);
    }
    (*survival)[1] = 1.0;
    detail::ZipfCoordinate z;
    z.alpha = alpha;
    z.support = support;
    z.scale = static_cast<double>(std::sqrt(total / (2.0L * second)));
    z.survival = std::move(survival);
    return EntryLaw(LawKind::zipf_symmetric, alpha, std::move(z), false, 8);
  }

  /// Per-coordinate density (1 + H_m/c) times the N(0,1/2) density, with
  /// c = |min H_m|. Matches N(0,1/2) moments below order m.
  static EntryLaw hermite_perturbed(int m) {
    if (m % 2 != 0 || m <= 4) {
      throw std::invalid_argument("hermite: degree must be even and at least 6");
    }
    detail::HermiteCoordinate h;
    h.degree = m;
    h.c = std::abs(hermite_minimum(m));
    const double half_width = std::sqrt(2.0 * m + 1.0) + 6.0;
    constexpr std::size_t kIntervals = 8192;
    h.lo = -half_width;
    h.step = 2.0 * half_width / static_cast<double>(kIntervals);
    auto table = std::make_shared<std::vector<double>>(kIntervals + 1);
    for (std::size_t j = 0; j <= kIntervals; ++j) {
      (*table)[j] = h.cdf(h.lo + h.step * static_cast<double>(j));
    }
    // The closed-form CDF is monotone up to rounding; enforce it for the search.
    for (std::size_t j = 1; j <= kIntervals; ++j) {
      (*table)[j] = std::max((*table)[j], (*table)[j - 1]);
    }
    h.cdf_table = std::move(table);
    return EntryLaw(LawKind::hermite_perturbed, m, std::move(h), true, 16);
  }

  /// Discrete law whose coordinates follow the (k/2 + 1)-point Gauss-Hermite
  /// rule for N(0,1/2); coordinate moments match through order 2*(k/2)+1.
  static EntryLaw gauss_hermite_discrete(int k) {
    if (k < 1 || k > 64) throw std::invalid_argument("ghq: matched order must be in [1, 64]");
    const auto rule = gauss_hermite_rule(static_cast<std::size_t>(k / 2 + 1));
    detail::DiscreteCoordinate d;
    // Ascending atoms.
    for (std::size_t i = rule.nodes.size(); i-- > 0;) {
      d.atoms.push_back(rule.nodes[i]);
      d.probabilities.push_back(rule.weights[i] / std::sqrt(std::numbers::pi));
    }
    double acc = 0.0;
    for (double p : d.probabilities) {
      acc += p;
      d.cumulative.push_back(acc);
    }
    d.cumulative.back() = 1.0;
    return EntryLaw(LawKind::gauss_hermite_discrete, k, std::move(d), false, 16);
  }

  /// Parses `gaussian`, `bernoulli`, `zipf:alpha=4`, `hermite:m=6`, `ghq:k=4`.
  static EntryLaw parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    auto param = [&](std::string_view key) -> double {
      if (colon == std::string_view::npos) {
        throw std::invalid_argument("law '" + std::string(text) + "' needs " + std::string(key) + "=...");
      }
      const std::string_view rest = text.substr(colon + 1);
      const auto eq = rest.find('=');
      if (eq == std::string_view::npos || rest.substr(0, eq) != key) {
        throw std::invalid_argument("law '" + std::string(text) + "': expected " + std::string(key) + "=<value>");
      }
      const std::string value(rest.substr(eq + 1));
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != value.size() || value.empty()) {
        throw std::invalid_argument("law '" + std::string(text) + "': bad number '" + value + "'");
      }
      return v;
    };
    auto integer = [&](std::string_view key) {
      const double v = param(key);
      if (v != std::floor(v)) throw std::invalid_argument("law '" + std::string(text) + "': " + std::string(key) + " must be an integer");
      return static_cast<int>(v);
    };
    auto bare = [&] {
      if (colon != std::string_view::npos) {
        throw std::invalid_argument("law '" + std::string(name) + "' takes no parameters");
      }
    };
    if (name == "gaussian") { bare(); return complex_gaussian(); }
    if (name == "bernoulli") { bare(); return symmetric_bernoulli(); }
    if (name == "zipf") return zipf_symmetric(param("alpha"));
    if (name == "hermite") return hermite_perturbed(integer("m"));
    if (name == "ghq") return gauss_hermite_discrete(integer("k"));
    throw std::invalid_argument("unknown law '" + std::string(text) + "'");
  }

  LawKind kind() const noexcept { return kind_; }
  bool has_bounded_density() const noexcept { return bounded_density_; }
  int declared_moment_order() const noexcept { return declared_order_; }

  /// Canonical specification string, the inverse of parse().
  std::string spec() const {
    switch (kind_) {
      case LawKind::complex_gaussian: return "gaussian";
      case LawKind::symmetric_bernoulli: return "bernoulli";
      case LawKind::zipf_symmetric: return "zipf:alpha=" + format_number(parameter_);
      case LawKind::hermite_perturbed: return "hermite:m=" + format_number(parameter_);
      case LawKind::gauss_hermite_discrete: return "ghq:k=" + format_number(parameter_);
    }
    return "unknown";
  }

  /// One draw Z = X + iY.
  std::complex<double> sample(RandomStream& rng) const {
    if (kind_ == LawKind::complex_gaussian) {
      const auto [x, y] = standard_normal_pair(rng);
      return {x * std::numbers::sqrt2 * 0.5, y * std::numbers::sqrt2 * 0.5};
    }
    const double x = sample_coordinate(rng);
    const double y = sample_coordinate(rng);
    return {x, y};
  }

  /// One draw of Re Z.
  double sample_coordinate(RandomStream& rng) const {
    return std::visit(
        [&rng](const auto& law) -> double {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, detail::GaussianCoordinate>) {
            return standard_normal(rng) * std::numbers::sqrt2 * 0.5;
          } else if constexpr (std::is_same_v<T, detail::RademacherCoordinate>) {
            return random_sign(rng) * std::numbers::sqrt2 * 0.5;
          } else {
            return detail::sample_coordinate(law, rng);
          }
        },
        coordinate_);
  }

  /// E[(Re Z)^a]: exact for Gaussian and discrete laws, 200-point
  /// Gauss-Hermite quadrature for the perturbed densities.
  double coordinate_moment(int a) const {
    if (a < 0) throw std::invalid_argument("coordinate_moment: negative order");
    return std::visit(
        [a](const auto& law) -> double {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, detail::GaussianCoordinate>) {
            return gaussian_coordinate_moment(a);
          } else if constexpr (std::is_same_v<T, detail::RademacherCoordinate>) {
            return a % 2 != 0 ? 0.0 : std::pow(0.5, 0.5 * a);
          } else if constexpr (std::is_same_v<T, detail::DiscreteCoordinate>) {
            long double s = 0.0L;
            for (std::size_t i = 0; i < law.atoms.size(); ++i) {
              s += static_cast<long double>(law.probabilities[i]) *
                   std::pow(static_cast<long double>(law.atoms[i]), a);
            }
            return static_cast<double>(s);
          } else if constexpr (std::is_same_v<T, detail::ZipfCoordinate>) {
            if (a % 2 != 0) return 0.0;
            const auto& s = *law.survival;
            long double acc = 0.0L;
            for (std::size_t m = law.support; m >= 1; --m) {
              const long double p = static_cast<long double>(s[m]) - static_cast<long double>(s[m + 1]);
              acc += p * std::pow(static_cast<long double>(m), a);
            }
            return static_cast<double>(acc * std::pow(static_cast<long double>(law.scale), a));
          } else {
            static const GaussHermiteRule rule = gauss_hermite_rule(200);
            long double s = 0.0L;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
              const double x = rule.nodes[i];
              s += static_cast<long double>(rule.weights[i]) * std::pow(static_cast<long double>(x), a) *
                   (1.0L + hermite_polynomial(law.degree, x) / law.c);
            }
            return static_cast<double>(s / std::sqrt(std::numbers::pi_v<long double>));
          }
        },
        coordinate_);
  }

  /// P(|Re Z| > x).
  double coordinate_survival(double x) const {
    if (x < 0.0) return 1.0;
    return std::visit(
        [x](const auto& law) -> double {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, detail::GaussianCoordinate>) {
            return std::erfc(x);
          } else if constexpr (std::is_same_v<T, detail::RademacherCoordinate>) {
            return x < std::numbers::sqrt2 * 0.5 ? 1.0 : 0.0;
          } else if constexpr (std::is_same_v<T, detail::DiscreteCoordinate>) {
            double s = 0.0;
            for (std::size_t i = 0; i < law.atoms.size(); ++i) {
              if (std::abs(law.atoms[i]) > x) s += law.probabilities[i];
            }
            return s;
          } else if constexpr (std::is_same_v<T, detail::ZipfCoordinate>) {
            const double q = std::floor(x / law.scale) + 1.0;
            if (q > static_cast<double>(law.support)) return 0.0;
            return (*law.survival)[static_cast<std::size_t>(q)];
          } else {
            return law.cdf(-x) + (1.0 - law.cdf(x));
          }
        },
        coordinate_);
  }

  /// Coordinate density, for laws that have one (0 elsewhere).
  double coordinate_density(double x) const {
    if (const auto* h = std::get_if<detail::HermiteCoordinate>(&coordinate_)) return h->pdf(x);
    if (std::holds_alternative<detail::GaussianCoordinate>(coordinate_)) {
      return std::exp(-x * x) / std::sqrt(std::numbers::pi);
    }
    throw std::logic_error("coordinate_density: law " + spec() + " has no density");
  }

  /// Atoms and probabilities of a finite coordinate law (Bernoulli, ghq).
  std::vector<std::pair<double, double>> coordinate_atoms() const {
    std::vector<std::pair<double, double>> out;
    if (std::holds_alternative<detail::RademacherCoordinate>(coordinate_)) {
      const double a = std::numbers::sqrt2 * 0.5;
      out = {{-a, 0.5}, {a, 0.5}};
    } else if (const auto* d = std::get_if<detail::DiscreteCoordinate>(&coordinate_)) {
      for (std::size_t i = 0; i < d->atoms.size(); ++i) out.emplace_back(d->atoms[i], d->probabilities[i]);
    } else {
      throw std::logic_error("coordinate_atoms: law " + spec() + " is not finite");
    }
    return out;
  }

  /// Spacing of the Zipf lattice; 0 for other laws.
  double lattice_scale() const noexcept {
    if (const auto* z = std::get_if<detail::ZipfCoordinate>(&coordinate_)) return z->scale;
    return 0.0;
  }

  /// |min_x H_m(x)| for the Hermite-perturbed law; 0 otherwise.
  double hermite_constant() const noexcept {
    if (const auto* h = std::get_if<detail::HermiteCoordinate>(&coordinate_)) return h->c;
    return 0.0;
  }

  /// min over real x of H_m(x), located at the critical points (roots of
  /// H_{m-1}, since H_m' = 2m H_{m-1}).
  static double hermite_minimum(int m) {
    const double reach = std::sqrt(2.0 * m + 1.0) + 1.0;
    const double h = 1e-3;
    double best = hermite_polynomial(m, 0.0);
    double x0 = -reach;
    double f0 = hermite_polynomial(m - 1, x0);
    for (double x1 = x0 + h; x1 <= reach; x1 += h) {
      const double f1 = hermite_polynomial(m - 1, x1);
      if (f0 == 0.0 || f0 * f1 < 0.0) {
        double a = x0, b = x1, fa = f0;
        for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
          const double mid = 0.5 * (a + b);
          const double fm = hermite_polynomial(m - 1, mid);
          if ((fa <= 0.0) == (fm <= 0.0)) { a = mid; fa = fm; } else { b = mid; }
        }
        best = std::min(best, hermite_polynomial(m, 0.5 * (a + b)));
      }
      x0 = x1;
      f0 = f1;
    }
    return best;
  }

 private:
  EntryLaw(LawKind kind, double parameter, detail::CoordinateLaw coord,
           bool bounded_density, int declared_order)
      : kind_(kind),
        parameter_(parameter),
        bounded_density_(bounded_density),
        declared_order_(declared_order),
        coordinate_(std::move(coord)) {}

  static std::string format_number(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  }

  LawKind kind_;
  double parameter_;
  bool bounded_density_;
  int declared_order_;
  detail::CoordinateLaw coordinate_;
};

/// Free-function form of EntryLaw::sample.
inline std::complex<double> sample_entry(const EntryLaw& law, RandomStream& rng) {
  return law.sample(rng);
}

/// n x n matrix of i.i.d. draws, filled row by row.
inline ComplexMatrix sample_matrix(const EntryLaw& law, std::size_t n, RandomStream& rng) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (auto& z : m.row(i)) z = law.sample(rng);
  return m;
}

/// E_k = max over a+b=k of |E[(Re Z)^a (Im Z)^b] - Gaussian reference|.
inline double moment_deviation(const EntryLaw& law, int k) {
  if (k < 1 || k > law.declared_moment_order()) {
    throw MomentOrderError("moment_deviation: order " + std::to_string(k) +
                           " unavailable for " + law.spec() + " (declared up to " +
                           std::to_string(law.declared_moment_order()) + ")");
  }
  if (law.kind() == LawKind::complex_gaussian) return 0.0;
  double worst = 0.0;
  for (int a = 0; a <= k; ++a) {
    const int b = k - a;
    const double actual = law.coordinate_moment(a) * law.coordinate_moment(b);
    const double reference = gaussian_coordinate_moment(a) * gaussian_coordinate_moment(b);
    worst = std::max(worst, std::abs(actual - reference));
  }
  return worst;
}

inline constexpr double kMomentAuditTolerance = 1e-8;

struct MomentAudit {
  std::string variant;
  std::map<int, double> deviations;
  std::size_t n = 0;
  double c0 = 0.0;
  bool satisfies_c2 = false;
};

/// Audits orders 1..max_order and checks the fourth-moment-matching
/// condition at dimension n: E_1 = E_2 = 0, E_3 <= n^(-1/2-c0), E_4 <= n^-c0.
inline MomentAudit audit_moments(const EntryLaw& law, std::size_t n, double c0, int max_order = 4) {
  MomentAudit audit;
  audit.variant = law.spec();
  audit.n = n;
  audit.c0 = c0;
  const int top = std::min(std::max(max_order, 4), law.declared_moment_order());
  for (int k = 1; k <= top; ++k) audit.deviations[k] = moment_deviation(law, k);
  const double nd = static_cast<double>(n);
  audit.satisfies_c2 = audit.deviations[1] <= kMomentAuditTolerance &&
                       audit.deviations[2] <= kMomentAuditTolerance &&
                       audit.deviations[3] <= std::pow(nd, -0.5 - c0) + kMomentAuditTolerance &&
                       audit.deviations[4] <= std::pow(nd, -c0) + kMomentAuditTolerance;
  return audit;
}

}  // namespace ratiolab
