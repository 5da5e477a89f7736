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


// ratiolab command-line front end.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ratiolab/cmatrix.hpp"
#include "ratiolab/entrylaws.hpp"
#include "ratiolab/harness.hpp"
#include "ratiolab/hermitization.hpp"
#include "ratiolab/limitlaw.hpp"
#include "ratiolab/spherical.hpp"
#include "ratiolab/stats.hpp"

using namespace ratiolab;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string out;
  std::string format = "csv";
  std::string config;
};

/// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

/// Accepts "a", "a+bi", "a-bi", "bi" and "re,im".
Complex parse_complex(std::string s) {
  std::erase(s, ' ');
  if (s.empty()) throw std::invalid_argument("empty complex number");
  if (const auto comma = s.find(','); comma != std::string::npos) {
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  }
  if (s.back() != 'i') return {std::stod(s), 0.0};
  s.pop_back();
  const auto split = s.find_last_of("+-");
  if (split == std::string::npos || split == 0) {
    const std::string im = s.empty() || s == "+" || s == "-" ? s + "1" : s;
    return {0.0, std::stod(im)};
  }
  std::string im = s.substr(split);
  if (im.size() == 1) im += "1";
  return {std::stod(s.substr(0, split)), std::stod(im)};
}

/// "a:b:step" into the inclusive grid a, a+step, ..., b.
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(std::stod(item));
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw std::invalid_argument("grid must be lo:hi:step with step > 0 and hi >= lo");
  }
  std::vector<double> g;
  const auto count = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) g.push_back(parts[0] + parts[2] * static_cast<double>(i));
  return g;
}

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig c;
  if (path.empty()) return c;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config '" + path + "'");
  return json::parse(in).get<ExperimentConfig>();
}

/// Experiment flags shared by radius, hist and compare. Flags given on the
/// command line override the --config file.
struct ExperimentFlags {
  std::string law, law_a, law_b, statistic;
  std::size_t n = 0, trials = 0;
  double reject = 0.0;
  CLI::Option* law_opt = nullptr;
  CLI::Option* law_a_opt = nullptr;
  CLI::Option* law_b_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* trials_opt = nullptr;
  CLI::Option* stat_opt = nullptr;
  CLI::Option* reject_opt = nullptr;

  void attach(CLI::App* cmd, bool laws) {
    if (laws) {
      law_opt = cmd->add_option("--law", law, "Entry law for both A and B");
      law_a_opt = cmd->add_option("--law-a", law_a, "Entry law for A");
      law_b_opt = cmd->add_option("--law-b", law_b, "Entry law for B");
    }
    n_opt = cmd->add_option("--n", n, "Matrix dimension");
    trials_opt = cmd->add_option("--trials", trials, "Number of trials");
    stat_opt = cmd->add_option("--statistic", statistic,
                               "rho_max_scaled | rho_min_scaled | pooled_moduli");
    reject_opt = cmd->add_option("--reject", reject,
                                 "Redraw pairs whose relative LU pivot is below this floor")
                     ->expected(0, 1)
                     ->default_str("1e-12");
  }

  ExperimentConfig resolve(const Globals& g, CLI::App& app) const {
    ExperimentConfig c = load_config(g.config);
    if (law_opt && law_opt->count()) c.law_a = c.law_b = law;
    if (law_a_opt && law_a_opt->count()) c.law_a = law_a;
    if (law_b_opt && law_b_opt->count()) c.law_b = law_b;
    if (n_opt->count()) c.n = n;
    if (trials_opt->count()) c.trials = trials;
    if (stat_opt->count()) c.statistic = parse_statistic(statistic);
    if (reject_opt->count()) {
      c.rejection.enabled = true;
      c.rejection.threshold = reject > 0.0 ? reject : 1e-12;
    }
    if (app.get_option("--seed")->count() || g.config.empty()) c.seed = g.seed;
    if (app.get_option("--workers")->count() || g.config.empty()) c.workers = g.workers;
    return c;
  }
};

void summary(const ExperimentResult& r) {
  std::fprintf(stderr, "%s n=%zu trials=%zu %s: KS vs limit %.4f, rejected %zu, %.2fs\n",
               law_label(r.config).c_str(), r.config.n, r.config.trials,
               std::string(to_string(r.config.statistic)).c_str(), r.ks_vs_limit,
               r.rejected_count, r.runtime_seconds);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Rows of interleaved re,im pairs; the row count fixes n.
ComplexMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::vector<Complex> entries;
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::vector<double> v;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) v.push_back(std::stod(cell));
    if (v.size() % 2) throw std::runtime_error("row " + std::to_string(rows + 1) + ": odd number of values");
    for (std::size_t k = 0; k < v.size(); k += 2) entries.emplace_back(v[k], v[k + 1]);
    ++rows;
  }
  if (rows == 0) throw std::runtime_error("'" + path + "' holds no matrix rows");
  return ComplexMatrix(rows, std::move(entries));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ratiolab: spectra of ratios of random matrices"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--format", g.format, "csv or json")->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", g.config, "JSON experiment config")->check(CLI::ExistingFile);

  // radius
  auto* radius = app.add_subcommand("radius", "Monte Carlo radii of A B^-1 against the limit law");
  ExperimentFlags radius_flags;
  radius_flags.attach(radius, true);
  radius->callback([&] {
    const auto r = run_radius_experiment(radius_flags.resolve(g, app));
    summary(r);
    Sink sink(g.out);
    if (g.format == "json") sink.os() << result_json(r).dump(2) << '\n';
    else write_samples_csv(sink.os(), r);
  });

  // hist
  auto* hist = app.add_subcommand("hist", "Histogram of a radius experiment");
  ExperimentFlags hist_flags;
  hist_flags.attach(hist, true);
  std::size_t bins = 50;
  std::string range;
  hist->add_option("--bins", bins, "Number of bins")->capture_default_str();
  hist->add_option("--range", range, "lo:hi (default: sample range)");
  hist->callback([&] {
    const auto r = run_radius_experiment(hist_flags.resolve(g, app));
    summary(r);
    double lo = r.samples.front(), hi = r.samples.back();
    if (!range.empty()) {
      const auto colon = range.find(':');
      if (colon == std::string::npos) throw CLI::ValidationError("--range", "expected lo:hi");
      lo = std::stod(range.substr(0, colon));
      hi = std::stod(range.substr(colon + 1));
    }
    const auto h = histogram(r.samples, bins, lo, hi);
    Sink sink(g.out);
    if (g.format == "json") {
      json j{{"schema_version", kSchemaVersion}, {"kind", "histogram"}, {"config", r.config},
             {"version", r.version}, {"bins", json::array()}};
      for (const auto& b : h) {
        j["bins"].push_back({{"bin_left", b.left}, {"bin_right", b.right}, {"count", b.count},
                             {"density", b.density}});
      }
      sink.os() << j.dump(2) << '\n';
    } else {
      write_histogram_csv(sink.os(), h);
    }
  });

  // compare
  auto* compare = app.add_subcommand("compare", "Pairwise two-sample KS between entry laws");
  ExperimentFlags compare_flags;
  compare_flags.attach(compare, false);
  std::string laws = "gaussian,ghq:k=4";
  compare->add_option("--laws", laws, "Comma-separated laws (used for A and B)")
      ->capture_default_str();
  compare->callback([&] {
    const auto base = compare_flags.resolve(g, app);
    std::vector<ExperimentConfig> configs;
    std::uint64_t offset = 0;
    for (const auto& law : split_list(laws)) {
      auto c = base;
      c.law_a = c.law_b = law;
      c.seed = base.seed + offset++;
      configs.push_back(c);
    }
    const auto table = cross_law_comparison(configs);
    for (const auto& r : table.results) summary(r);
    Sink sink(g.out);
    if (g.format == "json") {
      json j{{"schema_version", kSchemaVersion}, {"kind", "compare"}, {"version", std::string(kVersion)},
             {"rows", json::array()}};
      for (const auto& row : table.rows) {
        j["rows"].push_back({{"first", row.label_first}, {"second", row.label_second}, {"ks", row.ks}});
      }
      sink.os() << j.dump(2) << '\n';
    } else {
      write_comparison_csv(sink.os(), table.rows);
    }
  });

  // eig
  auto* eig = app.add_subcommand("eig", "Eigenvalues of a matrix read from CSV");
  std::string eig_in;
  eig->add_option("--in", eig_in, "CSV rows of interleaved re,im entries")->required()
      ->check(CLI::ExistingFile);
  eig->callback([&] {
    const auto e = eigenvalues(read_matrix_csv(eig_in));
    Sink sink(g.out);
    sink.os() << "re,im\n";
    for (const auto& l : e) sink.os() << format_double(l.real()) << ',' << format_double(l.imag()) << '\n';
  });

  // kernel-gap
  auto* kgap = app.add_subcommand("kernel-gap", "Scaled spherical kernel against the infinite Ginibre kernel");
  std::vector<std::size_t> kgap_n = {100, 1000, 10000};
  std::string kgap_grid = "default";
  kgap->add_option("--n", kgap_n, "Dimensions")->delimiter(',');
  kgap->add_option("--grid", kgap_grid, "Point grid")->check(CLI::IsMember({"default"}));
  kgap->callback([&] {
    const auto grid = default_kernel_grid();
    Sink sink(g.out);
    sink.os() << "n,gap\n";
    for (auto n : kgap_n) sink.os() << n << ',' << format_double(scaled_kernel_gap(n, grid)) << '\n';
  });

  // kostlan
  auto* kostlan = app.add_subcommand("kostlan", "Exact eigenvalue moduli of Ginibre ratios");
  std::size_t kostlan_n = 1000, kostlan_trials = 1;
  kostlan->add_option("--n", kostlan_n, "Dimension")->capture_default_str();
  kostlan->add_option("--trials", kostlan_trials, "Trials")->capture_default_str();
  kostlan->callback([&] {
    std::vector<std::vector<double>> moduli(kostlan_trials);
    parallel_for(kostlan_trials, g.workers, [&](std::size_t t) {
      auto rng = derive_trial_rng(g.seed, t);
      moduli[t] = kostlan_moduli(kostlan_n, rng);
    });
    Sink sink(g.out);
    sink.os() << "trial,k,modulus\n";
    for (std::size_t t = 0; t < kostlan_trials; ++t) {
      for (std::size_t k = 0; k < kostlan_n; ++k) {
        sink.os() << t << ',' << k + 1 << ',' << format_double(moduli[t][k]) << '\n';
      }
    }
  });

  // limit-cdf
  auto* lcdf = app.add_subcommand("limit-cdf", "CDF of R0 or Rinf on a grid");
  std::string which = "rinf", lcdf_grid = "0.05:10:0.05";
  lcdf->add_option("--which", which, "r0 or rinf")->capture_default_str();
  lcdf->add_option("--grid", lcdf_grid, "lo:hi:step")->capture_default_str();
  lcdf->callback([&] {
    const LimitLawCdf law{parse_limit_law(which)};
    Sink sink(g.out);
    sink.os() << "x,cdf\n";
    for (double x : parse_grid(lcdf_grid)) {
      sink.os() << format_double(x) << ',' << format_double(law(x)) << '\n';
    }
  });

  // limit-sample
  auto* lsample = app.add_subcommand("limit-sample", "Exact draws of R0 or Rinf");
  std::string lsample_which = "r0";
  std::size_t lsample_n = 1000;
  lsample->add_option("--which", lsample_which, "r0 or rinf")->capture_default_str();
  lsample->add_option("--trials,--n", lsample_n, "Number of draws")->capture_default_str();
  lsample->callback([&] {
    const auto w = parse_limit_law(lsample_which);
    std::vector<double> v(lsample_n);
    parallel_for(lsample_n, g.workers, [&](std::size_t i) {
      auto rng = derive_trial_rng(g.seed, i);
      v[i] = w == LimitLaw::r0 ? sample_r0(rng) : sample_rinf(rng);
    });
    Sink sink(g.out);
    sink.os() << "value\n";
    for (double x : v) sink.os() << format_double(x) << '\n';
  });

  // local-law
  auto* ll = app.add_subcommand("local-law", "Green function trace against the rescaled semicircle");
  std::string ll_law = "gaussian", ll_z = "0";
  std::size_t ll_n = 400, ll_trials = 100;
  double ll_eta = 0.5;
  ll->add_option("--law", ll_law, "Entry law for A and B")->capture_default_str();
  ll->add_option("--n", ll_n, "Dimension")->capture_default_str();
  ll->add_option("--eta", ll_eta, "Spectral parameter Im w")->capture_default_str();
  ll->add_option("--z", ll_z, "Shift, e.g. 2 or 1+0.5i")->capture_default_str();
  ll->add_option("--trials", ll_trials, "Trials")->capture_default_str();
  ll->callback([&] {
    const auto law = EntryLaw::parse(ll_law);
    const Complex z = parse_complex(ll_z);
    std::vector<double> res(ll_trials);
    parallel_for(ll_trials, g.workers, [&](std::size_t t) {
      auto rng = derive_trial_rng(g.seed, t);
      res[t] = local_law_residual(law, law, ll_n, z, ll_eta, rng);
    });
    std::fprintf(stderr, "median residual %.3e\n", median(res));
    Sink sink(g.out);
    sink.os() << "trial,residual\n";
    for (std::size_t t = 0; t < ll_trials; ++t) sink.os() << t << ',' << format_double(res[t]) << '\n';
  });

  // logdet-check
  auto* ld = app.add_subcommand("logdet-check", "Linear statistic against its log-det integral");
  std::size_t ld_n = 16, ld_grid = 101, ld_draws = 1;
  double ld_extent = 4.0, ld_radius = 3.0;
  std::string ld_law = "gaussian";
  bool ld_refine = false;
  ld->add_option("--n", ld_n, "Dimension")->capture_default_str();
  ld->add_option("--grid", ld_grid, "Grid points per side")->capture_default_str();
  ld->add_option("--extent", ld_extent, "Grid covers [-extent, extent]^2")->capture_default_str();
  ld->add_option("--radius", ld_radius, "Support radius of the bump test function")->capture_default_str();
  ld->add_option("--law", ld_law, "Entry law for A and B")->capture_default_str();
  ld->add_option("--draws", ld_draws, "Independent pencils")->capture_default_str();
  ld->add_flag("--refine", ld_refine, "Also evaluate with the grid step halved");
  ld->callback([&] {
    const auto law = EntryLaw::parse(ld_law);
    const QuadGrid grid{ld_extent, ld_grid};
    const auto f = [r = ld_radius](Complex z) { return radial_bump(z, r); };
    Sink sink(g.out);
    sink.os() << "draw,points,lhs,rhs,residual,coarse_grid,clipped_cells\n";
    for (std::size_t d = 0; d < ld_draws; ++d) {
      auto rng = derive_trial_rng(g.seed, d);
      const auto a = sample_matrix(law, ld_n, rng);
      const auto b = sample_matrix(law, ld_n, rng);
      std::vector<QuadGrid> grids = {grid};
      if (ld_refine) grids.push_back(refined(grid));
      for (const auto& gr : grids) {
        const auto r = linear_statistic_logdet(a, b, f, gr);
        sink.os() << d << ',' << gr.points << ',' << format_double(r.lhs) << ','
                  << format_double(r.rhs) << ',' << format_double(r.residual()) << ','
                  << (r.coarse_grid ? 1 : 0) << ',' << r.clipped_cells << '\n';
      }
    }
  });

  // sval-tail
  auto* st = app.add_subcommand("sval-tail", "Tail of the smallest singular value of (A - zB)/sqrt(n)");
  std::string st_law = "gaussian", st_z = "1";
  std::size_t st_n = 64, st_trials = 10000, st_points = 21;
  double t_min = 1e-4, t_max = 1e-2;
  st->add_option("--law", st_law, "Entry law for A and B")->capture_default_str();
  st->add_option("--n", st_n, "Dimension")->capture_default_str();
  st->add_option("--z", st_z, "Shift")->capture_default_str();
  st->add_option("--trials", st_trials, "Trials")->capture_default_str()->check(CLI::Range(1000ul, 100000000ul));
  st->add_option("--t-min", t_min, "Smallest t")->capture_default_str();
  st->add_option("--t-max", t_max, "Largest t")->capture_default_str();
  st->add_option("--t-points", st_points, "Log-spaced grid size")->capture_default_str();
  st->callback([&] {
    const auto law = EntryLaw::parse(st_law);
    const auto grid = log_spaced(t_min, t_max, st_points);
    const auto rows = sval_tail_experiment(law, law, st_n, parse_complex(st_z), grid, st_trials,
                                           g.seed, g.workers);
    Sink sink(g.out);
    sink.os() << "t,prob\n";
    for (const auto& r : rows) sink.os() << format_double(r.t) << ',' << format_double(r.prob) << '\n';
    const auto usable = std::count_if(rows.begin(), rows.end(), [](const TailRow& r) { return r.count >= 10; });
    if (usable >= 2) {
      std::fprintf(stderr, "log-log slope %.3f\n", tail_slope(rows));
    } else {
      std::fprintf(stderr, "log-log slope: fewer than two grid points with 10 or more events\n");
    }
  });

  // audit
  auto* audit = app.add_subcommand("audit", "Moment deviations from the complex Gaussian");
  std::string audit_law = "gaussian";
  std::size_t audit_n = 100;
  double audit_c0 = 0.1;
  int audit_order = 4;
  audit->add_option("--law", audit_law, "Entry law")->capture_default_str();
  audit->add_option("--n", audit_n, "Dimension for the matching verdict")->capture_default_str();
  audit->add_option("--c0", audit_c0, "Exponent slack c0")->capture_default_str();
  audit->add_option("--max-order", audit_order, "Highest order audited")->capture_default_str();
  audit->callback([&] {
    const auto a = audit_moments(EntryLaw::parse(audit_law), audit_n, audit_c0, audit_order);
    json dev = json::object();
    for (const auto& [k, e] : a.deviations) dev[std::to_string(k)] = e;
    json j{{"schema_version", kSchemaVersion}, {"variant", a.variant}, {"deviations", dev},
           {"n", a.n}, {"c0", a.c0}, {"satisfies_c2", a.satisfies_c2}};
    Sink sink(g.out);
    sink.os() << j.dump(2) << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
