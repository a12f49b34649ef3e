// Copyright 2026 The eprqpt Authors
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

// Acceptance suite. `acceptance` runs every criterion; `acceptance k` runs
// criterion k alone. One PASS/FAIL line per criterion; the exit status is
// nonzero when any selected criterion fails.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eprqpt/cli.hpp"
#include "eprqpt/epr.hpp"
#include "eprqpt/error.hpp"
#include "eprqpt/fock.hpp"
#include "eprqpt/models.hpp"
#include "eprqpt/rpm.hpp"
#include "eprqpt/spectral.hpp"

using namespace eprqpt;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

struct NamedModel {
  std::string name;
  Hamiltonian h;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

// ---------------------------------------------------------------------------
// 1, 2: EPR against exact diagonalization

std::vector<NamedModel> epr_models() {
  std::vector<NamedModel> out;
  {
    const LinkSpec l[] = {{0, 1, -1.0}};
    out.push_back({"pair", Hamiltonian::build(2, 1.0, {0.0, 1.5}, l)});
  }
  {
    const LinkSpec l[] = {{0, 1, -1.0}, {1, 2, -1.0}};
    out.push_back({"path", Hamiltonian::build(3, 1.0, {0.0, 0.5, 1.0}, l)});
  }
  {
    // one lambda = -1 link closing the path into a frustrated loop
    const LinkSpec l[] = {{0, 1, -1.0}, {1, 2, -1.0}, {0, 2, 0.3}};
    out.push_back({"frustrated-loop", Hamiltonian::build(3, 1.0, {0.0, 0.5, 1.0}, l)});
  }
  {
    const LevelPoint d[] = {{0.0, 0.3}, {0.5, 0.7}};
    out.push_back({"cube6-two-point", random_potential_model(64, d, KineticSpec::hypercube(1.0), 1)});
  }
  {
    const LevelPoint d[] = {{-0.25, 0.25}, {0.0, 0.5}, {0.25, 0.25}};
    out.push_back({"cube6-three-point", random_potential_model(64, d, KineticSpec::hypercube(1.0), 2)});
  }
  out.push_back({"cube6-qrem", qrem(6, 1.0, 0.5, 1)});
  out.push_back({"cube6-two-level", two_level_rpm(6, 1.0, 0.0, 0.5).hamiltonian});
  return out;
}

// Five points, 0.5 apart, starting once the first excited state has decayed
// by e^{-5}.
std::vector<double> fit_grid(const SpectralResult& r) {
  const double t0 = std::max(1.0, 5.0 / (r.gap_energy - r.energy));
  std::vector<double> grid;
  for (int k = 0; k < 5; ++k) grid.push_back(t0 + 0.5 * k);
  return grid;
}

Outcome criterion_epr_oracle() {
  Outcome o;
  std::string worst;
  for (const auto& m : epr_models()) {
    const SpectralResult exact = ground_state(m.h);
    EprConfig c;
    c.samples = 1000000;
    c.seed = 1;
    const auto t0 = std::chrono::steady_clock::now();
    const GroundEnergyEstimate g = estimate_ground_energy(m.h, 0, fit_grid(exact), c);
    const double secs = seconds_since(t0);
    const double z = (g.energy - exact.energy) / g.std_error;
    const bool ok = std::abs(z) <= 3.0 && g.std_error <= 0.05 && secs <= 300.0;
    o.pass = o.pass && ok;
    o.detail += fmt::format("{}{} z={:+.2f} sigma={:.1e} {:.1f}s", o.detail.empty() ? "" : "; ",
                            m.name, z, g.std_error, secs);
  }
  return o;
}

Outcome criterion_mode_equivalence() {
  Outcome o;
  for (const auto& m : epr_models()) {
    // A unit horizon: with rho above every eta the uniform-clock weights
    // spread like e^{(rho A - R) t} and turn heavy-tailed at long times.
    const double t = 1.0;
    double max_eta = 0.0;
    for (StateId n = 0; n < m.h.dimension(); ++n) {
      for (double e : m.h.etas(n)) max_eta = std::max(max_eta, e);
    }
    EprConfig c;
    c.samples = 1000000;
    c.seed = 2;
    const EprEstimate a = estimate_propagator_sum(m.h, 0, t, c);
    c.mode = SamplingMode::uniform(1.5 * max_eta);
    c.seed = 3;
    const EprEstimate b = estimate_propagator_sum(m.h, 0, t, c);
    // Compare on the log scale so large horizons do not overflow.
    const double da = a.std_error / std::abs(a.mean), db = b.std_error / std::abs(b.mean);
    const double z = (a.log_mean - b.log_mean) / std::hypot(da, db);
    o.pass = o.pass && std::abs(z) <= 3.0;
    o.detail += fmt::format("{}{} z={:+.2f}", o.detail.empty() ? "" : "; ", m.name, z);
  }
  return o;
}

// ---------------------------------------------------------------------------
// 3: Markov identities

Hamiltonian random_graph(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(0.1, 3.0), u(0.0, 1.0);
  const std::size_t m = 3 + rng() % 60;
  std::vector<double> v(m);
  for (double& x : v) x = 2.0 * u(rng) - 1.0;
  std::vector<LinkSpec> links;
  std::vector<std::pair<StateId, StateId>> seen;
  auto add = [&](StateId a, StateId b) {
    if (a == b) return;
    if (a > b) std::swap(a, b);
    if (std::find(seen.begin(), seen.end(), std::pair{a, b}) != seen.end()) return;
    seen.emplace_back(a, b);
    links.push_back({a, b, u(rng) < 0.3 ? w(rng) : -w(rng)});
  };
  for (StateId n = 1; n < m; ++n) add(n, static_cast<StateId>(rng() % n));
  for (std::size_t e = 0; e < m; ++e) add(static_cast<StateId>(rng() % m), static_cast<StateId>(rng() % m));
  return Hamiltonian::build(m, 1.0, std::move(v), links);
}

Outcome criterion_markov() {
  std::vector<Hamiltonian> instances;
  for (std::uint64_t s = 0; s < 40; ++s) instances.push_back(random_graph(s));
  for (int n = 3; n <= 8; ++n) instances.push_back(hypercube_free(n, 0.5 + 0.1 * n));
  const LevelPoint d[] = {{0.0, 0.25}, {1.0, 0.75}};
  for (std::uint64_t s = 0; s < 6; ++s) {
    instances.push_back(random_potential_model(std::size_t{1} << (4 + s), d, KineticSpec::hypercube(1.0), s));
    instances.push_back(qrem(4 + static_cast<int>(s), 1.0, 1.0, s));
  }
  for (std::uint64_t s = 0; s < 4; ++s) {
    instances.push_back(random_potential_model(20 + 10 * s, d, KineticSpec::complete_graph(0.2), s));
  }

  double worst_residual = 0.0;
  std::size_t bound_failures = 0, partitions = 0;
  std::mt19937_64 rng(11);
  for (const auto& h : instances) {
    const auto pi = invariant_measure(h);
    worst_residual = std::max(worst_residual, stationarity_residual(transition_kernel(h), pi));
    const auto r = h.weighted_degrees();
    const double rmin = *std::min_element(r.begin(), r.end());
    const double m = static_cast<double>(h.dimension());
    for (StateId n = 0; n < h.dimension(); ++n) {
      if (pi[n] * m * rmin > r[n] * (1.0 + 1e-12)) ++bound_failures;
    }
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<StateId> ids;
      for (StateId n = 0; n < h.dimension(); ++n) {
        if (rng() % 4 == 0) ids.push_back(n);
      }
      if (ids.empty()) ids.push_back(0);
      if (ids.size() == h.dimension()) ids.pop_back();
      const Partition p = make_partition(h, ids);
      double rmax_cav = 0.0;
      for (StateId n : p.cavity) rmax_cav = std::max(rmax_cav, r[n]);
      if (p.pibar > rmax_cav / rmin * p.pbar * (1.0 + 1e-12)) ++bound_failures;
      ++partitions;
    }
  }
  Outcome o;
  o.pass = instances.size() >= 50 && worst_residual <= 1e-12 && bound_failures == 0;
  o.detail = fmt::format("{} instances, {} partitions, max residual {:.2e}, bound violations {}",
                         instances.size(), partitions, worst_residual, bound_failures);
  return o;
}

// ---------------------------------------------------------------------------
// 4: RPM analytic consistency

Outcome criterion_rpm() {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_gap = 0.0, worst_residual = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double v1 = 4.0 * u(rng) - 2.0;
    const double v2 = v1 + 0.01 + 3.0 * u(rng);
    const double p1 = 0.001 + 0.998 * u(rng);
    const double e0 = -(0.01 + 3.0 * u(rng));
    RpmSpec s;
    s.levels = {v1, v2};
    s.weights = {p1, 1.0 - p1};
    s.e0free = e0;
    const double e = solve_e1f(s);
    worst_gap = std::max(worst_gap, std::abs(e - two_level_closed_form(v1, v2, p1, e0)));
    worst_residual = std::max(worst_residual, e1f_residual(s, e));
  }
  bool monotone = true;
  std::string trend;
  for (double e0 : {-0.5, -2.0}) {
    double last = std::numeric_limits<double>::infinity();
    for (double p1 : {1e-2, 1e-4, 1e-6}) {
      RpmSpec s;
      s.levels = {0.0, 1.0};
      s.weights = {p1, 1.0 - p1};
      s.e0free = e0;
      const double dev = std::abs(solve_e1f(s) - two_level_dilute_limit(0.0, 1.0, e0));
      monotone = monotone && dev < last;
      last = dev;
      trend += fmt::format("{}{:.1e}", trend.empty() || trend.back() == ' ' ? "" : ",", dev);
    }
    trend += e0 == -0.5 ? " and " : "";
  }
  Outcome o;
  o.pass = worst_gap <= 1e-10 && worst_residual <= 1e-10 && monotone;
  o.detail = fmt::format("max |closed - root| {:.1e}, max residual {:.1e}, dilute deviations {}",
                         worst_gap, worst_residual, trend);
  return o;
}

// ---------------------------------------------------------------------------
// 5: large-N density against exact diagonalization

Outcome criterion_rpm_vs_exact() {
  const double gamma = 1.0;
  const LevelPoint d[] = {{0.0, 0.3}, {1.0, 0.7}};
  std::vector<double> medians;
  std::string detail;
  for (int n : {8, 10, 12}) {
    std::vector<double> dev;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto h = random_potential_model(std::size_t{1} << n, d, KineticSpec::hypercube(gamma), seed);
      const double e = solve_e1f(empirical_spec(h, -gamma));
      dev.push_back(std::abs(e - ground_state(h).energy / n));
    }
    medians.push_back(median(dev));
    detail += fmt::format("{}M=2^{}: {:.4f}", detail.empty() ? "" : ", ", n, medians.back());
  }
  Outcome o;
  o.pass = medians[1] < medians[0] && medians[2] < medians[1] && medians[2] <= 0.05;
  o.detail = "median |e - E/N| " + detail;
  return o;
}

// ---------------------------------------------------------------------------
// 6, 7: two-level transition

Outcome criterion_qpt_crossing() {
  const double v1 = 0.0, v2 = 1.0, gc = v2 - v1;
  std::size_t checks = 0, failures = 0;
  double worst = 0.0;
  std::string worst_at;
  for (int n = 8; n <= 14; ++n) {
    for (double g = 0.4; g <= 1.601; g += 0.1) {
      if (std::abs(g - gc) < 0.2 - 1e-9) continue;
      const TwoLevelModel m = two_level_rpm(n, g, v1, v2);
      const double e = ground_state(m.hamiltonian).energy / n;
      const double band = 5.0 * n * g * std::ldexp(1.0, -n);
      const double ratio = std::abs(e - std::min(v1, v2 - g)) / band;
      ++checks;
      if (ratio > 1.0) ++failures;
      if (ratio > worst) worst = ratio, worst_at = fmt::format("N={} gamma={:.1f}", n, g);
    }
  }
  std::size_t overlap_failures = 0;
  double min_overlap = 1.0;
  for (double g = 0.4; g <= gc - 0.3 + 1e-9; g += 0.1) {
    const SpectralResult r = ground_state(two_level_rpm(12, g, v1, v2).hamiltonian);
    const double w = r.ground_vector[0] * r.ground_vector[0];
    min_overlap = std::min(min_overlap, w);
    if (w < 0.9) ++overlap_failures;
  }
  Outcome o;
  o.pass = failures == 0 && overlap_failures == 0;
  o.detail = fmt::format(
      "band violations {}/{} (worst deviation/band {:.3g} at {}); N=12 cavity overlap min {:.4f}",
      failures, checks, worst, worst_at, min_overlap);
  return o;
}

Outcome criterion_critical_law() {
  const double v1 = 0.0, v2 = 1.0, gc = v2 - v1;
  std::vector<double> ratio;
  std::string detail;
  for (int n : {10, 12, 14}) {
    const TwoLevelModel m = two_level_rpm(n, gc, v1, v2);
    const double e = ground_state(m.hamiltonian).energy;
    const CavityCouplingReport k = coupling_report(m.hamiltonian, m.partition);
    ratio.push_back((e - n * v1) / (m.partition.pibar * k.kout_simple));
    detail += fmt::format("{}N={}: {:.4g}", detail.empty() ? "" : ", ", n, ratio.back());
  }
  bool ok = true;
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    ok = ok && ratio[i] >= 0.5 && ratio[i] <= 2.0;
    if (i > 0) ok = ok && std::abs(ratio[i] - 1.0) <= std::abs(ratio[i - 1] - 1.0);
  }
  return {ok, "(E - V1)/(pibar K_out) " + detail};
}

// ---------------------------------------------------------------------------
// 8, 9: exit times and the exit balance

struct CavityCase {
  std::string name;
  Hamiltonian h;
  std::vector<StateId> cavity;
};

std::vector<CavityCase> lemma_cases() {
  std::vector<CavityCase> out;
  out.push_back({"single", two_level_rpm(4, 1.0, 0.0, 1.0).hamiltonian, {0}});
  {
    const LinkSpec l[] = {{0, 1, -1.0}, {1, 2, -1.0}, {2, 3, -1.0}};
    out.push_back({"pair", Hamiltonian::build(4, 1.0, {0.0, 0.2, 1.0, 1.0}, l), {0, 1}});
  }
  {
    const LevelPoint d[] = {{0.0, 0.5}, {0.5, 0.5}};
    out.push_back({"four", random_potential_model(16, d, KineticSpec::hypercube(1.0), 3), {0, 1, 3, 7}});
  }
  return out;
}

Hamiltonian leaky_chain() {
  // cavity 0-1-2-3, weak leak from 3 into the reservoir 4-5
  const LinkSpec l[] = {{0, 1, -1.0}, {1, 2, -1.0}, {2, 3, -1.0}, {3, 4, -0.3}, {4, 5, -1.0}};
  return Hamiltonian::build(6, 1.0, {0, 0, 0, 0, 1, 1}, l);
}

Outcome criterion_exit_law() {
  Outcome o;
  ExitRunConfig run;
  run.samples = 100000;
  run.seed = 1;

  const TwoLevelModel single = two_level_rpm(6, 1.0, 0.0, 1.0);
  const double r0 = single.hamiltonian.weighted_degree(0);
  const ExitRateFit f1 = fit_exit_tail(sample_exit_times(single.hamiltonian, single.partition, 0, run), 0.0);
  const double dev1 = std::abs(f1.rate / r0 - 1.0);

  const Hamiltonian chain = leaky_chain();
  const StateId ids[] = {0, 1, 2, 3};
  const Partition p4 = make_partition(chain, ids);
  const ExitRateResult star = exit_rate_hamiltonian(chain, p4);
  const ExitRateFit f4 = fit_exit_tail(sample_exit_times(chain, p4, 0, run),
                                       3.0 / (star.e_star_gap - star.e_star));
  const double dev4 = std::abs(f4.rate / star.e_star - 1.0);

  std::size_t partitions = 0, star_failures = 0;
  auto check_star = [&](const Hamiltonian& h, const Partition& p) {
    ++partitions;
    try {
      const ExitRateResult x = exit_rate_hamiltonian(h, p);
      if (!(std::abs(x.e_star_star) <= 1e-10 * x.star_norm) || !(x.e_star > 0.0)) ++star_failures;
    } catch (const Error&) {
      ++star_failures;
    }
  };
  check_star(single.hamiltonian, single.partition);
  check_star(chain, p4);
  for (const auto& c : lemma_cases()) check_star(c.h, make_partition(c.h, c.cavity));
  for (int n = 3; n <= 8; ++n) {
    const auto h = hypercube_free(n, 1.0);
    const StateId face[] = {0, 1, 2, 3};
    check_star(h, make_partition(h, face));
  }

  o.pass = dev1 <= 0.02 && dev4 <= 0.05 && star_failures == 0;
  o.detail = fmt::format(
      "single-state rate {:.4f} vs R {:.4f} ({:.2f}%); 4-state tail {:.5f} vs E* {:.5f} ({:.2f}%, "
      "{} tail events); E**=0 and E*>0 on {}/{} partitions",
      f1.rate, r0, 100 * dev1, f4.rate, star.e_star, 100 * dev4, f4.tail_events,
      partitions - star_failures, partitions);
  return o;
}

Outcome criterion_lemma() {
  Outcome o;
  EprConfig c;
  c.samples = 200000;
  c.seed = 1;
  for (const auto& k : lemma_cases()) {
    const Partition p = make_partition(k.h, k.cavity);
    for (double t : {0.5, 1.0, 2.0}) {
      const LemmaCheck r = check_exit_lemma(k.h, p, k.cavity.front(), t, c);
      const double z = (r.lhs - r.rhs) / r.lhs_error;
      o.pass = o.pass && std::abs(z) <= 3.0;
      o.detail += fmt::format("{}{}@{}: z={:+.2f}", o.detail.empty() ? "" : ", ", k.name, t, z);
    }
  }
  return o;
}

// ---------------------------------------------------------------------------
// 10: byte-identical CLI reruns

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "eprqpt_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string base = (dir / "out").string();
  const std::vector<std::vector<std::string>> runs = {
      {"exact", "--family", "qrem", "--N", "8", "--seed", "5"},
      {"epr", "--family", "random-potential", "--N", "6", "--samples", "20000", "--workers", "2",
       "--t-grid", "1:3:5"},
      {"epr", "--family", "two-level", "--N", "5", "--samples", "20000", "--mode", "uniform:1.5"},
      {"partition", "--family", "random-potential", "--N", "8", "--p1", "0.2", "--seed", "9"},
      {"rpm", "--levels", "0:0.2,0.5:0.3,1:0.5", "--gamma", "0.7"},
      {"scan", "--family", "two-level", "--N", "6", "--param", "gamma", "--range", "0.5:1.5",
       "--steps", "4", "--analyses", "exact,partition,epr", "--samples", "5000"},
      {"exit", "--family", "two-level", "--N", "6", "--cavity", "0,1,3", "--samples", "20000",
       "--tail-start", "0.2"},
      {"lemma", "--family", "two-level", "--N", "4", "--samples", "20000", "--t", "1.5"},
  };
  std::size_t identical = 0;
  std::vector<std::string> differing;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    std::vector<std::string> produced[2];
    for (int rep = 0; rep < 2; ++rep) {
      std::vector<std::string> args = runs[k];
      const std::string out = fmt::format("{}{}", base, k);
      for (const char* suffix : {"", ".json", ".hist.csv"}) fs::remove(out + suffix);
      args.insert(args.end(), {"--out", out});
      std::ostringstream so, se;
      const int code = cli::run(args, so, se);
      produced[rep].push_back(std::to_string(code));
      produced[rep].push_back(so.str());
      for (const char* suffix : {"", ".json", ".hist.csv"}) {
        if (fs::exists(out + suffix)) produced[rep].push_back(slurp(out + suffix));
      }
    }
    if (produced[0] == produced[1] && produced[0][0] == "0") {
      ++identical;
    } else {
      differing.push_back(runs[k][0]);
    }
  }
  fs::remove_all(dir);
  Outcome o;
  o.pass = identical == runs.size();
  o.detail = fmt::format("{}/{} runs byte-identical", identical, runs.size());
  for (const auto& d : differing) o.detail += " differs: " + d;
  return o;
}

// ---------------------------------------------------------------------------
// 11: QREM transition point

Outcome criterion_qrem() {
  const int n = 14;
  const std::uint64_t seed = 1;
  auto crossing_gap = [&](double gamma) {
    const Hamiltonian h = qrem(n, gamma, 1.0, seed);
    const Partition p = cavity_from_level(h, 1);
    const PartitionEnergies e = partition_energies(h, p);
    return (e.reservoir_energy - e.cavity_energy) / n;
  };
  // Sweep, then interpolate linearly inside the bracketing interval.
  double lo = 0.05, f_lo = crossing_gap(lo), found = std::nan("");
  for (double g = 0.1; g <= 3.0 + 1e-9; g += 0.05) {
    const double f = crossing_gap(g);
    if ((f_lo > 0.0) != (f > 0.0)) {
      found = lo + (g - lo) * f_lo / (f_lo - f);
      break;
    }
    lo = g;
    f_lo = f;
  }
  const Hamiltonian h = qrem(n, 1.0, 1.0, seed);
  const double predicted = -dilute_critical_e0(empirical_spec(h, -1.0));
  Outcome o;
  o.pass = std::isfinite(found) && std::abs(found - predicted) <= 0.1;
  o.detail = fmt::format("N={} seed {}: sweep crossing gamma={:.4f}, dilute prediction {:.4f}, "
                         "|difference| {:.4f}",
                         n, seed, found, predicted, std::abs(found - predicted));
  return o;
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "EPR matches exact ground energies", criterion_epr_oracle},
      {2, "link-rate and uniform clocks agree", criterion_mode_equivalence},
      {3, "Markov identities and bounds", criterion_markov},
      {4, "RPM root, closed form and dilute limit", criterion_rpm},
      {5, "RPM density approaches exact diagonalization", criterion_rpm_vs_exact},
      {6, "two-level crossing and frozen overlap", criterion_qpt_crossing},
      {7, "finite-size law at criticality", criterion_critical_law},
      {8, "exit-time law", criterion_exit_law},
      {9, "exit balance Monte Carlo vs quadrature", criterion_lemma},
      {10, "byte-identical CLI reruns", criterion_determinism},
      {11, "QREM transition point", criterion_qrem},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(criteria().size())) {
      fmt::print(stderr, "usage: acceptance [1..{}]\n", criteria().size());
      return 2;
    }
  }
  bool all_pass = true;
  for (const auto& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("raised ") + e.what()};
    }
    fmt::print("criterion {:>2} {} {}: {} [{:.1f}s]\n", c.id, o.pass ? "PASS" : "FAIL", c.title,
               o.detail, seconds_since(t0));
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
