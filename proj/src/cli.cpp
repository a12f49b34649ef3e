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

#include "eprqpt/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <ostream>

#include "eprqpt/epr.hpp"
#include "eprqpt/error.hpp"
#include "eprqpt/model_io.hpp"
#include "eprqpt/rpm.hpp"
#include "eprqpt/spectral.hpp"

#ifndef EPRQPT_BUILD_ID
#define EPRQPT_BUILD_ID "unknown"
#endif

namespace eprqpt::cli {

using Json = nlohmann::ordered_json;

std::string build_id() { return EPRQPT_BUILD_ID; }

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

double to_double(std::string_view s) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x)) {
    throw Error(ErrorCode::kParse, fmt::format("'{}' is not a number", s));
  }
  return x;
}

std::uint64_t to_index(std::string_view s) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kParse, fmt::format("'{}' is not a non-negative integer", s));
  }
  return x;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw Error(ErrorCode::kParse, "grid range is start:stop:count");
    const double a = to_double(parts[0]);
    const double b = to_double(parts[1]);
    const std::uint64_t k = to_index(parts[2]);
    if (k < 1) throw Error(ErrorCode::kParse, "grid count must be >= 1");
    for (std::uint64_t i = 0; i < k; ++i) {
      out.push_back(k == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(k - 1));
    }
  } else {
    for (auto p : split(text, ',')) out.push_back(to_double(p));
  }
  return out;
}

std::vector<LevelPoint> parse_levels(std::string_view text) {
  std::vector<LevelPoint> out;
  for (auto p : split(text, ',')) {
    const auto vw = split(p, ':');
    if (vw.size() != 2) throw Error(ErrorCode::kParse, "levels are value:weight pairs");
    out.push_back({to_double(vw[0]), to_double(vw[1])});
  }
  return out;
}

std::vector<StateId> parse_cavity(std::string_view text, const Hamiltonian& h) {
  text = trim(text);
  std::vector<StateId> out;
  if (text.starts_with("level:")) {
    const std::uint64_t level = to_index(text.substr(6));
    const LevelDensity d = level_density(h);
    if (level < 1 || level > d.levels.size()) {
      throw Error(ErrorCode::kInvalidArgument, fmt::format("level {} out of range", level));
    }
    for (StateId n = 0; n < h.dimension(); ++n) {
      if (d.level_of_state[n] == level - 1) out.push_back(n);
    }
    return out;
  }
  if (text.starts_with("ids:")) text.remove_prefix(4);
  for (auto p : split(text, ',')) {
    const std::uint64_t id = to_index(p);
    if (id >= h.dimension()) {
      throw Error(ErrorCode::kInvalidArgument, fmt::format("cavity state {} out of range", id));
    }
    out.push_back(static_cast<StateId>(id));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

Json model_json(const RunConfig& c) {
  Json m;
  if (!c.model_path.empty()) {
    m["source"] = "file";
    m["path"] = c.model_path;
    return m;
  }
  m["family"] = std::string(family_name(c.model.family));
  Json p = Json::object();
  for (const auto& [k, v] : c.model.parameters) p[k] = v;
  m["parameters"] = p;
  Json levels = Json::array();
  for (const auto& lp : c.model.levels) levels.push_back({lp.value, lp.weight});
  m["levels"] = levels;
  m["seed"] = c.model.seed;
  return m;
}

Json config_json(const RunConfig& c) {
  Json j;
  j["subcommand"] = c.subcommand;
  j["model"] = model_json(c);
  j["cavity"] = c.cavity;
  j["subspace"] = c.subspace;
  j["start"] = c.start ? Json(*c.start) : Json(nullptr);
  j["t"] = c.t;
  j["t_grid"] = c.t_grid;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["mode"] = c.mode;
  j["tol"] = c.tol;
  Json levels = Json::array();
  for (const auto& lp : c.levels) levels.push_back({lp.value, lp.weight});
  j["levels"] = levels;
  j["e0"] = c.e0 ? Json(*c.e0) : Json(nullptr);
  j["param"] = c.param;
  j["range"] = {c.range_lo, c.range_hi};
  j["steps"] = c.steps;
  j["analyses"] = c.analyses;
  j["t_max"] = c.t_max;
  j["bins"] = c.bins;
  j["tail_start"] = c.tail_start ? Json(*c.tail_start) : Json(nullptr);
  j["out"] = c.out;
  return j;
}

}  // namespace

std::string run_config_json(const RunConfig& config) { return config_json(config).dump(); }

namespace {

// Files are staged in memory and written only after every analysis succeeded.
struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;

  void add(std::string path, std::string content) {
    files.emplace_back(std::move(path), std::move(content));
  }

  void commit() const {
    for (const auto& [path, content] : files) {
      const std::string tmp = path + ".partial";
      {
        std::ofstream f(tmp, std::ios::binary);
        f << content;
        if (!f) throw Error(ErrorCode::kInvalidArgument, "cannot write " + tmp);
      }
      std::filesystem::rename(tmp, path);
    }
  }
};

Json envelope(const RunConfig& c, Json result) {
  Json j;
  j["format_version"] = kOutputFormatVersion;
  j["build_id"] = build_id();
  j["run_config"] = config_json(c);
  j["result"] = std::move(result);
  return j;
}

std::string comment_header(const RunConfig& c) {
  return fmt::format("# eprqpt {}\n# format_version: {}\n# build_id: {}\n# run_config: {}\n",
                     c.subcommand, kOutputFormatVersion, build_id(), run_config_json(c));
}

ModelSpec effective_spec(const RunConfig& c) {
  ModelSpec s = c.model;
  if (!c.model_path.empty()) {
    s.family = Family::kFromFile;
    s.path = c.model_path;
  }
  return s;
}

struct Loaded {
  BuiltModel model;
  std::vector<StateId> cavity;
};

Loaded load(const RunConfig& c, const ModelSpec& spec) {
  Loaded l{build_model(spec), {}};
  if (spec.family != Family::kFromFile) {
    for (const auto& w : l.model.hamiltonian.warnings()) l.model.warnings.push_back(w);
  }
  l.cavity = c.cavity.empty() ? l.model.cavity : parse_cavity(c.cavity, l.model.hamiltonian);
  return l;
}

Json spectral_json(const SpectralResult& r, double size) {
  Json j;
  j["E"] = r.energy;
  j["E1"] = std::isfinite(r.gap_energy) ? Json(r.gap_energy) : Json(nullptr);
  j["E_per_N"] = r.energy / size;
  j["residual"] = r.residual;
  j["degenerate"] = r.degenerate;
  return j;
}

Json cmd_exact(const RunConfig& c) {
  const Loaded l = load(c, effective_spec(c));
  const Hamiltonian& h = l.model.hamiltonian;
  Json j;
  j["M"] = h.dimension();
  j["N"] = h.size_parameter();
  j["subspace"] = c.subspace;
  std::vector<std::string> warnings = l.model.warnings;
  if (c.subspace == "full") {
    const SpectralResult r = ground_state(h);
    if (r.degenerate) warnings.push_back("ground state is degenerate within tolerance");
    j["spectrum"] = spectral_json(r, h.size_parameter());
    j["warnings"] = warnings;
    return j;
  }
  const Partition p = make_partition(h, l.cavity);
  if (c.subspace != "cavity" && c.subspace != "reservoir") {
    throw Error(ErrorCode::kInvalidArgument, "subspace is full, cavity or reservoir");
  }
  const auto& ids = c.subspace == "cavity" ? p.cavity : p.reservoir;
  const Restriction r = restrict_to(h, ids);
  j["dimension"] = ids.size();
  const SpectralResult s = ground_state(r.hamiltonian);
  if (s.degenerate) warnings.push_back("ground state is degenerate within tolerance");
  if (!r.isolated.empty()) {
    warnings.push_back(fmt::format("{} states are isolated in the subspace", r.isolated.size()));
  }
  j["spectrum"] = spectral_json(s, h.size_parameter());
  j["warnings"] = warnings;
  return j;
}

StateId start_state(const RunConfig& c, const Loaded& l, bool in_cavity) {
  if (c.start) return *c.start;
  return in_cavity ? l.cavity.front() : 0;
}

Json cmd_epr(const RunConfig& c) {
  const Loaded l = load(c, effective_spec(c));
  const Hamiltonian& h = l.model.hamiltonian;
  EprConfig e{c.samples, c.seed, c.workers, parse_mode(c.mode, h)};
  const StateId start = start_state(c, l, false);
  const GroundEnergyEstimate g = estimate_ground_energy(h, start, c.t_grid, e);
  Json j;
  j["start"] = start;
  j["mode"] = mode_name(e.mode);
  Json pts = Json::array();
  for (const auto& p : g.series.points) {
    Json q;
    q["t"] = p.time;
    q["mean"] = p.mean;
    q["std_error"] = p.std_error;
    q["log_mean"] = p.log_mean;
    q["mean_sign"] = p.mean_sign;
    pts.push_back(q);
  }
  j["points"] = pts;
  j["E"] = g.energy;
  j["E_err"] = g.std_error;
  j["E_per_N"] = g.energy / h.size_parameter();
  j["curvature"] = g.curvature;
  j["curvature_error"] = g.curvature_error;
  j["curvature_warning"] = g.curvature_warning;
  std::vector<std::string> warnings = l.model.warnings;
  if (g.curvature_warning) {
    warnings.push_back("-log mean is curved over the t grid: excited states have not decayed");
  }
  j["warnings"] = warnings;
  return j;
}

Json cmd_partition(const RunConfig& c) {
  const Loaded l = load(c, effective_spec(c));
  const Hamiltonian& h = l.model.hamiltonian;
  const Partition p = make_partition(h, l.cavity);
  const PartitionEnergies e = partition_energies(h, p);
  const CavityCouplingReport k = coupling_report(h, p, e);
  const ExitRateResult x = exit_rate_hamiltonian(h, p);
  const TheoremPrediction t = theorem_prediction(e.reservoir_energy, e.cavity_energy,
                                                 h.size_parameter(), c.tol);
  Json j;
  j["cavity_size"] = p.cavity.size();
  j["cavity_connected"] = p.cavity_connected;
  j["reservoir_connected"] = p.reservoir_connected;
  j["pbar"] = p.pbar;
  j["pibar"] = p.pibar;
  j["E_tilde"] = e.reservoir_energy;
  j["E_bar"] = e.cavity_energy;
  j["E1_tilde"] = std::isfinite(e.reservoir_gap_energy) ? Json(e.reservoir_gap_energy) : Json(nullptr);
  j["E1_bar"] = std::isfinite(e.cavity_gap_energy) ? Json(e.cavity_gap_energy) : Json(nullptr);
  j["kout_simple"] = k.kout_simple;
  j["kout_boundary"] = k.kout_boundary;
  j["E_star"] = x.e_star;
  j["E_star_star"] = x.e_star_star;
  j["e_tilde"] = t.reservoir_density;
  j["e_bar"] = t.cavity_density;
  j["e_predicted"] = t.energy_density;
  j["phase"] = std::string(phase_name(t.phase));
  j["finite_size_prediction"] = finite_size_prediction(e.cavity_energy, p.pibar, k.kout_simple);
  j["warnings"] = l.model.warnings;
  return j;
}

RpmSpec rpm_spec(const RunConfig& c) {
  RpmSpec s;
  std::vector<LevelPoint> lv = c.levels;
  if (lv.empty()) {
    const double p1 = c.model.get("p1", 0.5);
    lv = {{c.model.get("v1", 0.0), p1}, {c.model.get("v2", 1.0), 1.0 - p1}};
  }
  std::sort(lv.begin(), lv.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  for (const auto& p : lv) {
    s.levels.push_back(p.value);
    s.weights.push_back(p.weight);
  }
  s.e0free = c.e0 ? *c.e0 : -c.model.get("gamma", 1.0);
  s.validate();
  return s;
}

Json cmd_rpm(const RunConfig& c) {
  const RpmSpec s = rpm_spec(c);
  const double e = solve_e1f(s);
  Json j;
  j["levels"] = s.levels;
  j["weights"] = s.weights;
  j["e0"] = s.e0free;
  j["e"] = e;
  j["residual"] = e1f_residual(s, e);
  if (s.levels.size() == 2) {
    j["e_closed_form"] = two_level_closed_form(s.levels[0], s.levels[1], s.weights[0], s.e0free);
    j["e_dilute_limit"] = two_level_dilute_limit(s.levels[0], s.levels[1], s.e0free);
  }
  if (s.levels.size() >= 2) {
    const CriticalCondition cc = critical_condition(s, c.tol);
    const DilutePhase d = predict_phase_dilute(s, c.tol);
    j["W"] = cc.w;
    j["inverse_e0"] = cc.target;
    j["critical"] = cc.critical;
    j["e_tilde"] = d.e_tilde;
    j["e_predicted"] = d.energy;
    j["phase"] = std::string(phase_name(d.phase));
    j["critical_e0"] = dilute_critical_e0(s);
  }
  return j;
}

void report_warnings(const Json& j, std::ostream& err) {
  if (!j.contains("warnings")) return;
  for (const auto& w : j["warnings"]) err << "warning: " << w.get<std::string>() << "\n";
}

std::string csv_number(double x) { return std::isfinite(x) ? fmt::format("{}", x) : ""; }

std::string cmd_scan(const RunConfig& c, Json& summary) {
  const bool want_exact = std::count(c.analyses.begin(), c.analyses.end(), "exact") > 0;
  const bool want_part = std::count(c.analyses.begin(), c.analyses.end(), "partition") > 0;
  const bool want_epr = std::count(c.analyses.begin(), c.analyses.end(), "epr") > 0;
  for (const auto& a : c.analyses) {
    if (a != "exact" && a != "partition" && a != "epr") {
      throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown analysis '{}'", a));
    }
  }
  if (c.steps < 1) throw Error(ErrorCode::kInvalidArgument, "steps must be >= 1");

  std::vector<std::string> warnings;
  std::string csv = comment_header(c);
  csv += "param,E_exact,E_exact/N,E_epr,E_epr_err,E_tilde,E_bar,pbar,pibar,kout_simple,e_predicted,phase\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < c.steps; ++i) {
    const double value =
        c.steps == 1 ? c.range_lo
                     : c.range_lo + (c.range_hi - c.range_lo) * static_cast<double>(i) /
                                        static_cast<double>(c.steps - 1);
    ModelSpec spec = effective_spec(c);
    spec.parameters[c.param] = value;
    const Loaded l = load(c, spec);
    const Hamiltonian& h = l.model.hamiltonian;
    const double n = h.size_parameter();
    for (const auto& w : l.model.warnings) {
      if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
    }

    double e_exact = nan, e_epr = nan, e_epr_err = nan, e_tilde = nan, e_bar = nan;
    double pbar = nan, pibar = nan, kout = nan, e_pred = nan;
    std::string phase;
    if (want_exact) {
      EigenOptions opt;
      opt.compute_gap = false;
      e_exact = ground_state(h, opt).energy;
    }
    if (want_part) {
      const Partition p = make_partition(h, l.cavity);
      const PartitionEnergies e = partition_energies(h, p);
      const CavityCouplingReport k = coupling_report(h, p, e);
      const TheoremPrediction t = theorem_prediction(e.reservoir_energy, e.cavity_energy, n, c.tol);
      e_tilde = e.reservoir_energy;
      e_bar = e.cavity_energy;
      pbar = p.pbar;
      pibar = p.pibar;
      kout = k.kout_simple;
      e_pred = t.energy_density;
      phase = std::string(phase_name(t.phase));
    }
    if (want_epr) {
      const EprConfig e{c.samples, c.seed, c.workers, parse_mode(c.mode, h)};
      const GroundEnergyEstimate g = estimate_ground_energy(h, c.start.value_or(0), c.t_grid, e);
      e_epr = g.energy;
      e_epr_err = g.std_error;
    }
    csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", csv_number(value),
                       csv_number(e_exact), csv_number(e_exact / n), csv_number(e_epr),
                       csv_number(e_epr_err), csv_number(e_tilde), csv_number(e_bar),
                       csv_number(pbar), csv_number(pibar), csv_number(kout), csv_number(e_pred),
                       phase);
  }
  summary["rows"] = c.steps;
  summary["columns"] = {"param", "E_exact", "E_exact/N", "E_epr", "E_epr_err", "E_tilde",
                        "E_bar", "pbar", "pibar", "kout_simple", "e_predicted", "phase"};
  summary["warnings"] = warnings;
  return csv;
}

Json cmd_exit(const RunConfig& c, std::string& histogram_csv) {
  const Loaded l = load(c, effective_spec(c));
  const Hamiltonian& h = l.model.hamiltonian;
  const Partition p = make_partition(h, l.cavity);
  const ExitRateResult x = exit_rate_hamiltonian(h, p);
  const StateId start = start_state(c, l, true);
  const double t_max = c.t_max > 0.0 ? c.t_max : default_exit_horizon(p);
  const auto samples = sample_exit_times(h, p, start, {c.samples, c.seed, c.workers, t_max});

  // Past a few relaxation times of the next cavity mode only E* survives.
  double tail = 0.0;
  if (c.tail_start) {
    tail = *c.tail_start;
  } else if (std::isfinite(x.e_star_gap) && x.e_star_gap > x.e_star) {
    tail = 3.0 / (x.e_star_gap - x.e_star);
  }
  const ExitRateFit fit = fit_exit_tail(samples, tail);
  const Histogram hist = exit_histogram(samples, c.bins, t_max);

  histogram_csv = comment_header(c) + "bin_lo,bin_hi,count,density\n";
  for (std::size_t b = 0; b < hist.counts.size(); ++b) {
    histogram_csv += fmt::format("{},{},{},{}\n", hist.edges[b], hist.edges[b + 1], hist.counts[b],
                                 hist.density[b]);
  }
  Json j;
  j["start"] = start;
  j["t_max"] = t_max;
  j["E_star"] = x.e_star;
  j["E1_star"] = std::isfinite(x.e_star_gap) ? Json(x.e_star_gap) : Json(nullptr);
  j["E_star_star"] = x.e_star_star;
  j["rate"] = fit.rate;
  j["rate_err"] = fit.std_error;
  j["tail_start"] = fit.tail_start;
  j["tail_events"] = fit.tail_events;
  j["censored"] = fit.censored;
  j["mean_tau"] = fit.mean_tau;
  j["relative_deviation"] = (fit.rate - x.e_star) / x.e_star;
  j["warnings"] = l.model.warnings;
  return j;
}

Json cmd_lemma(const RunConfig& c) {
  const Loaded l = load(c, effective_spec(c));
  const Hamiltonian& h = l.model.hamiltonian;
  const Partition p = make_partition(h, l.cavity);
  const StateId start = start_state(c, l, true);
  const EprConfig e{c.samples, c.seed, c.workers, SamplingMode::link_rate()};
  const LemmaCheck r = check_exit_lemma(h, p, start, c.t, e);
  Json j;
  j["start"] = start;
  j["t"] = c.t;
  j["lhs"] = r.lhs;
  j["lhs_err"] = r.lhs_error;
  j["rhs"] = r.rhs;
  j["exit_fraction"] = r.exit_fraction;
  j["agree"] = r.agree;
  j["warnings"] = l.model.warnings;
  return j;
}

void add_model_options(CLI::App* sub, RunConfig& c, std::map<std::string, double>& params,
                       std::string& family, std::string& levels, std::string& save_model) {
  sub->add_option("--model", c.model_path, "model file (JSON)");
  sub->add_option("--family", family, "hypercube | two-level | random-potential | qrem");
  for (const char* key : {"N", "gamma", "v1", "v2", "p1", "J"}) {
    sub->add_option(std::string("--") + key,
                    [&params, key](const CLI::results_t& r) {
                      params[key] = to_double(r.front());
                      return true;
                    },
                    std::string("model parameter ") + key);
  }
  sub->add_option("--levels", levels, "value:weight,... level distribution");
  sub->add_option("--seed", c.seed, "random seed (model and sampling)");
  sub->add_option("--cavity", c.cavity, "level:L | ids:i,j,... | i,j,...");
  sub->add_option("--out", c.out, "output file");
  sub->add_option("--tol", c.tol, "criticality tolerance");
  sub->add_option("--save-model", save_model, "also write the model file");
}

void fill_model(RunConfig& c, const std::map<std::string, double>& given, const std::string& family,
                const std::string& levels) {
  c.model.family = parse_family(family);
  c.model.seed = c.seed;
  if (!levels.empty()) {
    c.levels = parse_levels(levels);
    if (c.model.family == Family::kRandomPotential) c.model.levels = c.levels;
  }
  std::map<std::string, double> defaults{{"N", 8}, {"gamma", 1}, {"v1", 0},
                                         {"v2", 1}, {"p1", 0.5},  {"J", 1}};
  std::vector<std::string> keys;
  switch (c.model.family) {
    case Family::kHypercubeFree:
      keys = {"N", "gamma"};
      break;
    case Family::kTwoLevelRpm:
      keys = {"N", "gamma", "v1", "v2"};
      break;
    case Family::kRandomPotential:
      keys = c.model.levels.empty() ? std::vector<std::string>{"N", "gamma", "v1", "v2", "p1"}
                                    : std::vector<std::string>{"N", "gamma"};
      break;
    case Family::kQrem:
      keys = {"N", "gamma", "J"};
      break;
    case Family::kFromFile:
      break;
  }
  if (c.subcommand == "rpm") keys = {"gamma", "v1", "v2", "p1"};
  for (const auto& k : keys) {
    const auto it = given.find(k);
    c.model.parameters[k] = it != given.end() ? it->second : defaults[k];
  }
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  std::map<std::string, double> params;
  std::string family = "two-level";
  std::string levels;
  std::string grid;
  std::string range;
  std::string analyses;
  std::string save_model;
  std::uint64_t start = 0;

  CLI::App app{"Exact probabilistic representation and cavity analysis of lattice models"};
  app.require_subcommand(1);
  auto* exact = app.add_subcommand("exact", "ground and first excited energy");
  auto* epr = app.add_subcommand("epr", "Monte Carlo ground-energy estimate");
  auto* part = app.add_subcommand("partition", "cavity/reservoir analysis");
  auto* rpm = app.add_subcommand("rpm", "random potential model analytics");
  auto* scan = app.add_subcommand("scan", "parameter sweep to CSV");
  auto* exit = app.add_subcommand("exit", "first-exit times from the cavity");
  auto* lemma = app.add_subcommand("lemma", "exit balance check");

  for (auto* sub : {exact, epr, part, rpm, scan, exit, lemma}) {
    add_model_options(sub, c, params, family, levels, save_model);
  }
  exact->add_option("--subspace", c.subspace, "full | cavity | reservoir");
  rpm->add_option("--e0", c.e0, "free ground-energy density (< 0); default -gamma");
  for (auto* sub : {epr, scan}) {
    sub->add_option("--t-grid", grid, "start:stop:count or t1,t2,...");
    sub->add_option("--mode", c.mode, "link | uniform | uniform:rho");
  }
  for (auto* sub : {epr, scan, exit, lemma}) {
    sub->add_option("--samples", c.samples, "trajectories");
    sub->add_option("--workers", c.workers, "worker threads");
    sub->add_option("--start", start, "start state");
  }
  lemma->add_option("--t", c.t, "horizon");
  scan->add_option("--param", c.param, "swept parameter (N, gamma, v1, v2, p1, J)");
  scan->add_option("--range", range, "lo:hi");
  scan->add_option("--steps", c.steps, "number of values");
  scan->add_option("--analyses", analyses, "comma list of exact, partition, epr");
  exit->add_option("--t-max", c.t_max, "censoring horizon (default 50 / min R_out)");
  exit->add_option("--bins", c.bins, "histogram bins");
  exit->add_option("--tail-start", c.tail_start, "start of the fitted tail");

  std::vector<const char*> argv{"eprqpt"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    for (auto* sub : app.get_subcommands()) c.subcommand = sub->get_name();
    const CLI::App* chosen = app.get_subcommands().front();
    if (const auto* opt = chosen->get_option_no_throw("--start"); opt && opt->count() > 0) {
      c.start = static_cast<StateId>(start);
    }
    if (!grid.empty()) c.t_grid = parse_grid(grid);
    if (!range.empty()) {
      const auto r = parse_grid(range + ":2");
      c.range_lo = r[0];
      c.range_hi = r[1];
    }
    if (!analyses.empty()) {
      c.analyses.clear();
      for (auto a : split(analyses, ',')) c.analyses.emplace_back(a);
    }
    fill_model(c, params, c.model_path.empty() ? family : "file", levels);

    Outputs files;
    std::string text;
    if (c.subcommand == "scan") {
      Json summary;
      const std::string csv = cmd_scan(c, summary);
      report_warnings(summary, err);
      text = csv;
      if (!c.out.empty()) {
        files.add(c.out, csv);
        files.add(c.out + ".json", envelope(c, summary).dump(2) + "\n");
      }
    } else {
      Json result;
      std::string hist;
      if (c.subcommand == "exact") result = cmd_exact(c);
      if (c.subcommand == "epr") result = cmd_epr(c);
      if (c.subcommand == "partition") result = cmd_partition(c);
      if (c.subcommand == "rpm") result = cmd_rpm(c);
      if (c.subcommand == "exit") result = cmd_exit(c, hist);
      if (c.subcommand == "lemma") result = cmd_lemma(c);
      report_warnings(result, err);
      text = envelope(c, result).dump(2) + "\n";
      if (!c.out.empty()) {
        files.add(c.out, text);
        if (!hist.empty()) files.add(c.out + ".hist.csv", hist);
      }
    }
    if (!save_model.empty()) {
      const ModelSpec spec = effective_spec(c);
      const Loaded l = load(c, spec);
      files.add(save_model, serialize_model(l.model.hamiltonian, l.cavity,
                                            spec.family == Family::kFromFile ? nullptr : &spec));
    }
    files.commit();
    out << text;
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitFailure;
}

}  // namespace eprqpt::cli
