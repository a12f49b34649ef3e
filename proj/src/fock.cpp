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

#include "eprqpt/fock.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <tuple>

#include "eprqpt/error.hpp"

namespace eprqpt {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::kIsolatedState: return "IsolatedState";
    case ErrorCode::kDuplicateLink: return "DuplicateLink";
    case ErrorCode::kDiagonalKinetic: return "DiagonalKinetic";
    case ErrorCode::kEmptyCavity: return "EmptyCavity";
    case ErrorCode::kEmptyReservoir: return "EmptyReservoir";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kInvalidMode: return "InvalidMode";
    case ErrorCode::kNonFiniteWeight: return "NonFiniteWeight";
    case ErrorCode::kSignCollapse: return "SignCollapse";
    case ErrorCode::kNonStoquasticRegion: return "NonStoquasticRegion";
    case ErrorCode::kTruncationNotConverged: return "TruncationNotConverged";
    case ErrorCode::kBadDistribution: return "BadDistribution";
    case ErrorCode::kSizeLimit: return "SizeLimit";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

namespace {

// Breadth-first 2-coloring from `start`; returns the component size.
template <typename Adjacent>
std::size_t bfs_count(StateId start, Adjacent&& adjacent,
                      std::vector<int>& color, bool& bipartite) {
  std::deque<StateId> queue{start};
  color[start] = 0;
  std::size_t seen = 1;
  while (!queue.empty()) {
    const StateId n = queue.front();
    queue.pop_front();
    adjacent(n, [&](StateId m) {
      if (color[m] < 0) {
        color[m] = 1 - color[n];
        ++seen;
        queue.push_back(m);
      } else if (color[m] == color[n]) {
        bipartite = false;
      }
    });
  }
  return seen;
}

}  // namespace

Hamiltonian Hamiltonian::build(std::size_t dimension, double size_parameter,
                               std::vector<double> potential,
                               std::span<const LinkSpec> links,
                               Validation validation) {
  if (dimension == 0) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 1");
  if (validation == Validation::kErgodic && dimension < 2) {
    throw Error(ErrorCode::kInvalidArgument, "an ergodic Hamiltonian needs M >= 2");
  }
  if (dimension > std::size_t{1} << 30) {
    throw Error(ErrorCode::kSizeLimit, "dimension exceeds 2^30 states");
  }
  if (potential.size() != dimension) {
    throw Error(ErrorCode::kInvalidArgument,
                "potential has " + std::to_string(potential.size()) +
                    " entries, expected " + std::to_string(dimension));
  }
  if (!(size_parameter > 0.0) || !std::isfinite(size_parameter)) {
    throw Error(ErrorCode::kInvalidArgument, "size parameter N must be positive");
  }
  for (double v : potential) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite potential");
  }

  // Canonicalize to (min, max) pairs, detect duplicates.
  struct Entry {
    StateId a, b;
    double value;
  };
  std::vector<Entry> entries;
  entries.reserve(links.size());
  for (const LinkSpec& l : links) {
    if (l.i >= dimension || l.j >= dimension) {
      throw Error(ErrorCode::kInvalidArgument,
                  "link (" + std::to_string(l.i) + ", " + std::to_string(l.j) +
                      ") out of range");
    }
    if (l.i == l.j) {
      throw Error(ErrorCode::kDiagonalKinetic,
                  "kinetic entry on the diagonal at state " + std::to_string(l.i));
    }
    if (!(l.value != 0.0) || !std::isfinite(l.value)) {
      throw Error(ErrorCode::kInvalidArgument, "link values must be finite and nonzero");
    }
    entries.push_back({std::min(l.i, l.j), std::max(l.i, l.j), l.value});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  for (std::size_t k = 1; k < entries.size(); ++k) {
    if (entries[k].a == entries[k - 1].a && entries[k].b == entries[k - 1].b) {
      throw Error(ErrorCode::kDuplicateLink,
                  "pair (" + std::to_string(entries[k].a) + ", " +
                      std::to_string(entries[k].b) + ") given twice");
    }
  }

  Hamiltonian h;
  h.size_parameter_ = size_parameter;
  h.potential_ = std::move(potential);
  h.offsets_.assign(dimension + 1, 0);
  for (const Entry& e : entries) {
    ++h.offsets_[e.a + 1];
    ++h.offsets_[e.b + 1];
  }
  std::partial_sum(h.offsets_.begin(), h.offsets_.end(), h.offsets_.begin());
  const std::size_t nnz = h.offsets_.back();
  h.cols_.resize(nnz);
  h.eta_.resize(nnz);
  h.lambda_.resize(nnz);
  h.kvalue_.resize(nnz);
  std::vector<StateId> fill(h.offsets_.begin(), h.offsets_.end() - 1);
  auto put = [&](StateId row, StateId col, double value) {
    const StateId k = fill[row]++;
    h.cols_[k] = col;
    h.eta_[k] = std::abs(value);
    h.lambda_[k] = value < 0.0 ? std::int8_t{1} : std::int8_t{-1};
    h.kvalue_[k] = value;
  };
  for (const Entry& e : entries) {
    put(e.a, e.b, e.value);
    put(e.b, e.a, e.value);
  }
  // Rows are filled out of column order; sort each one.
  for (StateId row = 0; row < dimension; ++row) {
    const std::size_t base = h.offsets_[row];
    const std::size_t len = h.offsets_[row + 1] - base;
    if (std::is_sorted(h.cols_.begin() + static_cast<std::ptrdiff_t>(base),
                       h.cols_.begin() + static_cast<std::ptrdiff_t>(base + len))) {
      continue;
    }
    std::vector<std::size_t> order(len);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return h.cols_[base + x] < h.cols_[base + y];
    });
    auto permute = [&](auto& vec) {
      using T = typename std::decay_t<decltype(vec)>::value_type;
      std::vector<T> tmp(len);
      for (std::size_t k = 0; k < len; ++k) tmp[k] = vec[base + order[k]];
      std::copy(tmp.begin(), tmp.end(), vec.begin() + static_cast<std::ptrdiff_t>(base));
    };
    permute(h.cols_);
    permute(h.eta_);
    permute(h.lambda_);
    permute(h.kvalue_);
  }

  h.weighted_degree_.assign(dimension, 0.0);
  for (StateId n = 0; n < dimension; ++n) {
    double r = 0.0;
    for (double eta : h.etas(n)) r += eta;
    h.weighted_degree_[n] = r;
    if (h.active_links(n) == 0) h.isolated_.push_back(n);
    h.norm_bound_ = std::max(h.norm_bound_, std::abs(h.potential_[n]) + r);
  }
  h.stoquastic_ = std::all_of(h.lambda_.begin(), h.lambda_.end(),
                              [](std::int8_t l) { return l == 1; });

  std::vector<int> color(dimension, -1);
  bool bipartite = true;
  std::size_t components = 0;
  for (StateId start = 0; start < dimension; ++start) {
    if (color[start] >= 0) continue;
    ++components;
    bfs_count(start,
              [&](StateId n, auto&& visit) {
                for (StateId m : h.neighbors(n)) visit(m);
              },
              color, bipartite);
  }
  h.connected_ = components == 1;
  h.bipartite_ = bipartite && dimension > 1;

  if (validation == Validation::kErgodic) {
    if (!h.isolated_.empty()) {
      throw Error(ErrorCode::kIsolatedState,
                  "state " + std::to_string(h.isolated_.front()) + " has no active link");
    }
    if (!h.connected_) {
      throw Error(ErrorCode::kDisconnectedGraph,
                  "kinetic graph has " + std::to_string(components) + " components");
    }
    if (h.bipartite_) {
      h.warnings_.emplace_back(
          "kinetic graph is bipartite: the embedded jump chain is periodic");
    }
  }
  return h;
}

double Hamiltonian::kinetic(StateId n, StateId m) const noexcept {
  const auto nb = neighbors(n);
  const auto it = std::lower_bound(nb.begin(), nb.end(), m);
  if (it == nb.end() || *it != m) return 0.0;
  return kvalue_[offsets_[n] + static_cast<std::size_t>(it - nb.begin())];
}

std::vector<LinkSpec> Hamiltonian::links() const {
  std::vector<LinkSpec> out;
  out.reserve(link_count());
  for (StateId n = 0; n < dimension(); ++n) {
    const auto nb = neighbors(n);
    const auto kv = kinetic_row(n);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (nb[k] > n) out.push_back({n, nb[k], kv[k]});
    }
  }
  return out;
}

double TransitionKernel::operator()(StateId n, StateId m) const noexcept {
  const auto begin = cols.begin() + offsets[n];
  const auto end = cols.begin() + offsets[n + 1];
  const auto it = std::lower_bound(begin, end, m);
  if (it == end || *it != m) return 0.0;
  return probabilities[static_cast<std::size_t>(it - cols.begin())];
}

TransitionKernel transition_kernel(const Hamiltonian& h) {
  TransitionKernel p;
  const std::size_t m = h.dimension();
  p.offsets.resize(m + 1);
  p.offsets[0] = 0;
  for (StateId n = 0; n < m; ++n) {
    const auto nb = h.neighbors(n);
    const auto eta = h.etas(n);
    const double r = h.weighted_degree(n);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      p.cols.push_back(nb[k]);
      p.probabilities.push_back(r > 0.0 ? eta[k] / r : 0.0);
    }
    p.offsets[n + 1] = static_cast<StateId>(p.cols.size());
  }
  return p;
}

double stationarity_residual(const TransitionKernel& p, std::span<const double> pi) {
  std::vector<double> lhs(p.dimension(), 0.0);
  for (StateId n = 0; n < p.dimension(); ++n) {
    const auto row = p.row(n);
    for (std::size_t k = 0; k < row.size(); ++k) {
      lhs[p.cols[p.offsets[n] + k]] += pi[n] * row[k];
    }
  }
  double worst = 0.0;
  for (std::size_t n = 0; n < lhs.size(); ++n) {
    worst = std::max(worst, std::abs(lhs[n] - pi[n]));
  }
  return worst;
}

std::vector<double> invariant_measure(const Hamiltonian& h) {
  const auto r = h.weighted_degrees();
  const double total = std::accumulate(r.begin(), r.end(), 0.0);
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kIsolatedState, "no active links: invariant measure undefined");
  }
  std::vector<double> pi(r.size());
  for (std::size_t n = 0; n < r.size(); ++n) pi[n] = r[n] / total;

  const double residual = stationarity_residual(transition_kernel(h), pi);
  if (residual > 1e-12) {
    throw Error(ErrorCode::kInvariantViolation,
                "stationarity residual " + std::to_string(residual));
  }
  const double r_min = *std::min_element(r.begin(), r.end());
  const double m = static_cast<double>(r.size());
  for (std::size_t n = 0; n < r.size(); ++n) {
    if (pi[n] * m * r_min > r[n] * (1.0 + 1e-12)) {
      throw Error(ErrorCode::kInvariantViolation,
                  "pointwise bound violated at state " + std::to_string(n));
    }
  }
  return pi;
}

LevelDensity level_density(const Hamiltonian& h) {
  const auto v = h.potential();
  std::vector<StateId> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](StateId a, StateId b) { return v[a] < v[b]; });

  LevelDensity d;
  d.level_of_state.assign(v.size(), 0);
  std::vector<std::size_t> counts;
  for (StateId n : order) {
    if (d.levels.empty() || v[n] - d.levels.back() > kLevelMergeTolerance) {
      d.levels.push_back(v[n]);
      counts.push_back(0);
    }
    ++counts.back();
    d.level_of_state[n] = static_cast<std::uint32_t>(d.levels.size() - 1);
  }
  const double m = static_cast<double>(v.size());
  d.weights.reserve(counts.size());
  for (std::size_t c : counts) d.weights.push_back(static_cast<double>(c) / m);
  return d;
}

double Partition::cavity_out_weight() const noexcept {
  double s = 0.0;
  for (StateId n : cavity) s += r_out[n];
  return s;
}

namespace {

bool induced_connected(const Hamiltonian& h, std::span<const StateId> ids,
                       const std::vector<std::uint8_t>& mask, std::uint8_t side) {
  if (ids.empty()) return false;
  std::vector<int> color(h.dimension(), -1);
  bool bip = true;
  const std::size_t seen = bfs_count(
      ids.front(),
      [&](StateId n, auto&& visit) {
        for (StateId m : h.neighbors(n)) {
          if (mask[m] == side) visit(m);
        }
      },
      color, bip);
  return seen == ids.size();
}

}  // namespace

Partition make_partition(const Hamiltonian& h, std::span<const StateId> cavity_ids) {
  const std::size_t m = h.dimension();
  if (cavity_ids.empty()) throw Error(ErrorCode::kEmptyCavity, "cavity has no states");
  Partition p;
  p.in_cavity.assign(m, 0);
  for (StateId n : cavity_ids) {
    if (n >= m) {
      throw Error(ErrorCode::kInvalidArgument, "cavity id " + std::to_string(n) + " out of range");
    }
    if (p.in_cavity[n]) {
      throw Error(ErrorCode::kInvalidArgument, "cavity id " + std::to_string(n) + " repeated");
    }
    p.in_cavity[n] = 1;
  }
  if (cavity_ids.size() == m) {
    throw Error(ErrorCode::kEmptyReservoir, "cavity covers the whole space");
  }

  p.a_in.assign(m, 0);
  p.a_out.assign(m, 0);
  p.r_in.assign(m, 0.0);
  p.r_out.assign(m, 0.0);
  p.r_out_plus.assign(m, 0.0);
  p.r_out_minus.assign(m, 0.0);
  double cavity_r = 0.0;
  double total_r = 0.0;
  for (StateId n = 0; n < m; ++n) {
    (p.in_cavity[n] ? p.cavity : p.reservoir).push_back(n);
    const auto nb = h.neighbors(n);
    const auto eta = h.etas(n);
    const auto sg = h.signs(n);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (p.in_cavity[nb[k]] == p.in_cavity[n]) {
        ++p.a_in[n];
        p.r_in[n] += eta[k];
      } else {
        ++p.a_out[n];
        p.r_out[n] += eta[k];
        (sg[k] > 0 ? p.r_out_plus[n] : p.r_out_minus[n]) += eta[k];
      }
    }
    if (p.a_out[n] > 0) {
      (p.in_cavity[n] ? p.cavity_boundary : p.reservoir_boundary).push_back(n);
    }
    total_r += h.weighted_degree(n);
    if (p.in_cavity[n]) cavity_r += h.weighted_degree(n);
  }
  p.pbar = static_cast<double>(p.cavity.size()) / static_cast<double>(m);
  p.pibar = total_r > 0.0 ? cavity_r / total_r : 0.0;
  p.cavity_connected = induced_connected(h, p.cavity, p.in_cavity, 1);
  p.reservoir_connected = induced_connected(h, p.reservoir, p.in_cavity, 0);
  return p;
}

Partition cavity_from_level(const Hamiltonian& h, std::size_t level) {
  const LevelDensity d = level_density(h);
  if (level < 1 || level > d.levels.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "level " + std::to_string(level) + " outside 1.." +
                    std::to_string(d.levels.size()));
  }
  std::vector<StateId> ids;
  for (StateId n = 0; n < h.dimension(); ++n) {
    if (d.level_of_state[n] == level - 1) ids.push_back(n);
  }
  if (ids.size() == h.dimension()) {
    throw Error(ErrorCode::kEmptyReservoir, "level covers every state");
  }
  return make_partition(h, ids);
}

namespace {

Restriction restrict_impl(const Hamiltonian& h, std::span<const StateId> ids,
                          IsolatedPolicy policy, const std::vector<double>* diag_override,
                          bool force_stoquastic) {
  if (ids.empty()) throw Error(ErrorCode::kInvalidArgument, "empty restriction");
  std::vector<StateId> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kInvalidArgument, "restriction ids repeated");
  }
  if (sorted.back() >= h.dimension()) {
    throw Error(ErrorCode::kInvalidArgument, "restriction id out of range");
  }
  constexpr StateId kAbsent = ~StateId{0};
  std::vector<StateId> local(h.dimension(), kAbsent);
  for (std::size_t k = 0; k < sorted.size(); ++k) local[sorted[k]] = static_cast<StateId>(k);

  std::vector<double> potential(sorted.size());
  std::vector<LinkSpec> links;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const StateId n = sorted[k];
    potential[k] = diag_override ? (*diag_override)[k] : h.potential(n);
    const auto nb = h.neighbors(n);
    const auto kv = h.kinetic_row(n);
    const auto eta = h.etas(n);
    for (std::size_t j = 0; j < nb.size(); ++j) {
      if (nb[j] > n && local[nb[j]] != kAbsent) {
        links.push_back({static_cast<StateId>(k), local[nb[j]],
                         force_stoquastic ? -eta[j] : kv[j]});
      }
    }
  }
  Restriction out{Hamiltonian::build(sorted.size(), h.size_parameter(), std::move(potential),
                                     links, Validation::kRelaxed),
                  std::move(sorted),
                  {}};
  for (StateId k : out.hamiltonian.isolated_states()) out.isolated.push_back(out.ids[k]);
  if (policy == IsolatedPolicy::kThrow && out.ids.size() > 1 && !out.isolated.empty()) {
    throw Error(ErrorCode::kIsolatedState,
                "state " + std::to_string(out.isolated.front()) +
                    " has no link inside the restriction");
  }
  return out;
}

}  // namespace

Restriction restrict_to(const Hamiltonian& h, std::span<const StateId> ids,
                        IsolatedPolicy policy) {
  return restrict_impl(h, ids, policy, nullptr, false);
}

Restriction star_hamiltonian(const Hamiltonian& h, const Partition& p,
                             StarPotential potential) {
  std::vector<double> diag;
  diag.reserve(p.cavity.size());
  for (StateId n : p.cavity) {
    diag.push_back(potential == StarPotential::kTotalDegree ? h.weighted_degree(n) : p.r_in[n]);
  }
  return restrict_impl(h, p.cavity, IsolatedPolicy::kReport, &diag, true);
}

}  // namespace eprqpt
