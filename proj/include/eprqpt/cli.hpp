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

// Command-line front end. Subcommands: exact, epr, partition, rpm, scan,
// exit, lemma. Output files are produced only when every requested analysis
// succeeded, and carry the format version, the full run configuration and
// the build id.

#ifndef EPRQPT_CLI_HPP_
#define EPRQPT_CLI_HPP_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eprqpt/fock.hpp"
#include "eprqpt/models.hpp"

namespace eprqpt::cli {

inline constexpr int kOutputFormatVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // an analysis raised an error
inline constexpr int kExitUsage = 2;    // bad command line

std::string build_id();

struct RunConfig {
  std::string subcommand;
  std::string model_path;        // --model
  ModelSpec model;               // --family and parameters
  std::string cavity;            // --cavity selector, empty = model default
  std::string subspace = "full"; // exact: full | cavity | reservoir
  std::optional<StateId> start;  // --start
  double t = 1.0;
  std::vector<double> t_grid{1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string mode = "link";
  double tol = 1e-9;
  // rpm
  std::vector<LevelPoint> levels;
  std::optional<double> e0;
  // scan
  std::string param = "gamma";
  double range_lo = 0.2;
  double range_hi = 2.0;
  std::size_t steps = 10;
  std::vector<std::string> analyses{"exact", "partition"};
  // exit
  double t_max = 0.0;
  std::size_t bins = 50;
  std::optional<double> tail_start;
  std::string out;
};

/// "a:b:k" (k points from a to b inclusive) or "x,y,z".
std::vector<double> parse_grid(std::string_view text);
/// "v:w,v:w,..."
std::vector<LevelPoint> parse_levels(std::string_view text);
/// "level:L", "ids:i,j,..." or "i,j,...".
std::vector<StateId> parse_cavity(std::string_view text, const Hamiltonian& h);

/// Serialized RunConfig (stable key order).
std::string run_config_json(const RunConfig& config);

/// argv-style arguments without the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace eprqpt::cli

#endif  // EPRQPT_CLI_HPP_
