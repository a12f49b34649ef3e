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

// JSON model files; the grammar is in docs/model_format.md.

#ifndef EPRQPT_MODEL_IO_HPP_
#define EPRQPT_MODEL_IO_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eprqpt/fock.hpp"
#include "eprqpt/models.hpp"

namespace eprqpt {

inline constexpr int kModelFormatVersion = 1;

/// Warn when max |V| / N or max R / N exceeds this in a user file.
inline constexpr double kExtensivityWarnLimit = 100.0;

struct ModelFile {
  Hamiltonian hamiltonian;
  std::vector<StateId> cavity;        // empty when absent
  std::optional<ModelSpec> provenance;  // family, parameters, seed of a generated model
  std::vector<std::string> warnings;
};

/// Throws kParse for syntax, unknown fields, wrong types or versions, and the
/// fock-core errors for invalid Hamiltonians.
ModelFile parse_model(std::string_view text);
ModelFile load_model(const std::string& path);

/// Canonical text: links with i < j ascending, doubles in shortest
/// round-trip form. parse_model(serialize_model(h)) rebuilds h exactly.
std::string serialize_model(const Hamiltonian& h, std::span<const StateId> cavity = {},
                            const ModelSpec* provenance = nullptr);
void save_model(const std::string& path, const Hamiltonian& h,
                std::span<const StateId> cavity = {}, const ModelSpec* provenance = nullptr);

}  // namespace eprqpt

#endif  // EPRQPT_MODEL_IO_HPP_
