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

#include "eprqpt/model_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "eprqpt/error.hpp"

namespace eprqpt {

namespace {

using nlohmann::json;

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorCode::kParse, "model file: " + what);
}

void only_keys(const json& obj, std::initializer_list<std::string_view> allowed,
               const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      parse_error(fmt::format("unknown field '{}' in {}", key, where));
    }
  }
}

const json& required(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) parse_error(fmt::format("missing field '{}'", key));
  return *it;
}

double as_double(const json& j, const std::string& what) {
  if (!j.is_number()) parse_error(what + " must be a number");
  return j.get<double>();
}

std::uint64_t as_index(const json& j, const std::string& what) {
  if (!j.is_number_unsigned()) {
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::uint64_t>();
    parse_error(what + " must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::vector<StateId> parse_ids(const json& j, std::size_t m, const std::string& what) {
  if (!j.is_array()) parse_error(what + " must be an array");
  std::vector<StateId> out;
  for (const auto& x : j) {
    const std::uint64_t id = as_index(x, what + " entry");
    if (id >= m) parse_error(fmt::format("{} entry {} out of range", what, id));
    out.push_back(static_cast<StateId>(id));
  }
  return out;
}

ModelSpec parse_provenance(const json& root) {
  ModelSpec s;
  const json& family = required(root, "family");
  if (!family.is_string()) parse_error("'family' must be a string");
  s.family = parse_family(family.get_ref<const std::string&>());
  if (const auto it = root.find("parameters"); it != root.end()) {
    if (!it->is_object()) parse_error("'parameters' must be an object");
    for (const auto& [key, value] : it->items()) s.parameters[key] = as_double(value, key);
  }
  if (const auto it = root.find("seed"); it != root.end()) s.seed = as_index(*it, "seed");
  if (const auto it = root.find("levels"); it != root.end()) {
    if (!it->is_array()) parse_error("'levels' must be an array");
    for (const auto& lp : *it) {
      if (!lp.is_array() || lp.size() != 2) parse_error("'levels' entries are [value, weight]");
      s.levels.push_back({as_double(lp[0], "level value"), as_double(lp[1], "level weight")});
    }
  }
  return s;
}

std::string number(double x) { return json(x).dump(); }

}  // namespace

ModelFile parse_model(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    parse_error(e.what());
  }
  if (!root.is_object()) parse_error("top level must be an object");
  only_keys(root,
            {"format_version", "M", "N", "potential", "kinetic", "cavity", "family", "parameters",
             "seed", "levels"},
            "model");

  const json& version = required(root, "format_version");
  if (!version.is_number_integer() || version.get<int>() != kModelFormatVersion) {
    parse_error(fmt::format("unsupported format_version {}", version.dump()));
  }
  const std::uint64_t m = as_index(required(root, "M"), "M");
  if (m < 2 || m > (std::uint64_t{1} << 24)) parse_error("M must lie in [2, 2^24]");
  const double n = as_double(required(root, "N"), "N");
  if (!(n > 0.0) || !std::isfinite(n)) parse_error("N must be finite and > 0");

  const json& pot = required(root, "potential");
  if (!pot.is_array() || pot.size() != m) parse_error("'potential' must be an array of M numbers");
  std::vector<double> v;
  v.reserve(m);
  for (const auto& x : pot) v.push_back(as_double(x, "potential entry"));

  const json& kin = required(root, "kinetic");
  if (!kin.is_array()) parse_error("'kinetic' must be an array");
  std::vector<LinkSpec> links;
  links.reserve(kin.size());
  for (const auto& t : kin) {
    if (!t.is_array() || t.size() != 3) parse_error("'kinetic' entries are [i, j, value]");
    const std::uint64_t i = as_index(t[0], "link i");
    const std::uint64_t j = as_index(t[1], "link j");
    if (!(i < j)) parse_error(fmt::format("link ({}, {}) must have i < j", i, j));
    if (j >= m) parse_error(fmt::format("link ({}, {}) out of range", i, j));
    links.push_back({static_cast<StateId>(i), static_cast<StateId>(j), as_double(t[2], "link value")});
  }

  ModelFile out{Hamiltonian::build(m, n, std::move(v), links), {}, std::nullopt, {}};
  if (const auto it = root.find("cavity"); it != root.end()) {
    out.cavity = parse_ids(*it, m, "cavity");
    std::sort(out.cavity.begin(), out.cavity.end());
  }
  if (root.contains("family")) {
    out.provenance = parse_provenance(root);
  } else if (root.contains("parameters") || root.contains("seed") || root.contains("levels")) {
    parse_error("'parameters', 'seed' and 'levels' need a 'family'");
  }

  const Extensivity e = extensivity(out.hamiltonian);
  if (e.potential_density > kExtensivityWarnLimit || e.rate_density > kExtensivityWarnLimit) {
    out.warnings.push_back(fmt::format(
        "model is not extensive in N: max|V|/N = {:.4g}, max R/N = {:.4g}", e.potential_density,
        e.rate_density));
  }
  for (const auto& w : out.hamiltonian.warnings()) out.warnings.push_back(w);
  return out;
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open model file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string serialize_model(const Hamiltonian& h, std::span<const StateId> cavity,
                            const ModelSpec* provenance) {
  std::string s = "{\n";
  s += fmt::format("  \"format_version\": {},\n", kModelFormatVersion);
  s += fmt::format("  \"M\": {},\n  \"N\": {},\n", h.dimension(), number(h.size_parameter()));
  if (provenance != nullptr) {
    s += fmt::format("  \"family\": \"{}\",\n", family_name(provenance->family));
    json params = json::object();
    for (const auto& [k, v] : provenance->parameters) params[k] = v;
    s += fmt::format("  \"parameters\": {},\n", params.dump());
    s += fmt::format("  \"seed\": {},\n", provenance->seed);
    if (!provenance->levels.empty()) {
      s += "  \"levels\": [";
      for (std::size_t l = 0; l < provenance->levels.size(); ++l) {
        s += fmt::format("{}[{}, {}]", l ? ", " : "", number(provenance->levels[l].value),
                         number(provenance->levels[l].weight));
      }
      s += "],\n";
    }
  }
  if (!cavity.empty()) {
    s += "  \"cavity\": [";
    for (std::size_t k = 0; k < cavity.size(); ++k) s += fmt::format("{}{}", k ? ", " : "", cavity[k]);
    s += "],\n";
  }
  s += "  \"potential\": [";
  const auto v = h.potential();
  for (std::size_t k = 0; k < v.size(); ++k) {
    s += (k ? (k % 8 == 0 ? ",\n    " : ", ") : "");
    s += number(v[k]);
  }
  s += "],\n  \"kinetic\": [";
  const auto links = h.links();
  for (std::size_t k = 0; k < links.size(); ++k) {
    s += fmt::format("{}\n    [{}, {}, {}]", k ? "," : "", links[k].i, links[k].j,
                     number(links[k].value));
  }
  s += links.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return s;
}

void save_model(const std::string& path, const Hamiltonian& h, std::span<const StateId> cavity,
                const ModelSpec* provenance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write model file " + path);
  out << serialize_model(h, cavity, provenance);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "write failed for " + path);
}

}  // namespace eprqpt
