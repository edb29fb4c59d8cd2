// Copyright 2026 The oqs Authors
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

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "oqs/core.hpp"
#include "oqs/models.hpp"

namespace oqs {

using json = nlohmann::json;

/// Parse an observable expression over the named operators of a built model.
/// Grammar: sums and differences of products of factors; a factor is a real number, a name,
/// a site-indexed name "sz[2]" (0-based), "I", or a parenthesised expression.
Operator parse_observable(const std::string& expr, const BuiltModel& model);

json operator_to_json(const Operator& op);
Operator operator_from_json(const json& j);

/// Shortest round-trippable text for a double (17 significant digits).
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::string to_string() const;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t h);

}  // namespace oqs
