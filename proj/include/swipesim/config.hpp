// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "swipesim/harness.hpp"

/// Scenario configuration files (JSON) and dotted-path overrides.
namespace swipesim::config {

using Json = nlohmann::json;

/// Applies "a.b.c=value" to `doc`, creating objects along the path. The value
/// is parsed as JSON when possible (numbers, booleans, null, arrays) and taken
/// as a string otherwise. Throws ConfigError on a malformed override.
void apply_override(Json& doc, std::string_view assignment);

/// Builds a validated scenario. Unknown keys and type mismatches throw
/// ConfigError naming the dotted key.
harness::ScenarioConfig parse_scenario(const Json& doc);

/// Reads `path` (empty path = all defaults), applies overrides in order (last
/// one wins), then parses.
harness::ScenarioConfig load_scenario(const std::string& path, const std::vector<std::string>& overrides = {});

/// Parsed JSON of a file; throws ConfigError on I/O or syntax errors.
Json read_json_file(const std::string& path);

/// Canonical form of a scenario; parse_scenario(scenario_to_json(c)) == c.
Json scenario_to_json(const harness::ScenarioConfig& c);

}  // namespace swipesim::config
