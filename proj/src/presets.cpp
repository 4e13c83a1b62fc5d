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

#include <vector>

#include "swipesim/errors.hpp"
#include "swipesim/harness.hpp"

namespace swipesim::harness {

namespace {

EnvironmentPreset make(std::string_view name, double min_attacker_distance_m) {
    EnvironmentPreset p;
    p.channel = chan::environment_channel(name);
    p.min_attacker_distance_m = min_attacker_distance_m;
    return p;
}

}  // namespace

const EnvironmentPreset& environment_preset(std::string_view name) {
    static const std::vector<EnvironmentPreset> presets{
        make("office", 2.0),
        make("lobby", 3.0),
        make("dining", 3.0),
    };
    for (const auto& p : presets)
        if (p.channel.name == name) return p;
    throw ConfigError("unknown environment preset '" + std::string(name) + "'", "environment");
}

}  // namespace swipesim::harness
