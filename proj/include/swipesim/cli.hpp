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

#include <iosfwd>
#include <string>
#include <vector>

#include "swipesim/protocol.hpp"

/// Command-line front end. Exit codes: 0 success or accepted pairing,
/// 1 rejected pairing or infeasible calibration, 2 configuration or input
/// error.
namespace swipesim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;
inline constexpr int kExitConfig = 2;

/// Entry point; diagnostics go to `err`, results to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Parses a "time_s,pathloss_db" CSV. Throws ConfigError whose key names the
/// offending row ("row 7") on malformed input, or "trace" when empty.
protocol::PathlossSeries read_trace_csv(const std::string& path);

}  // namespace swipesim::cli
