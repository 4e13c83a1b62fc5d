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
#include <vector>

#include <json.hpp>

#include "swipesim/harness.hpp"
#include "swipesim/protocol.hpp"

/// JSON and CSV renderings. Output is a pure function of the input values, so
/// equal runs give byte-identical files. Non-finite numbers become null.
namespace swipesim::io {

using Json = nlohmann::ordered_json;

inline constexpr int kTranscriptSchemaVersion = protocol::Transcript::kSchemaVersion;

std::string to_hex(const Bytes& b);

Json to_json(const detect::ValleyReport& r);
Json to_json(const detect::VariationReport& r);
Json to_json(const protocol::AuthResult& r);
/// Schema v1: {"schema_version", "probe": {...}, "attacker", "probes": [{"i",
/// "t", "a_tx", "a_rx", "b_tx", "b_rx", ...}], "keys": {...}, "interlock":
/// [{"phase", "from", "to", "frame"}], "received": {...}}
Json to_json(const protocol::Transcript& t);
/// Verdict, failed check, both devices' reports and the transcript.
Json to_json(const protocol::PairingOutcome& o);
Json to_json(const harness::Summary& s);
Json to_json(const std::vector<harness::RocPoint>& curve);
Json to_json(const harness::RocStudy& s);
Json to_json(const harness::Calibration& c);

/// Header: seed,accepted,failed_check,residual_std_fwd,residual_std_rev,
/// depth_db,width_s, then run_index,valley_found,valley_pass,variation_pass,
/// decision_std_db,peak_level_db,valley_level_db,true_residual_std_fwd.
std::string metrics_csv(const std::vector<harness::RunMetrics>& runs);

/// Shortest text that reads back to the same double; "nan"/"inf" for
/// non-finite values.
std::string format_double(double v);

/// Writes `text` to `path`, creating parent directories. Throws
/// std::runtime_error on failure.
void write_file(const std::string& path, const std::string& text);

}  // namespace swipesim::io
