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

#include "swipesim/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace swipesim::io {

namespace {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json series(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

Json record_json(const PowerRecord& r) { return {{"tx_dbm", series(r.tx_dbm)}, {"rx_dbm", series(r.rx_dbm)}}; }

}  // namespace

std::string to_hex(const Bytes& b) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    s.reserve(2 * b.size());
    for (auto c : b) {
        s.push_back(kDigits[c >> 4]);
        s.push_back(kDigits[c & 0xf]);
    }
    return s;
}

Json to_json(const detect::ValleyReport& r) {
    Json j{{"found", r.found}};
    if (!r.found) {
        j["reason"] = r.reason;
        return j;
    }
    j["start_idx"] = r.start_idx;
    j["end_idx"] = r.end_idx;
    j["valley_idx"] = r.valley_idx;
    j["depth_db"] = num(r.depth_db);
    j["peak_level_db"] = num(r.peak_level_db);
    j["valley_level_db"] = num(r.valley_level_db);
    j["width_s"] = num(r.width_s);
    j["model"] = {{"baseline_db", num(r.model.baseline)},
                  {"depth_db", num(r.model.depth)},
                  {"center_idx", num(r.model.center)},
                  {"width_samples", num(r.model.width)}};
    return j;
}

Json to_json(const detect::VariationReport& r) {
    Json j{{"residual_std_db", num(r.residual_std_db)},
           {"threshold_db", num(r.threshold_db)},
           {"pass", r.pass},
           {"samples", r.samples}};
    if (!r.reason.empty()) j["reason"] = r.reason;
    return j;
}

Json to_json(const protocol::AuthResult& r) {
    return {{"accepted", r.accepted},
            {"failed_check", protocol::to_string(r.failed_check)},
            {"valley", to_json(r.valley)},
            {"valley_pass", r.valley_pass},
            {"variation_fwd", to_json(r.fwd)},
            {"variation_rev", to_json(r.rev)},
            {"variation_pooled", to_json(r.pooled)},
            {"variation_pass", r.variation_pass},
            {"decision_std_db", num(r.decision_std_db)}};
}

Json to_json(const protocol::Transcript& t) {
    Json j;
    j["schema_version"] = protocol::Transcript::kSchemaVersion;
    j["probe"] = {{"n", t.probe.n},
                  {"rate_hz", num(t.probe.rate_hz)},
                  {"tx_range_dbm", {num(t.probe.tx_lo_dbm), num(t.probe.tx_hi_dbm)}}};
    j["attacker"] = t.attacker;

    Json probes = Json::array();
    const std::size_t n = t.a_record.n();
    for (std::size_t i = 0; i < n && i < t.b_record.n() && i < t.times_s.size(); ++i) {
        Json p{{"i", i + 1},
               {"t", num(t.times_s[i])},
               {"a_tx", num(t.a_record.tx_dbm[i])},
               {"a_rx", num(t.a_record.rx_dbm[i])},
               {"b_tx", num(t.b_record.tx_dbm[i])},
               {"b_rx", num(t.b_record.rx_dbm[i])}};
        if (t.claimed_to_a && i < t.claimed_to_a->n()) {
            p["m_to_a_tx"] = num(t.claimed_to_a->tx_dbm[i]);
            p["m_to_a_rx"] = num(t.claimed_to_a->rx_dbm[i]);
        }
        if (t.claimed_to_b && i < t.claimed_to_b->n()) {
            p["m_to_b_tx"] = num(t.claimed_to_b->tx_dbm[i]);
            p["m_to_b_rx"] = num(t.claimed_to_b->rx_dbm[i]);
        }
        probes.push_back(std::move(p));
    }
    j["probes"] = std::move(probes);

    j["keys"] = {{"curve", "P-256"}, {"a_public", to_hex(t.a_public)}, {"b_public", to_hex(t.b_public)}};
    if (!t.m_public.empty()) j["keys"]["m_public"] = to_hex(t.m_public);

    Json frames = Json::array();
    for (const auto& f : t.frames)
        frames.push_back({{"phase", f.phase}, {"from", f.from}, {"to", f.to}, {"frame", to_hex(f.frame)}});
    j["interlock"] = std::move(frames);
    j["received"] = {{"a", record_json(t.a_received)}, {"b", record_json(t.b_received)}};
    return j;
}

Json to_json(const protocol::PairingOutcome& o) {
    Json j{{"accepted", o.accepted}, {"failed_check", protocol::to_string(o.failed_check)}};
    if (!o.detail.empty()) j["detail"] = o.detail;
    if (o.auth_a) j["device_a"] = to_json(*o.auth_a);
    if (o.auth_b) j["device_b"] = to_json(*o.auth_b);
    j["transcript"] = to_json(o.transcript);
    return j;
}

Json to_json(const harness::Summary& s) {
    return {{"n_runs", s.n_runs},
            {"accept_rate", num(s.accept_rate)},
            {"valley_found_rate", num(s.valley_found_rate)},
            {"valley_pass_rate", num(s.valley_pass_rate)},
            {"variation_pass_rate", num(s.variation_pass_rate)},
            {"mean_residual_std_db", num(s.mean_residual_std_db)},
            {"mean_depth_db", num(s.mean_depth_db)},
            {"mean_width_s", num(s.mean_width_s)},
            {"mean_true_residual_std_fwd", num(s.mean_true_residual_std_fwd)}};
}

Json to_json(const std::vector<harness::RocPoint>& curve) {
    Json a = Json::array();
    for (const auto& p : curve) a.push_back({{"threshold_db", num(p.threshold_db)}, {"fpr", p.fpr}, {"tpr", p.tpr}});
    return a;
}

Json to_json(const harness::RocStudy& s) {
    return {{"environment", s.environment},
            {"attacker_distance_m", num(s.attacker_distance_m)},
            {"polarity", "positive = attack detected; fpr = legitimate runs rejected"},
            {"auc", num(s.auc)},
            {"meets_target", s.meets_target},
            {"legit_summary", to_json(s.legit_summary)},
            {"attack_summary", to_json(s.attack_summary)},
            {"curve", to_json(s.curve)}};
}

Json to_json(const harness::Calibration& c) {
    return {{"feasible", c.feasible},
            {"threshold_db", num(c.threshold_db)},
            {"fpr", c.fpr},
            {"tpr", c.tpr},
            {"interval_db", {num(c.interval_lo), num(c.interval_hi)}}};
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    for (int prec = 6; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string metrics_csv(const std::vector<harness::RunMetrics>& runs) {
    std::string out =
        "seed,accepted,failed_check,residual_std_fwd,residual_std_rev,depth_db,width_s,run_index,valley_found,"
        "valley_pass,variation_pass,decision_std_db,peak_level_db,valley_level_db,true_residual_std_fwd\n";
    for (const auto& r : runs) {
        out += std::to_string(r.seed) + ',' + (r.accepted ? "1" : "0") + ',' +
               std::string(protocol::to_string(r.failed_check)) + ',' + format_double(r.residual_std_fwd) + ',' +
               format_double(r.residual_std_rev) + ',' + format_double(r.depth_db) + ',' +
               format_double(r.width_s) + ',' + std::to_string(r.run_index) + ',' + (r.valley_found ? "1" : "0") +
               ',' + (r.valley_pass ? "1" : "0") + ',' + (r.variation_pass ? "1" : "0") + ',' +
               format_double(r.decision_std_db) + ',' + format_double(r.peak_level_db) + ',' +
               format_double(r.valley_level_db) + ',' + format_double(r.true_residual_std_fwd) + '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
    if (!f) throw std::runtime_error("failed writing " + path);
}

}  // namespace swipesim::io
