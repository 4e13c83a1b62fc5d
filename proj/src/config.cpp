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

#include "swipesim/config.hpp"

#include <algorithm>

#include <fstream>
#include <set>
#include <sstream>

#include "swipesim/errors.hpp"

namespace swipesim::config {

namespace {

/// Typed access to one JSON object that remembers which keys were used, so
/// leftovers can be reported as unknown.
class Section {
public:
    Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError("expected an object", path_.empty() ? "<root>" : path_);
    }

    std::string key(std::string_view k) const { return path_.empty() ? std::string(k) : path_ + "." + std::string(k); }

    const Json* find(std::string_view k) {
        const auto it = j_.find(std::string(k));
        if (it == j_.end()) return nullptr;
        seen_.insert(std::string(k));
        return &*it;
    }

    void get(std::string_view k, double& out) {
        if (const Json* v = find(k)) {
            if (!v->is_number()) throw ConfigError("expected a number", key(k));
            out = v->get<double>();
        }
    }
    void get(std::string_view k, std::size_t& out) {
        if (const Json* v = find(k)) {
            if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<long long>() < 0))
                throw ConfigError("expected a non-negative integer", key(k));
            out = v->get<std::size_t>();
        }
    }
    void get(std::string_view k, std::uint64_t& out, int) {
        if (const Json* v = find(k)) {
            if (!v->is_number_unsigned()) throw ConfigError("expected a non-negative integer", key(k));
            out = v->get<std::uint64_t>();
        }
    }
    void get(std::string_view k, bool& out) {
        if (const Json* v = find(k)) {
            if (!v->is_boolean()) throw ConfigError("expected true or false", key(k));
            out = v->get<bool>();
        }
    }
    void get(std::string_view k, std::string& out) {
        if (const Json* v = find(k)) {
            if (!v->is_string()) throw ConfigError("expected a string", key(k));
            out = v->get<std::string>();
        }
    }
    std::vector<double> numbers(std::string_view k, const Json& v, std::size_t expected) const {
        if (!v.is_array() || (expected && v.size() != expected))
            throw ConfigError(expected ? "expected an array of " + std::to_string(expected) + " numbers"
                                       : std::string("expected an array"),
                              key(k));
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError("expected numbers", key(k));
            out.push_back(e.get<double>());
        }
        return out;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError("unknown setting", key(it.key()));
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void parse_auth(Section& s, protocol::AuthParams& a) {
    if (const Json* d = s.find("detector")) {
        Section ds(*d, s.key("detector"));
        ds.get("lag", a.detector.lag);
        ds.get("threshold", a.detector.threshold);
        ds.get("influence", a.detector.influence);
        ds.get("smoothing_window", a.extent.smoothing_window);
        ds.get("cutoff_fraction", a.extent.cutoff_fraction);
        ds.get("max_iterations", a.extent.max_iterations);
        ds.finish();
    }
    if (const Json* g = s.find("gates")) {
        Section gs(*g, s.key("gates"));
        gs.get("min_depth_db", a.gates.min_depth_db);
        gs.get("max_valley_level_db", a.gates.max_valley_level_db);
        gs.get("min_peak_db", a.gates.min_peak_db);
        gs.get("max_peak_db", a.gates.max_peak_db);
        gs.get("min_width_s", a.gates.min_width_s);
        gs.get("max_width_s", a.gates.max_width_s);
        gs.finish();
    }
    s.get("variation_threshold_db", a.variation_threshold_db);
    std::string mode(protocol::to_string(a.mode));
    s.get("variation_mode", mode);
    try {
        a.mode = protocol::parse_variation_mode(mode);
    } catch (const ConfigError&) {
        throw ConfigError("expected 'both' or 'pooled'", s.key("variation_mode"));
    }
    s.get("min_variation_samples", a.min_variation_samples);
}

}  // namespace

void apply_override(Json& doc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigError("override must look like key=value", std::string(assignment));
    const std::string path(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));

    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    if (!doc.is_object()) doc = Json::object();
    Json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError("empty path segment in override", path);
        if (dot == std::string::npos) {
            (*node)[part] = std::move(value);
            return;
        }
        Json& next = (*node)[part];
        if (!next.is_object()) next = Json::object();
        node = &next;
        start = dot + 1;
    }
}

harness::ScenarioConfig parse_scenario(const Json& doc_in) {
    const Json doc = doc_in.is_null() ? Json::object() : doc_in;
    Section root(doc, "");

    std::string env = "office";
    root.get("environment", env);
    auto cfg = harness::ScenarioConfig::for_environment(env);

    root.get("seed", cfg.seed, 0);
    root.get("threads", cfg.threads);
    root.get("n_probes", cfg.probe.n);
    root.get("rate_hz", cfg.probe.rate_hz);
    if (const Json* tx = root.find("tx_range_dbm")) {
        const auto v = root.numbers("tx_range_dbm", *tx, 2);
        cfg.probe.tx_lo_dbm = v[0];
        cfg.probe.tx_hi_dbm = v[1];
    }
    root.get("randomization_required", cfg.randomization_required);

    if (const Json* c = root.find("channel")) {
        Section cs(*c, "channel");
        auto& ch = cfg.channel.channel;
        cs.get("alpha", ch.alpha);
        cs.get("lambda_m", ch.lambda_m);
        cs.get("sigma_meas_db", ch.sigma_meas_db);
        cs.get("system_loss_db", ch.system_loss_db);
        cs.get("quantize_rssi_1db", ch.quantize_rssi_1db);
        if (const Json* sf = cs.find("sigma_fading_db")) {
            if (!sf->is_number()) throw ConfigError("expected a number", "channel.sigma_fading_db");
            ch.sigma_fading_db = sf->get<double>();
            cfg.channel.fading = chan::FadingTable{};
        }
        if (const Json* ft = cs.find("fading_table")) {
            if (!ft->is_array()) throw ConfigError("expected [[distance_m, sigma_db], ...]", "channel.fading_table");
            std::vector<std::pair<double, double>> knots;
            for (const auto& k : *ft) {
                const auto v = cs.numbers("fading_table", k, 2);
                knots.emplace_back(v[0], v[1]);
            }
            cfg.channel.fading = chan::FadingTable(std::move(knots));
        }
        cs.finish();
    }

    if (const Json* t = root.find("trajectory")) {
        Section ts(*t, "trajectory");
        std::string kind(chan::to_string(cfg.trajectory.kind));
        ts.get("kind", kind);
        double duration = cfg.trajectory.duration_s;
        ts.get("duration_s", duration);
        cfg.trajectory = chan::make_trajectory(chan::parse_trajectory_kind(kind), duration);
        ts.get("perp_offset_m", cfg.trajectory.perp_offset_m);
        ts.get("half_span_m", cfg.trajectory.half_span_m);
        ts.get("speed_mps", cfg.trajectory.speed_mps);
        ts.get("start_offset_m", cfg.trajectory.start_offset_m);
        ts.get("vertical_span_m", cfg.trajectory.vertical_span_m);
        ts.finish();
    }

    if (const Json* a = root.find("attacker"); a && !a->is_null()) {
        Section as(*a, "attacker");
        std::string kind;
        as.get("kind", kind);
        if (kind.empty()) throw ConfigError("attacker kind is required", "attacker.kind");
        const auto k = adversary::parse_attacker_kind(kind);
        double distance = 2.0;
        as.get("distance_m", distance);
        if (!(distance > 0.0)) throw ConfigError("must be > 0", "attacker.distance_m");
        auto p = adversary::AttackerProfile::at_distance(k, distance);
        if (const Json* pos = as.find("position_m")) {
            const auto v = as.numbers("position_m", *pos, 3);
            p.position = {v[0], v[1], v[2]};
        }
        // attacker radios are as noisy as the devices unless stated otherwise
        p.measurement_noise_db = k == adversary::AttackerKind::Supreme ? 0.0 : cfg.channel.channel.sigma_meas_db;
        as.get("sigma_d", p.sigma_d);
        as.get("measurement_noise_db", p.measurement_noise_db);
        as.get("dither", p.dither);
        as.get("dither_db", p.dither_db);
        as.finish();
        cfg.attacker = p;
    }

    parse_auth(root, cfg.auth);
    if (const Json* b = root.find("device_b")) {
        Section bs(*b, "device_b");
        protocol::AuthParams ab = cfg.auth;
        parse_auth(bs, ab);
        bs.finish();
        try {
            ab.validate();
        } catch (const ConfigError& e) {
            // re-key so the diagnostic points at the device_b section
            const std::string what = e.what();
            throw ConfigError(what.substr(std::min(what.size(), e.key().size() + 2)), "device_b." + e.key());
        }
        cfg.auth_b = ab;
    }
    root.finish();
    cfg.validate();
    return cfg;
}

Json read_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file '" + path + "'", "--config");
    std::stringstream ss;
    ss << f.rdbuf();
    Json j = Json::parse(ss.str(), nullptr, false);
    if (j.is_discarded()) throw ConfigError("'" + path + "' is not valid JSON", "--config");
    return j;
}

harness::ScenarioConfig load_scenario(const std::string& path, const std::vector<std::string>& overrides) {
    Json doc = path.empty() ? Json::object() : read_json_file(path);
    for (const auto& o : overrides) apply_override(doc, o);
    return parse_scenario(doc);
}

namespace {

Json auth_json(const protocol::AuthParams& a) {
    return {{"detector",
             {{"lag", a.detector.lag},
              {"threshold", a.detector.threshold},
              {"influence", a.detector.influence},
              {"smoothing_window", a.extent.smoothing_window},
              {"cutoff_fraction", a.extent.cutoff_fraction},
              {"max_iterations", a.extent.max_iterations}}},
            {"gates",
             {{"min_depth_db", a.gates.min_depth_db},
              {"max_valley_level_db", a.gates.max_valley_level_db},
              {"min_peak_db", a.gates.min_peak_db},
              {"max_peak_db", a.gates.max_peak_db},
              {"min_width_s", a.gates.min_width_s},
              {"max_width_s", a.gates.max_width_s}}},
            {"variation_threshold_db", a.variation_threshold_db},
            {"variation_mode", protocol::to_string(a.mode)},
            {"min_variation_samples", a.min_variation_samples}};
}

}  // namespace

Json scenario_to_json(const harness::ScenarioConfig& c) {
    Json j = auth_json(c.auth);
    j["environment"] = c.environment;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["n_probes"] = c.probe.n;
    j["rate_hz"] = c.probe.rate_hz;
    j["tx_range_dbm"] = {c.probe.tx_lo_dbm, c.probe.tx_hi_dbm};
    j["randomization_required"] = c.randomization_required;

    const auto& ch = c.channel.channel;
    j["channel"] = {{"alpha", ch.alpha},
                    {"lambda_m", ch.lambda_m},
                    {"sigma_meas_db", ch.sigma_meas_db},
                    {"system_loss_db", ch.system_loss_db},
                    {"quantize_rssi_1db", ch.quantize_rssi_1db}};
    if (c.channel.fading.knots().empty()) {
        j["channel"]["sigma_fading_db"] = ch.sigma_fading_db;
    } else {
        Json knots = Json::array();
        for (const auto& [d, s] : c.channel.fading.knots()) knots.push_back({d, s});
        j["channel"]["fading_table"] = knots;
    }

    const auto& t = c.trajectory;
    j["trajectory"] = {{"kind", chan::to_string(t.kind)},
                       {"perp_offset_m", t.perp_offset_m},
                       {"half_span_m", t.half_span_m},
                       {"speed_mps", t.speed_mps},
                       {"start_offset_m", t.start_offset_m},
                       {"vertical_span_m", t.vertical_span_m},
                       {"duration_s", t.duration_s}};
    if (c.attacker) {
        const auto& a = *c.attacker;
        j["attacker"] = {{"kind", adversary::to_string(a.kind)},
                         {"position_m", {a.position.x, a.position.y, a.position.z}},
                         {"sigma_d", a.sigma_d},
                         {"measurement_noise_db", a.measurement_noise_db},
                         {"dither", a.dither},
                         {"dither_db", a.dither_db}};
    } else {
        j["attacker"] = nullptr;
    }
    if (c.auth_b) j["device_b"] = auth_json(*c.auth_b);
    return j;
}

}  // namespace swipesim::config
