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

#include "swipesim/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "swipesim/config.hpp"
#include "swipesim/errors.hpp"
#include "swipesim/harness.hpp"
#include "swipesim/serialize.hpp"

namespace swipesim::cli {

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size() && std::isfinite(out);
}

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

harness::ScenarioConfig load(const Common& c, const std::vector<std::string>& extra = {}) {
    auto overrides = c.overrides;
    overrides.insert(overrides.end(), extra.begin(), extra.end());
    if (c.seed_given) overrides.push_back("seed=" + std::to_string(c.seed));
    return config::load_scenario(c.config_path, overrides);
}

void emit(std::ostream& out, const Common& c, const std::string& file, const io::Json& j) {
    const std::string text = j.dump(2) + "\n";
    if (c.out_dir.empty()) {
        out << text;
    } else {
        io::write_file(c.out_dir + "/" + file, text);
    }
}

void add_common(CLI::App* app, Common& c, bool with_seed = true) {
    app->add_option("--config", c.config_path, "scenario JSON file");
    app->add_option("--set", c.overrides, "override as dotted.key=value (repeatable, last wins)")
        ->allow_extra_args(false);
    app->add_option("--out", c.out_dir, "output directory (default: stdout)");
    if (with_seed) app->add_option("--seed", c.seed, "base random seed")->each([&c](const std::string&) { c.seed_given = true; });
}

double attacker_distance_or(const harness::ScenarioConfig& cfg, double fallback) {
    return cfg.attacker ? cfg.attacker->position.norm() : fallback;
}

}  // namespace

protocol::PathlossSeries read_trace_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read '" + path + "'", "trace");
    std::string line;
    if (!std::getline(f, line)) throw ConfigError("empty trace file", "trace");
    if (trim(line) != "time_s,pathloss_db")
        throw ConfigError("expected header 'time_s,pathloss_db'", "row 1");
    protocol::PathlossSeries s;
    std::size_t row = 1;
    while (std::getline(f, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto comma = line.find(',');
        double t = 0.0, pl = 0.0;
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos ||
            !parse_number(line.substr(0, comma), t) || !parse_number(line.substr(comma + 1), pl))
            throw ConfigError("expected two numbers", "row " + std::to_string(row));
        if (!s.times_s.empty() && t <= s.times_s.back())
            throw ConfigError("timestamps must increase", "row " + std::to_string(row));
        s.times_s.push_back(t);
        s.pl_fwd_db.push_back(pl);
    }
    if (s.times_s.empty()) throw ConfigError("trace has no samples", "trace");
    s.pl_rev_db = s.pl_fwd_db;
    return s;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Swipe-pairing simulator: pairings, Monte-Carlo sweeps, ROC and trace analysis"};
    app.require_subcommand(1);

    Common pair_o, mc_o, roc_o, an_o, cal_o;
    std::size_t mc_runs = 1000, roc_runs = 1000, cal_runs = 1000;
    double roc_distance = 0.0, cal_distance = 0.0, target_fpr = 0.10, target_tpr = 0.90;
    std::string roc_kind = "supreme", cal_env, trace_path;

    auto* pair_cmd = app.add_subcommand("pair", "run one pairing and write its transcript");
    add_common(pair_cmd, pair_o);

    auto* mc_cmd = app.add_subcommand("montecarlo", "seeded Monte-Carlo runs: per-run CSV and summary JSON");
    add_common(mc_cmd, mc_o);
    mc_cmd->add_option("--runs", mc_runs, "number of runs")->check(CLI::PositiveNumber);

    auto* roc_cmd = app.add_subcommand("roc", "variation-check ROC: legitimate vs attacker populations");
    add_common(roc_cmd, roc_o);
    roc_cmd->add_option("--runs", roc_runs, "runs per population")->check(CLI::PositiveNumber);
    roc_cmd->add_option("--distance", roc_distance, "attacker distance in m (default: config or preset minimum)");
    roc_cmd->add_option("--kind", roc_kind, "attacker kind");

    auto* an_cmd = app.add_subcommand("analyze", "authenticate a time_s,pathloss_db trace");
    add_common(an_cmd, an_o, false);
    an_cmd->add_option("trace", trace_path, "CSV trace")->required();

    auto* cal_cmd = app.add_subcommand("calibrate", "recommend a variation threshold for an environment");
    add_common(cal_cmd, cal_o);
    cal_cmd->add_option("--environment", cal_env, "office, lobby or dining");
    cal_cmd->add_option("--target-fpr", target_fpr, "largest acceptable false-positive rate");
    cal_cmd->add_option("--target-tpr", target_tpr, "smallest acceptable true-positive rate");
    cal_cmd->add_option("--runs", cal_runs, "runs per population")->check(CLI::PositiveNumber);
    cal_cmd->add_option("--distance", cal_distance, "attacker distance in m (default: preset minimum)");

    auto* presets_cmd = app.add_subcommand("presets", "list environment presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (*pair_cmd) {
            const auto cfg = load(pair_o);
            const auto r = harness::run_scenario(cfg);
            io::Json j = io::to_json(r.outcome);
            j["config"] = config::scenario_to_json(cfg);
            emit(out, pair_o, "pair.json", j);
            err << (r.outcome.accepted ? "accepted" : "rejected: " + std::string(protocol::to_string(r.outcome.failed_check)))
                << "\n";
            return r.outcome.accepted ? kExitOk : kExitRejected;
        }
        if (*mc_cmd) {
            const auto cfg = load(mc_o);
            const auto mc = harness::monte_carlo(cfg, mc_runs);
            io::Json j{{"config", config::scenario_to_json(cfg)}, {"summary", io::to_json(mc.summary)}};
            if (mc_o.out_dir.empty()) {
                out << j.dump(2) << "\n";
            } else {
                io::write_file(mc_o.out_dir + "/runs.csv", io::metrics_csv(mc.runs));
                io::write_file(mc_o.out_dir + "/summary.json", j.dump(2) + "\n");
            }
            return kExitOk;
        }
        if (*roc_cmd) {
            auto cfg = load(roc_o);
            const auto kind = adversary::parse_attacker_kind(roc_kind);
            const double d = roc_distance > 0.0
                                 ? roc_distance
                                 : attacker_distance_or(cfg, harness::environment_preset(cfg.environment).min_attacker_distance_m);
            const auto study = harness::roc_study(cfg, d, roc_runs, kind);
            if (roc_o.out_dir.empty()) {
                out << io::to_json(study).dump(2) << "\n";
            } else {
                io::Json j = io::to_json(study);
                io::write_file(roc_o.out_dir + "/roc.json", j.dump(2) + "\n");
                io::Json pops{{"legit_stds", io::Json::array()}, {"attack_stds", io::Json::array()}};
                for (double v : study.legit_stds) pops["legit_stds"].push_back(std::isfinite(v) ? io::Json(v) : io::Json());
                for (double v : study.attack_stds) pops["attack_stds"].push_back(std::isfinite(v) ? io::Json(v) : io::Json());
                io::write_file(roc_o.out_dir + "/populations.json", pops.dump(2) + "\n");
            }
            return kExitOk;
        }
        if (*an_cmd) {
            const auto cfg = load(an_o);
            const auto series = read_trace_csv(trace_path);
            const auto r = protocol::authenticate(series, cfg.auth);
            io::Json j{{"valley", io::to_json(r.valley)},
                       {"valley_pass", r.valley_pass},
                       {"variation", io::to_json(r.fwd)},
                       {"accepted", r.accepted},
                       {"failed_check", protocol::to_string(r.failed_check)}};
            emit(out, an_o, "analysis.json", j);
            return kExitOk;
        }
        if (*cal_cmd) {
            std::vector<std::string> extra;
            if (!cal_env.empty()) extra.push_back("environment=" + cal_env);
            auto cfg = load(cal_o, extra);
            const double d = cal_distance > 0.0 ? cal_distance
                                                : harness::environment_preset(cfg.environment).min_attacker_distance_m;
            const auto study = harness::roc_study(cfg, d, cal_runs);
            const auto c = harness::calibrate_threshold(study.legit_stds, study.attack_stds, target_fpr, target_tpr);
            io::Json j{{"environment", cfg.environment},
                       {"attacker_distance_m", d},
                       {"target_fpr", target_fpr},
                       {"target_tpr", target_tpr},
                       {"calibration", io::to_json(c)}};
            emit(out, cal_o, "calibration.json", j);
            if (!c.feasible) {
                err << "targets infeasible; best point fpr " << c.fpr << " tpr " << c.tpr << " at threshold "
                    << c.threshold_db << " dB\n";
                return kExitRejected;
            }
            return kExitOk;
        }
        if (*presets_cmd) {
            io::Json j = io::Json::array();
            for (const auto& name : chan::environment_names()) {
                const auto& p = harness::environment_preset(name);
                io::Json knots = io::Json::array();
                for (const auto& [dd, s] : p.channel.fading.knots()) knots.push_back({dd, s});
                j.push_back({{"name", name},
                             {"alpha", p.channel.channel.alpha},
                             {"lambda_m", p.channel.channel.lambda_m},
                             {"system_loss_db", p.channel.channel.system_loss_db},
                             {"sigma_meas_db", p.channel.channel.sigma_meas_db},
                             {"fading_table", knots},
                             {"min_attacker_distance_m", p.min_attacker_distance_m}});
            }
            out << j.dump(2) << "\n";
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}

}  // namespace swipesim::cli
