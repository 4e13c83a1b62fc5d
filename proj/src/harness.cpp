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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "swipesim/errors.hpp"
#include "swipesim/harness.hpp"
#include "swipesim/rng.hpp"

namespace swipesim::harness {

ScenarioConfig ScenarioConfig::for_environment(std::string_view environment) {
    const auto& p = environment_preset(environment);
    ScenarioConfig c;
    c.environment = std::string(environment);
    c.channel = p.channel;
    c.auth.gates = p.gates;
    return c;
}

double ScenarioConfig::attacker_link_sigma_db() const {
    const double d = attacker ? attacker->position.norm() : environment_preset(environment).min_attacker_distance_m;
    return channel.at(d).sigma_fading_db;
}

void ScenarioConfig::validate() const {
    environment_preset(environment);
    to_setup().validate();
    if (randomization_required) {
        const double st = probe.tx_sigma_db();
        const double sa = attacker_link_sigma_db();
        if (!(st > sa))
            throw ConfigError("transmit power std " + std::to_string(st) + " dB must exceed the attacker-link fading std " +
                                  std::to_string(sa) + " dB",
                              "tx_range_dbm");
    }
}

protocol::PairingSetup ScenarioConfig::to_setup() const {
    protocol::PairingSetup s;
    s.trajectory = trajectory;
    s.environment = channel;
    s.probe = probe;
    s.auth_a = auth;
    s.auth_b = auth_b.value_or(auth);
    s.attacker = attacker;
    return s;
}

RunResult run_scenario(const ScenarioConfig& cfg) { return run_scenario(cfg, cfg.seed, 0); }

RunResult run_scenario(const ScenarioConfig& cfg, std::uint64_t session_seed, std::size_t run_index) {
    RunResult r;
    r.outcome = protocol::pair(cfg.to_setup(), session_seed);
    const auto& o = r.outcome;
    RunMetrics& m = r.metrics;
    m.run_index = run_index;
    m.seed = session_seed;
    m.accepted = o.accepted;
    m.failed_check = o.failed_check;

    constexpr double inf = std::numeric_limits<double>::infinity();
    m.residual_std_fwd = m.residual_std_rev = m.decision_std_db = inf;
    if (o.auth_a && o.auth_b) {
        const auto& a = *o.auth_a;
        const auto& b = *o.auth_b;
        m.valley_found = a.valley.found && b.valley.found;
        m.valley_pass = a.valley_pass && b.valley_pass;
        m.variation_pass = a.variation_pass && b.variation_pass;
        m.residual_std_fwd = std::max(a.fwd.residual_std_db, b.fwd.residual_std_db);
        m.residual_std_rev = std::max(a.rev.residual_std_db, b.rev.residual_std_db);
        m.decision_std_db = std::max(a.decision_std_db, b.decision_std_db);
        if (a.valley.found) {
            m.depth_db = a.valley.depth_db;
            m.peak_level_db = a.valley.peak_level_db;
            m.valley_level_db = a.valley.valley_level_db;
            m.width_s = a.valley.width_s;
        }
    }
    if (o.series_a) {
        const auto& s = *o.series_a;
        std::vector<double> res(s.pl_fwd_db.size());
        for (std::size_t i = 0; i < res.size(); ++i) {
            const double d = chan::distance_at(cfg.trajectory, s.times_s[i]);
            res[i] = s.pl_fwd_db[i] - chan::deterministic_pathloss(d, cfg.channel.channel);
        }
        m.true_residual_std_fwd = detect::sample_std(res);
    }
    return r;
}

Summary summarize(const std::vector<RunMetrics>& runs) {
    Summary s;
    s.n_runs = runs.size();
    if (runs.empty()) return s;
    std::size_t acc = 0, found = 0, vpass = 0, varpass = 0, finite = 0;
    double sum_std = 0.0, sum_depth = 0.0, sum_width = 0.0, sum_true = 0.0;
    for (const auto& r : runs) {
        acc += r.accepted;
        vpass += r.valley_pass;
        varpass += r.variation_pass;
        sum_true += r.true_residual_std_fwd;
        if (r.valley_found) {
            ++found;
            sum_depth += r.depth_db;
            sum_width += r.width_s;
        }
        if (std::isfinite(r.decision_std_db)) {
            ++finite;
            sum_std += r.decision_std_db;
        }
    }
    const auto n = static_cast<double>(runs.size());
    s.accept_rate = static_cast<double>(acc) / n;
    s.valley_found_rate = static_cast<double>(found) / n;
    s.valley_pass_rate = static_cast<double>(vpass) / n;
    s.variation_pass_rate = static_cast<double>(varpass) / n;
    s.mean_residual_std_db = finite ? sum_std / static_cast<double>(finite) : std::numeric_limits<double>::quiet_NaN();
    s.mean_depth_db = found ? sum_depth / static_cast<double>(found) : std::numeric_limits<double>::quiet_NaN();
    s.mean_width_s = found ? sum_width / static_cast<double>(found) : std::numeric_limits<double>::quiet_NaN();
    s.mean_true_residual_std_fwd = sum_true / n;
    return s;
}

MonteCarloResult monte_carlo(const ScenarioConfig& cfg, std::size_t n_runs) {
    if (n_runs == 0) throw ConfigError("must be >= 1", "runs");
    cfg.validate();
    MonteCarloResult mc;
    mc.runs.resize(n_runs);

    std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n_runs);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (std::size_t k; !failed && (k = next.fetch_add(1)) < n_runs;) {
            try {
                mc.runs[k] = run_scenario(cfg, derive_run_seed(cfg.seed, k), k).metrics;
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    mc.summary = summarize(mc.runs);
    return mc;
}

std::vector<double> decision_stds(const std::vector<RunMetrics>& runs) {
    std::vector<double> v;
    v.reserve(runs.size());
    for (const auto& r : runs) v.push_back(r.decision_std_db);
    return v;
}

RocStudy roc_study(const ScenarioConfig& base, double attacker_distance_m, std::size_t n_runs,
                   adversary::AttackerKind kind) {
    ScenarioConfig legit = base;
    legit.attacker.reset();
    return roc_study(base, attacker_distance_m, n_runs, monte_carlo(legit, n_runs), kind);
}

RocStudy roc_study(const ScenarioConfig& base, double attacker_distance_m, std::size_t n_runs,
                   const MonteCarloResult& legit, adversary::AttackerKind kind) {
    ScenarioConfig atk = base;
    auto profile = adversary::AttackerProfile::at_distance(kind, attacker_distance_m);
    if (base.attacker && base.attacker->kind == kind) {
        profile = *base.attacker;
        profile.position = adversary::AttackerProfile::at_distance(kind, attacker_distance_m).position;
    }
    atk.attacker = profile;
    // attack populations use their own seed family
    atk.seed = splitmix64(base.seed ^ 0xa77ac4e5ULL);

    RocStudy st;
    st.environment = base.environment;
    st.attacker_distance_m = attacker_distance_m;
    st.legit_stds = decision_stds(legit.runs);
    st.legit_summary = legit.summary;
    const auto mc = monte_carlo(atk, n_runs);
    st.attack_stds = decision_stds(mc.runs);
    st.attack_summary = mc.summary;
    st.curve = roc_curve(st.legit_stds, st.attack_stds, threshold_sweep(st.legit_stds, st.attack_stds));
    st.auc = auc(st.legit_stds, st.attack_stds);
    st.meets_target = meets_target(st.curve, 0.10, 0.90);
    return st;
}

std::vector<MotionRow> imperfect_swipe_suite(const ScenarioConfig& base, std::size_t n_runs) {
    std::vector<MotionRow> rows;
    for (auto kind : {chan::TrajectoryKind::AsymmetricSwipe, chan::TrajectoryKind::DiagonalSwipe,
                      chan::TrajectoryKind::SlowSwipe, chan::TrajectoryKind::FarSwipe}) {
        ScenarioConfig c = base;
        c.attacker.reset();
        c.trajectory = chan::make_trajectory(kind, base.trajectory.duration_s);
        c.seed = splitmix64(base.seed + static_cast<std::uint64_t>(kind));
        rows.push_back({kind, monte_carlo(c, n_runs).summary});
    }
    return rows;
}

}  // namespace swipesim::harness
