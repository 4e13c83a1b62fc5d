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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swipesim/adversary.hpp"
#include "swipesim/chanmodel.hpp"
#include "swipesim/protocol.hpp"

/// Scenario configuration, Monte-Carlo execution, ROC analysis and the
/// environment presets.
namespace swipesim::harness {

struct EnvironmentPreset {
    chan::EnvironmentChannel channel;
    detect::ValleyGates gates;
    /// Smallest attacker separation at which the preset meets fpr < 10 % and
    /// tpr > 90 % on the variation check.
    double min_attacker_distance_m = 2.0;
};

/// "office", "lobby" or "dining". Throws ConfigError otherwise.
const EnvironmentPreset& environment_preset(std::string_view name);

struct ScenarioConfig {
    std::string environment = "office";
    chan::EnvironmentChannel channel = environment_preset("office").channel;
    chan::Trajectory trajectory;
    std::optional<adversary::AttackerProfile> attacker;
    protocol::ProbeConfig probe;
    protocol::AuthParams auth;                     ///< both devices
    std::optional<protocol::AuthParams> auth_b;    ///< device B override
    /// Enforce tx std > fading std of the attacker link.
    bool randomization_required = true;
    std::uint64_t seed = 42;
    std::size_t threads = 0;   ///< 0 = hardware concurrency

    /// Preset channel, gates and defaults for `environment`.
    static ScenarioConfig for_environment(std::string_view environment);

    /// Throws ConfigError naming the offending key.
    void validate() const;
    protocol::PairingSetup to_setup() const;
    /// Fading std on the attacker link: at the attacker distance, or at the
    /// preset's minimum attacker distance when no attacker is configured.
    double attacker_link_sigma_db() const;
};

/// Per-run metrics. Residual stds combine both devices (the larger value);
/// +inf when no valley was found. Geometry is A's.
struct RunMetrics {
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
    bool accepted = false;
    protocol::FailedCheck failed_check = protocol::FailedCheck::None;
    bool valley_found = false;
    bool valley_pass = false;
    bool variation_pass = false;
    double residual_std_fwd = 0.0;
    double residual_std_rev = 0.0;
    double decision_std_db = 0.0;
    double depth_db = 0.0;
    double peak_level_db = 0.0;
    double valley_level_db = 0.0;
    double width_s = 0.0;
    /// Std over all probes of A's forward pathloss minus the deterministic
    /// A-B curve (only observable in simulation).
    double true_residual_std_fwd = 0.0;
};

struct RunResult {
    protocol::PairingOutcome outcome;
    RunMetrics metrics;
};

/// One pairing with session seed `cfg.seed`.
RunResult run_scenario(const ScenarioConfig& cfg);
/// One pairing with an explicit session seed.
RunResult run_scenario(const ScenarioConfig& cfg, std::uint64_t session_seed, std::size_t run_index = 0);

struct Summary {
    std::size_t n_runs = 0;
    double accept_rate = 0.0;
    double valley_found_rate = 0.0;
    double valley_pass_rate = 0.0;
    double variation_pass_rate = 0.0;
    double mean_residual_std_db = 0.0;   ///< over runs with a finite decision std
    double mean_depth_db = 0.0;          ///< over runs with a valley
    double mean_width_s = 0.0;
    double mean_true_residual_std_fwd = 0.0;
};

struct MonteCarloResult {
    std::vector<RunMetrics> runs;   ///< ordered by run index
    Summary summary;
};

/// Run k uses session seed derive_run_seed(cfg.seed, k). Runs may execute in
/// parallel; the result does not depend on the thread count.
MonteCarloResult monte_carlo(const ScenarioConfig& cfg, std::size_t n_runs);
Summary summarize(const std::vector<RunMetrics>& runs);

struct RocPoint {
    double threshold_db = 0.0;
    double fpr = 0.0;   ///< legitimate runs with std > threshold
    double tpr = 0.0;   ///< attacker runs with std > threshold
};

/// Positive means "attack detected". NaN stds count as +inf. Throws
/// PreconditionError on an empty population.
std::vector<RocPoint> roc_curve(const std::vector<double>& legit_stds, const std::vector<double>& attack_stds,
                                const std::vector<double>& thresholds);
/// `count` evenly spaced thresholds spanning the finite values of both
/// populations.
std::vector<double> threshold_sweep(const std::vector<double>& legit_stds, const std::vector<double>& attack_stds,
                                    std::size_t count = 200);
/// Curve through every distinct observed value, from (1, 1) to (0, 0).
std::vector<RocPoint> empirical_roc(const std::vector<double>& legit_stds, const std::vector<double>& attack_stds);
/// Probability that an attack std exceeds a legit std (ties count half).
double auc(const std::vector<double>& legit_stds, const std::vector<double>& attack_stds);
/// Some point with fpr < max_fpr and tpr > min_tpr.
bool meets_target(const std::vector<RocPoint>& curve, double max_fpr, double min_tpr);

struct Calibration {
    bool feasible = false;
    double threshold_db = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
    double interval_lo = 0.0;   ///< thresholds in [lo, hi) give the same point
    double interval_hi = 0.0;
};

/// Maximizes tpr subject to fpr <= target_fpr, then minimizes fpr; returns the
/// midpoint of the threshold interval achieving that point. Feasible when the
/// point also reaches tpr >= target_tpr.
Calibration calibrate_threshold(const std::vector<double>& legit_stds, const std::vector<double>& attack_stds,
                                double target_fpr, double target_tpr);

struct RocStudy {
    std::string environment;
    double attacker_distance_m = 0.0;
    std::vector<double> legit_stds;
    std::vector<double> attack_stds;
    std::vector<RocPoint> curve;   ///< 200-point sweep
    double auc = 0.0;
    bool meets_target = false;
    Summary legit_summary;
    Summary attack_summary;
};

/// Legitimate and attacker Monte-Carlo populations for one environment and
/// attacker distance. `base` supplies everything but the attacker position.
RocStudy roc_study(const ScenarioConfig& base, double attacker_distance_m, std::size_t n_runs,
                   adversary::AttackerKind kind = adversary::AttackerKind::Supreme);
/// Same with a precomputed legitimate population.
RocStudy roc_study(const ScenarioConfig& base, double attacker_distance_m, std::size_t n_runs,
                   const MonteCarloResult& legit, adversary::AttackerKind kind = adversary::AttackerKind::Supreme);

struct MotionRow {
    chan::TrajectoryKind motion = chan::TrajectoryKind::SymmetricSwipe;
    Summary summary;
};

/// Asymmetric, diagonal, slow and far swipes over `n_runs` seeded runs each.
std::vector<MotionRow> imperfect_swipe_suite(const ScenarioConfig& base, std::size_t n_runs = 200);

std::vector<double> decision_stds(const std::vector<RunMetrics>& runs);

}  // namespace swipesim::harness
