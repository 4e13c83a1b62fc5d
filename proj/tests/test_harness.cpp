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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "swipesim/errors.hpp"
#include "swipesim/harness.hpp"
#include "swipesim/serialize.hpp"

using namespace swipesim;
using namespace swipesim::harness;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ScenarioConfig office() { return ScenarioConfig::for_environment("office"); }

}  // namespace

TEST(Harness, DefaultSeedPairsSuccessfully) {
    const auto r = run_scenario(office());
    EXPECT_TRUE(r.metrics.accepted);
    EXPECT_EQ(r.metrics.seed, 42u);
    EXPECT_LT(r.metrics.decision_std_db, 1.27);
    EXPECT_GT(r.metrics.depth_db, 10.0);
}

TEST(Harness, MonteCarloIsDeterministicAcrossThreadCounts) {
    auto cfg = office();
    cfg.threads = 1;
    const auto one = monte_carlo(cfg, 40);
    cfg.threads = 4;
    const auto four = monte_carlo(cfg, 40);
    EXPECT_EQ(io::metrics_csv(one.runs), io::metrics_csv(four.runs));
    EXPECT_EQ(io::to_json(one.summary).dump(), io::to_json(four.summary).dump());
    for (std::size_t k = 0; k < one.runs.size(); ++k) {
        EXPECT_EQ(one.runs[k].run_index, k);
        EXPECT_EQ(one.runs[k].seed, derive_run_seed(42, k));
    }
}

TEST(Harness, FixedPowerNeedsExplicitOptOut) {
    auto cfg = office();
    cfg.probe.tx_lo_dbm = cfg.probe.tx_hi_dbm = 10.0;
    try {
        cfg.validate();
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), "tx_range_dbm");
    }
    cfg.randomization_required = false;
    EXPECT_NO_THROW(cfg.validate());
}

TEST(Harness, SingleRunSummary) {
    const auto mc = monte_carlo(office(), 1);
    ASSERT_EQ(mc.runs.size(), 1u);
    EXPECT_EQ(mc.summary.n_runs, 1u);
    EXPECT_EQ(mc.summary.accept_rate, mc.runs[0].accepted ? 1.0 : 0.0);
    EXPECT_THROW(monte_carlo(office(), 0), ConfigError);
}

TEST(Harness, SummaryAveragesOnlyFiniteStds) {
    RunMetrics a, b;
    a.accepted = true;
    a.valley_found = true;
    a.decision_std_db = 1.0;
    a.depth_db = 14.0;
    b.decision_std_db = kInf;
    const auto s = summarize({a, b});
    EXPECT_EQ(s.accept_rate, 0.5);
    EXPECT_EQ(s.mean_residual_std_db, 1.0);
    EXPECT_EQ(s.mean_depth_db, 14.0);
    EXPECT_EQ(s.valley_found_rate, 0.5);
}

TEST(Roc, ExamplePoints) {
    const std::vector<double> legit = {0.5, 0.8, 1.0, 1.2}, attack = {1.1, 1.5, 2.0, kInf};
    const auto c = roc_curve(legit, attack, {0.0, 1.05, 1.3, 5.0});
    EXPECT_EQ(c[0].fpr, 1.0);
    EXPECT_EQ(c[0].tpr, 1.0);
    EXPECT_EQ(c[1].fpr, 0.25);
    EXPECT_EQ(c[1].tpr, 1.0);
    EXPECT_EQ(c[2].fpr, 0.0);
    EXPECT_EQ(c[2].tpr, 0.75);
    // A run with no valley is always flagged.
    EXPECT_EQ(c[3].tpr, 0.25);
    EXPECT_TRUE(meets_target(c, 0.10, 0.70));
    EXPECT_FALSE(meets_target(c, 0.0, 0.70));
}

TEST(Roc, SweepSpansFiniteRange) {
    const auto t = threshold_sweep({0.5, 1.0, kInf}, {2.0, 3.0});
    ASSERT_EQ(t.size(), 200u);
    EXPECT_EQ(t.front(), 0.5);
    EXPECT_EQ(t.back(), 3.0);
}

TEST(Roc, AucExtremesAndTies) {
    EXPECT_EQ(auc({1, 2}, {3, 4}), 1.0);
    EXPECT_EQ(auc({3, 4}, {1, 2}), 0.0);
    EXPECT_EQ(auc({1, 2}, {1, 2}), 0.5);
    EXPECT_THROW(auc({}, {1.0}), PreconditionError);
}

TEST(Roc, InvariantUnderMonotoneTransform) {
    Rng rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> l, a;
    for (int k = 0; k < 300; ++k) {
        l.push_back(1.0 + 0.3 * g(rng));
        a.push_back(1.6 + 0.4 * g(rng));
    }
    auto tf = [](std::vector<double> v) {
        for (auto& x : v) x = std::exp(2.0 * x) + 3.0;
        return v;
    };
    EXPECT_DOUBLE_EQ(auc(l, a), auc(tf(l), tf(a)));
    const auto e1 = empirical_roc(l, a), e2 = empirical_roc(tf(l), tf(a));
    ASSERT_EQ(e1.size(), e2.size());
    for (std::size_t k = 0; k < e1.size(); ++k) {
        EXPECT_EQ(e1[k].fpr, e2[k].fpr);
        EXPECT_EQ(e1[k].tpr, e2[k].tpr);
    }
    EXPECT_EQ(e1.front().fpr, 1.0);
    EXPECT_EQ(e1.back().tpr, 0.0);
}

TEST(Calibrate, SeparatedPopulationsLandInTheGap) {
    const auto c = calibrate_threshold({1.0, 1.1, 1.2}, {2.0, 2.1}, 0.10, 0.90);
    EXPECT_TRUE(c.feasible);
    EXPECT_GT(c.threshold_db, 1.2);
    EXPECT_LT(c.threshold_db, 2.0);
    EXPECT_EQ(c.fpr, 0.0);
    EXPECT_EQ(c.tpr, 1.0);
}

TEST(Calibrate, OverlapWithStrictTargetsIsInfeasible) {
    const auto c = calibrate_threshold({1.0, 1.5, 2.0}, {1.2, 1.8, 2.5}, 0.0, 1.0);
    EXPECT_FALSE(c.feasible);
    EXPECT_EQ(c.fpr, 0.0);
    EXPECT_LT(c.tpr, 1.0);
}

TEST(Calibrate, RespectsTheFalsePositiveBudget) {
    Rng rng(4);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> l, a;
    for (int k = 0; k < 1000; ++k) {
        l.push_back(1.0 + 0.2 * g(rng));
        a.push_back(1.5 + 0.3 * g(rng));
    }
    for (double target : {0.01, 0.05, 0.10, 0.20}) {
        const auto c = calibrate_threshold(l, a, target, 0.0);
        EXPECT_LE(c.fpr, target);
        // Nothing lower keeps the same fpr budget with a higher tpr.
        const auto below = roc_curve(l, a, {c.interval_lo - 1e-9});
        EXPECT_TRUE(below[0].fpr > target || below[0].tpr <= c.tpr);
    }
}

TEST(Presets, MinimumAttackerDistances) {
    EXPECT_EQ(environment_preset("office").min_attacker_distance_m, 2.0);
    EXPECT_EQ(environment_preset("lobby").min_attacker_distance_m, 3.0);
    EXPECT_EQ(environment_preset("dining").min_attacker_distance_m, 3.0);
    EXPECT_THROW(environment_preset("garage"), ConfigError);
    for (const auto& name : chan::environment_names()) EXPECT_NO_THROW(ScenarioConfig::for_environment(name).validate());
}

TEST(RocStudy, SeparationGrowsWithAttackerDistance) {
    auto cfg = ScenarioConfig::for_environment("lobby");
    const auto legit = monte_carlo(cfg, 300);
    double prev = 0.0;
    for (double d : {1.0, 2.0, 3.0, 5.0}) {
        const auto st = roc_study(cfg, d, 300, legit);
        EXPECT_GE(st.auc, prev - 0.01) << "distance " << d;
        prev = st.auc;
    }
    EXPECT_GT(prev, 0.97);
}

TEST(RocStudy, OfficeCalibrationNearTheDefaultThreshold) {
    const auto st = roc_study(office(), 2.0, 1000);
    const auto c = calibrate_threshold(st.legit_stds, st.attack_stds, 0.10, 0.90);
    EXPECT_TRUE(c.feasible);
    EXPECT_GE(c.threshold_db, 1.0);
    EXPECT_LE(c.threshold_db, 1.6);
}

TEST(Suite, ImperfectSwipesOrderedAsDefined) {
    const auto rows = imperfect_swipe_suite(office(), 20);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].motion, chan::TrajectoryKind::AsymmetricSwipe);
    EXPECT_EQ(rows[3].motion, chan::TrajectoryKind::FarSwipe);
    EXPECT_LT(rows[3].summary.valley_pass_rate, 0.5);
}
