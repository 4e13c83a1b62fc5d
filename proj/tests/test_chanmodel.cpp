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
#include <numbers>
#include <vector>

#include "swipesim/chanmodel.hpp"
#include "swipesim/detect.hpp"
#include "swipesim/errors.hpp"

using namespace swipesim;
using namespace swipesim::chan;

TEST(Pathloss, ZeroAtReferenceDistance) {
    ChannelParams p;
    EXPECT_NEAR(deterministic_pathloss(p.lambda_m / (4.0 * std::numbers::pi), p), 0.0, 1e-12);
}

TEST(Pathloss, KnownValuesAtTenCentimetresAndOneMetre) {
    ChannelParams p;
    EXPECT_NEAR(deterministic_pathloss(0.1, p), 20.0 * std::log10(4.0 * std::numbers::pi * 0.1 / 0.125), 1e-12);
    EXPECT_NEAR(deterministic_pathloss(0.1, p), 20.046, 1e-3);
    EXPECT_NEAR(deterministic_pathloss(1.0, p), 40.046, 1e-3);
}

TEST(Pathloss, TwentyDbPerDecadeAtAlphaTwo) {
    ChannelParams p;
    for (double d : {0.05, 0.3, 1.7, 4.0})
        EXPECT_NEAR(deterministic_pathloss(10.0 * d, p) - deterministic_pathloss(d, p), 20.0, 1e-9);
    p.alpha = 2.8;
    EXPECT_NEAR(deterministic_pathloss(10.0, p) - deterministic_pathloss(1.0, p), 28.0, 1e-9);
}

TEST(Pathloss, SystemLossIsAConstantOffset) {
    ChannelParams p, q;
    q.system_loss_db = 20.0;
    for (double d : {0.1, 1.0, 3.0}) EXPECT_NEAR(deterministic_pathloss(d, q) - deterministic_pathloss(d, p), 20.0, 1e-12);
}

TEST(Pathloss, RejectsNonPositiveDistance) {
    ChannelParams p;
    EXPECT_THROW(deterministic_pathloss(0.0, p), DomainError);
    EXPECT_THROW(deterministic_pathloss(-1.0, p), DomainError);
}

TEST(Pathloss, MonotoneInDistanceAndExponent) {
    ChannelParams p;
    double prev = -1e9;
    for (double d = 0.02; d < 10.0; d *= 1.3) {
        const double v = deterministic_pathloss(d, p);
        EXPECT_GT(v, prev);
        prev = v;
    }
    // Beyond the reference distance a larger exponent means more loss.
    ChannelParams hi = p;
    hi.alpha = 3.0;
    for (double d : {0.5, 1.0, 2.0}) EXPECT_GT(deterministic_pathloss(d, hi), deterministic_pathloss(d, p));
}

TEST(ChannelParams, ValidateRejectsBadValues) {
    ChannelParams p;
    p.alpha = 0.0;
    EXPECT_THROW(p.validate(), ConfigError);
    p = {};
    p.sigma_fading_db = -1.0;
    EXPECT_THROW(p.validate(), ConfigError);
    p = {};
    p.lambda_m = 0.0;
    EXPECT_THROW(p.validate(), ConfigError);
    EXPECT_NO_THROW(ChannelParams{}.validate());
}

TEST(Sampling, DeterministicForSeed) {
    ChannelParams p;
    p.sigma_fading_db = 1.0;
    p.sigma_meas_db = 0.5;
    Rng a(7), b(7);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_link(1.0, p, a).pathloss_db, sample_link(1.0, p, b).pathloss_db);
}

TEST(Sampling, ZeroSigmaIsExact) {
    ChannelParams p;
    Rng rng(1);
    for (double d : {0.1, 0.7, 2.5}) {
        const auto s = sample_link(d, p, rng);
        EXPECT_EQ(s.pathloss_db, deterministic_pathloss(d, p));
        EXPECT_EQ(s.fading_db, 0.0);
    }
}

TEST(Sampling, CombinedStdMatchesSumOfVariances) {
    ChannelParams p;
    p.sigma_fading_db = 0.8;
    p.sigma_meas_db = 0.4;
    Rng rng(2024);
    std::vector<double> v;
    const double det = deterministic_pathloss(1.0, p);
    for (int i = 0; i < 100000; ++i) v.push_back(sample_link(1.0, p, rng).pathloss_db - det);
    const double expected = std::sqrt(0.8 * 0.8 + 0.4 * 0.4);
    EXPECT_NEAR(detect::sample_std(v), expected, 0.03 * expected);
    EXPECT_NEAR(detect::mean(v), 0.0, 0.01);
}

TEST(Sampling, ReciprocalSharesFading) {
    ChannelParams p;
    p.sigma_fading_db = 2.0;
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const auto s = sample_reciprocal(1.3, p, 0.0, 0.0, rng);
        EXPECT_EQ(s.pathloss_fwd_db, s.pathloss_rev_db);
    }
    std::vector<double> diff;
    for (int i = 0; i < 20000; ++i) {
        const auto s = sample_reciprocal(1.3, p, 0.3, 0.3, rng);
        diff.push_back(s.pathloss_fwd_db - s.pathloss_rev_db);
    }
    // Only measurement error separates the two directions.
    EXPECT_NEAR(detect::sample_std(diff), 0.3 * std::sqrt(2.0), 0.02);
}

TEST(Trajectory, ClosestApproachAtWindowCentre) {
    const auto t = make_trajectory(TrajectoryKind::SymmetricSwipe);
    EXPECT_NEAR(distance_at(t, 0.5), t.perp_offset_m, 1e-12);
    EXPECT_NEAR(distance_at(t, 0.0), std::hypot(0.55, 0.1), 1e-12);
    EXPECT_NEAR(distance_at(t, 1.0), std::hypot(0.55, 0.1), 1e-12);

    double best = 1e9, t_best = -1.0;
    for (int i = 0; i < 500; ++i) {
        const double ts = i / 500.0;
        const double d = distance_at(t, ts);
        EXPECT_GE(d, t.perp_offset_m - 1e-12);
        if (d < best) best = d, t_best = ts;
    }
    EXPECT_NEAR(t_best, 0.5, 0.002);
}

TEST(Trajectory, StationaryStaysPut) {
    auto t = make_trajectory(TrajectoryKind::Stationary);
    t.perp_offset_m = 2.0;
    for (double ts : {0.0, 0.3, 1.0}) EXPECT_NEAR(distance_at(t, ts), 2.0, 1e-12);
}

TEST(Trajectory, OutsideWindowThrows) {
    const auto t = make_trajectory(TrajectoryKind::SymmetricSwipe);
    EXPECT_THROW(distance_at(t, -0.01), RangeError);
    EXPECT_THROW(distance_at(t, 1.01), RangeError);
}

TEST(Trajectory, VariantsDifferFromNominal) {
    const auto sym = make_trajectory(TrajectoryKind::SymmetricSwipe);
    EXPECT_NEAR(distance_at(make_trajectory(TrajectoryKind::FarSwipe), 0.5), 0.6, 1e-12);
    EXPECT_NEAR(make_trajectory(TrajectoryKind::SlowSwipe).swipe_time_s(), 2.0 * sym.swipe_time_s(), 1e-12);
    // The offset pass never comes as close as the nominal one.
    EXPECT_GT(distance_at(make_trajectory(TrajectoryKind::AsymmetricSwipe), 0.5), sym.perp_offset_m);
    const auto diag = make_trajectory(TrajectoryKind::DiagonalSwipe);
    EXPECT_NE(position_at(diag, 0.2).z, 0.0);
}

TEST(Trajectory, KindNamesRoundTrip) {
    for (auto k : {TrajectoryKind::SymmetricSwipe, TrajectoryKind::AsymmetricSwipe, TrajectoryKind::DiagonalSwipe,
                   TrajectoryKind::SlowSwipe, TrajectoryKind::FarSwipe, TrajectoryKind::Stationary})
        EXPECT_EQ(parse_trajectory_kind(to_string(k)), k);
    EXPECT_THROW(parse_trajectory_kind("zigzag"), ConfigError);
}

TEST(Fading, PresetTablesAtKnots) {
    EXPECT_NEAR(fading_sigma_for("office", 2.0), 1.8, 1e-12);
    EXPECT_NEAR(fading_sigma_for("office", 3.0), 2.2, 1e-12);
    EXPECT_NEAR(fading_sigma_for("lobby", 2.0), 0.9, 1e-12);
    EXPECT_NEAR(fading_sigma_for("lobby", 3.0), 1.9, 1e-12);
    EXPECT_NEAR(fading_sigma_for("dining", 3.0), 1.8, 1e-12);
    // Clamped below the first knot and interpolated between knots.
    EXPECT_NEAR(fading_sigma_for("office", 0.05), 0.8, 1e-12);
    EXPECT_NEAR(fading_sigma_for("office", 1.5), 1.4, 1e-12);
}

TEST(Fading, NondecreasingInDistance) {
    for (const auto& name : environment_names()) {
        double prev = 0.0;
        for (double d = 0.05; d < 10.0; d += 0.05) {
            const double s = fading_sigma_for(name, d);
            EXPECT_GE(s, prev) << name << " at " << d;
            prev = s;
        }
    }
}

TEST(Fading, UnknownEnvironmentThrows) {
    EXPECT_THROW(environment_channel("basement"), ConfigError);
    EXPECT_THROW(FadingTable({{1.0, 2.0}, {2.0, 1.0}}), ConfigError);
}
