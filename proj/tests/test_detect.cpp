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

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "swipesim/detect.hpp"
#include "swipesim/errors.hpp"
#include "swipesim/protocol.hpp"
#include "test_util.hpp"

using namespace swipesim;
using namespace swipesim::detect;

namespace {

std::vector<double> random_series(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> y(n);
    const double spike_p = 0.02 + 0.05 * u(rng);
    for (auto& v : y) {
        v = 50.0 + g(rng);
        if (u(rng) < spike_p) v += (u(rng) < 0.5 ? -1.0 : 1.0) * (3.0 + 10.0 * u(rng));
    }
    return y;
}

}  // namespace

TEST(Detector, HandTrace) {
    const std::vector<double> y = {1.0, 1.1, 0.9, 1.0, 1.0, 5.0, 1.0, 1.0, -3.0, 1.0};
    const auto t = detect_signals_trace(y, {3, 2.0, 0.5});
    EXPECT_EQ(t.signals, (std::vector<int>{0, 0, 0, 0, 0, 1, 0, 0, -1, 0}));
    EXPECT_DOUBLE_EQ(t.filtered[5], 3.0);
    EXPECT_DOUBLE_EQ(t.filtered[8], -1.0);
    EXPECT_NEAR(t.avg[2], 1.0, 1e-15);
    EXPECT_NEAR(t.stdev[2], 0.1, 1e-15);
}

TEST(Detector, ConstantSeriesNeverSignals) {
    const std::vector<double> y(300, 42.0);
    for (int s : detect_signals(y, {})) EXPECT_EQ(s, 0);
}

TEST(Detector, SeriesNoLongerThanLagIsRejected) {
    const std::vector<double> y(100, 1.0);
    try {
        detect_signals(y, {});
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), "detector.lag");
    }
    EXPECT_NO_THROW(detect_signals(std::vector<double>(101, 1.0), {}));
}

TEST(Detector, ParameterValidation) {
    EXPECT_THROW(ValleyDetectionParams({1, 4.0, 0.5}).validate(), ConfigError);
    EXPECT_THROW(ValleyDetectionParams({10, 0.0, 0.5}).validate(), ConfigError);
    EXPECT_THROW(ValleyDetectionParams({10, 4.0, 1.5}).validate(), ConfigError);
}

TEST(Detector, MatchesIndependentOracle) {
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<int> lag_d(2, 120), n_extra(1, 400);
    std::uniform_real_distribution<double> thr(0.5, 6.0), infl(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        ValleyDetectionParams p{static_cast<std::size_t>(lag_d(rng)), thr(rng), infl(rng)};
        if (trial % 10 == 0) p = {};
        const auto y = random_series(rng, p.lag + static_cast<std::size_t>(n_extra(rng)));
        ASSERT_EQ(detect_signals(y, p), testutil::oracle_signals(y, p.lag, p.threshold, p.influence))
            << "trial " << trial;
    }
}

TEST(Detector, InvariantUnderShiftAndDoubling) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const auto y = random_series(rng, 500);
        const auto s = detect_signals(y, {});
        auto doubled = y, shifted = y;
        for (auto& v : doubled) v *= 2.0;   // exact in binary floating point
        for (auto& v : shifted) v -= 50.0;
        EXPECT_EQ(detect_signals(doubled, {}), s);
        EXPECT_EQ(detect_signals(shifted, {}), s);
    }
}

TEST(Detector, Deterministic) {
    std::mt19937_64 rng(5);
    const auto y = random_series(rng, 800);
    EXPECT_EQ(detect_signals(y, {}), detect_signals(y, {}));
}

TEST(Detector, ValleyProducesOneNegativeBand) {
    std::mt19937_64 rng(77);
    const auto s = testutil::noisy_valley_series(500, 0.4, rng);
    const auto sm = moving_average(s.pl_fwd_db, 21);
    const auto sig = detect_signals(sm, {});
    std::size_t first = sig.size(), last = 0, count = 0;
    for (std::size_t i = 0; i < sig.size(); ++i)
        if (sig[i] == -1) first = std::min(first, i), last = i, ++count;
    ASSERT_GT(count, 0u);
    EXPECT_LT(first, 250u);
    EXPECT_GT(last, first);
    EXPECT_LT(last, 300u);
}

TEST(MovingAverage, ReplicatesEdges) {
    const std::vector<double> y = {1, 2, 3, 4, 5};
    const auto m = moving_average(y, 3);
    EXPECT_DOUBLE_EQ(m[0], 4.0 / 3.0);
    EXPECT_DOUBLE_EQ(m[2], 3.0);
    EXPECT_DOUBLE_EQ(m[4], 14.0 / 3.0);
    EXPECT_EQ(moving_average(y, 1), y);
}

TEST(Stats, SampleStdAndMedian) {
    const std::vector<double> v = {2, 4, 4, 4, 5, 5, 7, 9};
    EXPECT_DOUBLE_EQ(mean(v), 5.0);
    EXPECT_NEAR(sample_std(v), std::sqrt(32.0 / 7.0), 1e-15);
    EXPECT_DOUBLE_EQ(median(v), 4.5);
    EXPECT_DOUBLE_EQ(median({3, 1, 2}), 2.0);
    EXPECT_EQ(sample_std(std::vector<double>{1.0}), 0.0);
}

TEST(Variation, ThresholdIsInclusive) {
    std::vector<double> r(30);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = i % 2 ? 1.0 : -1.0;
    auto rep = variation_check_residuals(r, 1.27);
    EXPECT_NEAR(rep.residual_std_db, std::sqrt(30.0 / 29.0), 1e-12);
    EXPECT_TRUE(rep.pass);
    for (auto& v : r) v *= 1.3;
    EXPECT_FALSE(variation_check_residuals(r, 1.27).pass);
    EXPECT_TRUE(variation_check_residuals(r, sample_std(r)).pass);
}

TEST(Variation, TooFewSamplesFails) {
    const std::vector<double> r(29, 0.0);
    const auto rep = variation_check_residuals(r, 1.27);
    EXPECT_FALSE(rep.pass);
    EXPECT_TRUE(std::isinf(rep.residual_std_db));
    EXPECT_FALSE(rep.reason.empty());
    EXPECT_TRUE(variation_check_residuals(std::vector<double>(30, 0.0), 1.27).pass);
}

TEST(Variation, ModelResidualsAndLengthCheck) {
    const std::vector<double> y = testutil::gaussian_valley(100, 55, 15, 50, 10);
    EXPECT_NEAR(variation_check(y, y, 1.27).residual_std_db, 0.0, 1e-15);
    EXPECT_THROW(variation_check(y, std::vector<double>(99), 1.27), PreconditionError);
}

TEST(Variation, RejectionGrowsWithResidualNoise) {
    protocol::AuthParams p;
    std::mt19937_64 rng(404);
    double prev = -1.0;
    for (double sigma : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        int rejected = 0;
        for (int run = 0; run < 500; ++run)
            if (!protocol::authenticate(testutil::noisy_valley_series(500, sigma, rng), p).accepted) ++rejected;
        const double frac = rejected / 500.0;
        EXPECT_GE(frac, prev - 0.02) << "sigma " << sigma;
        prev = frac;
        if (sigma == 0.5) EXPECT_LT(frac, 0.05);
        if (sigma == 2.0) EXPECT_GT(frac, 0.95);
    }
}

TEST(Gates, BoundariesAreInclusive) {
    ValleyReport r;
    r.found = true;
    r.depth_db = 10.0;
    r.peak_level_db = 55.0;
    r.valley_level_db = 45.0;
    r.width_s = 0.1;
    ValleyGates g;
    EXPECT_TRUE(check_valley_geometry(r, g));
    auto bad = r;
    bad.depth_db = 9.99;
    EXPECT_FALSE(check_valley_geometry(bad, g));
    bad = r;
    bad.valley_level_db = 45.01;
    EXPECT_FALSE(check_valley_geometry(bad, g));
    bad = r;
    bad.peak_level_db = 60.01;
    EXPECT_FALSE(check_valley_geometry(bad, g));
    bad = r;
    bad.peak_level_db = 49.99;
    EXPECT_FALSE(check_valley_geometry(bad, g));
    bad = r;
    bad.width_s = 0.61;
    EXPECT_FALSE(check_valley_geometry(bad, g));
    bad = r;
    bad.found = false;
    EXPECT_FALSE(check_valley_geometry(bad, g));
    g.min_peak_db = 70.0;
    EXPECT_THROW(g.validate(), ConfigError);
}
