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

#include "swipesim/adversary.hpp"
#include "swipesim/detect.hpp"
#include "swipesim/errors.hpp"
#include "swipesim/harness.hpp"
#include "swipesim/protocol.hpp"

using namespace swipesim;
using namespace swipesim::adversary;

namespace {

constexpr double kDbPerNeper = 10.0 / std::numbers::ln10;

// Probes relayed by M: A transmits at tx over a link of length d_vm with
// fading chi; M pretends A sits at d_target from B.
struct Relay {
    std::vector<double> tx, rx, d_vm, d_target, chi;
};

Relay make_relay(std::size_t n, double sigma_chi, double d_vm, double d_target, std::uint64_t seed,
                 double tx_lo = 0.0, double tx_hi = 30.0) {
    chan::ChannelParams p;
    Rng rng(seed);
    Relay r;
    r.tx = protocol::draw_tx_powers(n, tx_lo, tx_hi, rng);
    for (std::size_t i = 0; i < n; ++i) {
        const double chi = chan::gaussian(rng, sigma_chi);
        r.chi.push_back(chi);
        r.rx.push_back(r.tx[i] - chan::deterministic_pathloss(d_vm, p) - chi);
        r.d_vm.push_back(d_vm);
        r.d_target.push_back(d_target);
    }
    return r;
}

// Pathloss A would compute from M's claims, minus the honest curve at d_target.
std::vector<double> a_side_residual(const Relay& r, const FalsifiedReport& f) {
    chan::ChannelParams p;
    std::vector<double> out;
    for (std::size_t i = 0; i < r.tx.size(); ++i)
        out.push_back(r.tx[i] - f.rx_claimed_dbm[i] - chan::deterministic_pathloss(r.d_target[i], p));
    return out;
}

}  // namespace

TEST(Attacker, KindNamesRoundTrip) {
    for (auto k : {AttackerKind::General, AttackerKind::Advanced, AttackerKind::Supreme,
                   AttackerKind::FixedPowerExploit, AttackerKind::Averaging})
        EXPECT_EQ(parse_attacker_kind(to_string(k)), k);
    EXPECT_THROW(parse_attacker_kind("omniscient"), ConfigError);
}

TEST(Attacker, GeneralReportsWhatItSaw) {
    const std::vector<double> tx = {1, 2, 3}, rx = {-40, -41, -42};
    const auto f = general_report(tx, rx);
    EXPECT_EQ(f.tx_claimed_dbm, tx);
    EXPECT_EQ(f.rx_claimed_dbm, rx);
    EXPECT_THROW(general_report(tx, std::vector<double>{1.0}), PreconditionError);
}

TEST(Attacker, DistanceEstimatesAreLognormal) {
    Rng rng(12);
    const std::vector<double> d(20000, 2.0);
    const auto est = estimate_distances(d, 0.1, rng);
    std::vector<double> logs;
    for (double e : est) logs.push_back(std::log(e / 2.0));
    EXPECT_NEAR(detect::mean(logs), 0.0, 0.003);
    EXPECT_NEAR(detect::sample_std(logs), 0.1, 0.003);
    Rng r0(1);
    EXPECT_EQ(estimate_distances(d, 0.0, r0), d);
}

TEST(Attacker, DistanceCorrection) {
    EXPECT_NEAR(distance_correction_db(2.0, 0.1, 2.0), 26.0206, 1e-4);
    EXPECT_EQ(distance_correction_db(1.0, 1.0, 2.8), 0.0);
    EXPECT_THROW(distance_correction_db(0.0, 1.0, 2.0), DomainError);
}

TEST(Attacker, AdvancedShiftsBothSidesOppositely) {
    const std::vector<double> tx = {10.0}, rx = {-50.0}, dv = {2.0}, dt = {0.1};
    const auto f = advanced_report(tx, rx, dv, dt, 2.0);
    const double c = distance_correction_db(2.0, 0.1, 2.0);
    EXPECT_NEAR(f.rx_claimed_dbm[0], -50.0 + c, 1e-12);
    EXPECT_NEAR(f.tx_claimed_dbm[0], 10.0 - c, 1e-12);
}

TEST(Attacker, SupremeCancelsDistanceExactly) {
    // No fading: the forged pathloss is the honest curve at d_target.
    const auto r = make_relay(200, 0.0, 2.0, 0.3, 4);
    const auto f = supreme_report(r.tx, r.rx, r.d_vm, r.d_target, 2.0);
    for (double v : a_side_residual(r, f)) EXPECT_NEAR(v, 0.0, 1e-9);
}

TEST(Attacker, SupremeResidualIsTheAttackerLinkFading) {
    const auto r = make_relay(10000, 1.8, 2.0, 0.3, 5);
    const auto f = supreme_report(r.tx, r.rx, r.d_vm, r.d_target, 2.0);
    EXPECT_NEAR(detect::sample_std(a_side_residual(r, f)), 1.8, 0.05);
}

TEST(Attacker, AdvancedWithExactDistancesIsSupreme) {
    const auto r = make_relay(500, 1.8, 2.0, 0.3, 6);
    Rng rng(9);
    const auto est_vm = estimate_distances(r.d_vm, 0.0, rng);
    const auto est_t = estimate_distances(r.d_target, 0.0, rng);
    EXPECT_EQ(advanced_report(r.tx, r.rx, est_vm, est_t, 2.0), supreme_report(r.tx, r.rx, r.d_vm, r.d_target, 2.0));
}

TEST(Attacker, AdvancedVarianceDecomposition) {
    const double sigma_am = 1.8, alpha = 2.0;
    for (double sd : {0.0, 0.05, 0.1}) {
        const auto r = make_relay(10000, sigma_am, 2.0, 0.3, 77);
        Rng rng(78);
        const auto est_vm = estimate_distances(r.d_vm, sd, rng);
        const auto est_t = estimate_distances(r.d_target, sd, rng);
        const auto res = a_side_residual(r, advanced_report(r.tx, r.rx, est_vm, est_t, alpha));
        const double var = std::pow(detect::sample_std(res), 2);
        const double expected = sigma_am * sigma_am + std::pow(alpha * kDbPerNeper, 2) * 2.0 * sd * sd;
        EXPECT_NEAR(var, expected, 0.1 * expected) << "sigma_d " << sd;
    }
}

TEST(Attacker, FixedPowerExploitRecoversFading) {
    chan::ChannelParams p;
    const auto r = make_relay(300, 1.8, 2.0, 0.3, 8, 15.0, 15.0);
    const auto chi = recover_fading(15.0, r.rx, r.d_vm, p);
    for (std::size_t i = 0; i < chi.size(); ++i) EXPECT_NEAR(chi[i], r.chi[i], 1e-9);
    const auto f = fixed_power_exploit(15.0, r.tx, r.rx, r.d_vm, r.d_target, p, false);
    for (double v : a_side_residual(r, f)) EXPECT_NEAR(v, 0.0, 1e-9);
    EXPECT_THROW(fixed_power_exploit(15.0, r.tx, r.rx, r.d_vm, r.d_target, p, true), PreconditionError);
}

TEST(Attacker, AveragingLeavesTheTransmitSpread) {
    chan::ChannelParams p;
    const auto r = make_relay(10000, 1.8, 2.0, 0.3, 10);
    EXPECT_NEAR(estimate_mean_tx(r.rx, r.d_vm, p), 15.0, 0.3);
    const auto f = averaging_attack(r.tx, r.rx, r.d_vm, r.d_target, p);
    EXPECT_NEAR(detect::sample_std(a_side_residual(r, f)), 30.0 / std::sqrt(12.0), 0.3);

    Rng d1(3), d2(3);
    const auto g1 = averaging_attack(r.tx, r.rx, r.d_vm, r.d_target, p, &d1, 0.01);
    const auto g2 = averaging_attack(r.tx, r.rx, r.d_vm, r.d_target, p, &d2, 0.01);
    EXPECT_EQ(g1, g2);
    EXPECT_NE(g1, f);
}

TEST(Attacker, ProfileValidation) {
    auto p = AttackerProfile::at_distance(AttackerKind::Supreme, 2.0);
    EXPECT_NO_THROW(p.validate());
    EXPECT_NEAR(p.position.norm(), 2.0, 1e-12);
    p.sigma_d = 0.05;
    EXPECT_THROW(p.validate(), ConfigError);
    p = AttackerProfile::at_distance(AttackerKind::Advanced, 0.0);
    EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Attacker, KindDoesNotChangeTheVictimRecord) {
    // A's own sealed record depends only on A's streams.
    auto cfg = harness::ScenarioConfig::for_environment("office");
    PowerRecord ref;
    for (auto k : {AttackerKind::General, AttackerKind::Supreme, AttackerKind::Averaging}) {
        cfg.attacker = AttackerProfile::at_distance(k, 2.0);
        const auto out = harness::run_scenario(cfg, 555);
        if (ref.n() == 0)
            ref = out.outcome.transcript.a_record;
        else
            EXPECT_EQ(out.outcome.transcript.a_record.tx_dbm, ref.tx_dbm);
    }
}
