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

#include "swipesim/adversary.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "swipesim/errors.hpp"

namespace swipesim::adversary {

namespace {

constexpr std::array<std::pair<AttackerKind, std::string_view>, 5> kNames{{
    {AttackerKind::General, "general"},
    {AttackerKind::Advanced, "advanced"},
    {AttackerKind::Supreme, "supreme"},
    {AttackerKind::FixedPowerExploit, "fixed-power-exploit"},
    {AttackerKind::Averaging, "averaging"},
}};

void same_length(std::size_t a, std::size_t b) {
    if (a != b) throw PreconditionError("attacker inputs differ in length");
}

}  // namespace

std::string_view to_string(AttackerKind kind) {
    for (const auto& [k, n] : kNames)
        if (k == kind) return n;
    return "unknown";
}

AttackerKind parse_attacker_kind(std::string_view name) {
    for (const auto& [k, n] : kNames)
        if (n == name) return k;
    throw ConfigError("unknown attacker kind '" + std::string(name) + "'", "attacker.kind");
}

void AttackerProfile::validate() const {
    if (!(sigma_d >= 0.0) || !std::isfinite(sigma_d)) throw ConfigError("must be >= 0", "attacker.sigma_d");
    if (!(measurement_noise_db >= 0.0) || !std::isfinite(measurement_noise_db))
        throw ConfigError("must be >= 0", "attacker.measurement_noise_db");
    if (!(dither_db >= 0.0)) throw ConfigError("must be >= 0", "attacker.dither_db");
    if (!(position.norm() > 0.0)) throw ConfigError("attacker cannot sit on device B", "attacker.distance_m");
    if (kind == AttackerKind::Supreme && (sigma_d != 0.0 || measurement_noise_db != 0.0))
        throw ConfigError("a supreme attacker has no estimation or measurement error", "attacker.sigma_d");
}

AttackerProfile AttackerProfile::at_distance(AttackerKind kind, double distance_m) {
    AttackerProfile p;
    p.kind = kind;
    p.position = {0.0, -distance_m, 0.0};
    return p;
}

FalsifiedReport general_report(std::span<const double> true_tx, std::span<const double> true_rx) {
    same_length(true_tx.size(), true_rx.size());
    return {{true_tx.begin(), true_tx.end()}, {true_rx.begin(), true_rx.end()}};
}

std::vector<double> estimate_distances(std::span<const double> true_d, double sigma_d, Rng& rng) {
    if (!(sigma_d >= 0.0)) throw DomainError("sigma_d must be >= 0");
    std::vector<double> out(true_d.size());
    for (std::size_t i = 0; i < true_d.size(); ++i) out[i] = true_d[i] * std::exp(chan::gaussian(rng, sigma_d));
    return out;
}

double distance_correction_db(double d_vm, double d_target, double alpha) {
    if (!(d_vm > 0.0) || !(d_target > 0.0)) throw DomainError("distance estimates must be positive");
    return 10.0 * alpha * std::log10(d_vm / d_target);
}

FalsifiedReport advanced_report(std::span<const double> true_tx, std::span<const double> true_rx,
                                std::span<const double> d_vm_est, std::span<const double> d_target_est,
                                double alpha) {
    const std::size_t n = true_tx.size();
    same_length(n, true_rx.size());
    same_length(n, d_vm_est.size());
    same_length(n, d_target_est.size());
    FalsifiedReport r;
    r.tx_claimed_dbm.resize(n);
    r.rx_claimed_dbm.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = distance_correction_db(d_vm_est[i], d_target_est[i], alpha);
        r.rx_claimed_dbm[i] = true_rx[i] + c;
        r.tx_claimed_dbm[i] = true_tx[i] - c;
    }
    return r;
}

FalsifiedReport supreme_report(std::span<const double> true_tx, std::span<const double> true_rx,
                               std::span<const double> d_vm, std::span<const double> d_target, double alpha) {
    return advanced_report(true_tx, true_rx, d_vm, d_target, alpha);
}

std::vector<double> recover_fading(double known_fixed_tx, std::span<const double> observed_rx,
                                   std::span<const double> d_vm, const chan::ChannelParams& params) {
    same_length(observed_rx.size(), d_vm.size());
    std::vector<double> chi(observed_rx.size());
    for (std::size_t i = 0; i < chi.size(); ++i)
        chi[i] = known_fixed_tx - observed_rx[i] - chan::deterministic_pathloss(d_vm[i], params);
    return chi;
}

FalsifiedReport fixed_power_exploit(double known_fixed_tx, std::span<const double> true_tx,
                                    std::span<const double> observed_rx, std::span<const double> d_vm,
                                    std::span<const double> d_target, const chan::ChannelParams& params,
                                    bool tx_randomized) {
    if (tx_randomized)
        throw PreconditionError("fixed-power exploit needs a fixed, known victim transmit power");
    const auto chi = recover_fading(known_fixed_tx, observed_rx, d_vm, params);
    FalsifiedReport r = supreme_report(true_tx, observed_rx, d_vm, d_target, params.alpha);
    for (std::size_t i = 0; i < chi.size(); ++i) {
        r.rx_claimed_dbm[i] += chi[i];
        r.tx_claimed_dbm[i] -= chi[i];
    }
    return r;
}

double estimate_mean_tx(std::span<const double> observed_rx, std::span<const double> d_vm,
                        const chan::ChannelParams& params) {
    same_length(observed_rx.size(), d_vm.size());
    if (observed_rx.empty()) throw PreconditionError("no observations to average");
    double s = 0.0;
    for (std::size_t i = 0; i < observed_rx.size(); ++i)
        s += observed_rx[i] + chan::deterministic_pathloss(d_vm[i], params);
    return s / static_cast<double>(observed_rx.size());
}

FalsifiedReport averaging_attack(std::span<const double> true_tx, std::span<const double> observed_rx,
                                 std::span<const double> d_vm, std::span<const double> d_target,
                                 const chan::ChannelParams& params, Rng* dither_rng, double dither_db) {
    const double mean_tx = estimate_mean_tx(observed_rx, d_vm, params);
    FalsifiedReport r = supreme_report(true_tx, observed_rx, d_vm, d_target, params.alpha);
    for (std::size_t i = 0; i < r.rx_claimed_dbm.size(); ++i) {
        r.rx_claimed_dbm[i] = mean_tx - chan::deterministic_pathloss(d_target[i], params);
        if (dither_rng) {
            r.rx_claimed_dbm[i] += chan::gaussian(*dither_rng, dither_db);
            r.tx_claimed_dbm[i] += chan::gaussian(*dither_rng, dither_db);
        }
    }
    return r;
}

}  // namespace swipesim::adversary
