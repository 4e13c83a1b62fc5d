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

#include <span>
#include <string_view>
#include <vector>

#include "swipesim/chanmodel.hpp"
#include "swipesim/rng.hpp"

/// Man-in-the-middle strategies. The attacker M sits between A and B, runs
/// the probe exchange with each of them and hands each a falsified power
/// record. Every strategy rewrites only the claimed values; the channel draws
/// themselves are never touched.
///
/// Functions are written from the point of view of one victim V: `true_tx` is
/// what M transmitted towards V, `true_rx` what M received from V, `d_vm` the
/// V-M link distance and `d_target` the distance of the legitimate pair that M
/// wants V to see.
namespace swipesim::adversary {

enum class AttackerKind { General, Advanced, Supreme, FixedPowerExploit, Averaging };

std::string_view to_string(AttackerKind kind);
/// Accepts "general", "advanced", "supreme", "fixed-power-exploit",
/// "averaging". Throws ConfigError otherwise.
AttackerKind parse_attacker_kind(std::string_view name);

struct AttackerProfile {
    AttackerKind kind = AttackerKind::General;
    chan::Vec3 position{0.0, -2.0, 0.0};   ///< stationary, B at the origin
    double sigma_d = 0.0;                  ///< relative distance-estimation error (advanced)
    double measurement_noise_db = 0.0;     ///< M's own receiver noise
    /// Tiny random jitter added to claimed values by the averaging attacker.
    bool dither = false;
    double dither_db = 0.01;

    /// Throws ConfigError (keys under "attacker."): supreme requires
    /// sigma_d == 0 and measurement_noise_db == 0.
    void validate() const;
    /// Attacker placed at `distance_m` from B, on the far side of A's path.
    static AttackerProfile at_distance(AttackerKind kind, double distance_m);
};

struct FalsifiedReport {
    std::vector<double> tx_claimed_dbm;
    std::vector<double> rx_claimed_dbm;
    friend bool operator==(const FalsifiedReport&, const FalsifiedReport&) = default;
};

/// Honest relay: claims exactly what M sent and received.
FalsifiedReport general_report(std::span<const double> true_tx, std::span<const double> true_rx);

/// d * exp(r) with r ~ N(0, sigma_d^2) per element.
std::vector<double> estimate_distances(std::span<const double> true_d, double sigma_d, Rng& rng);

/// 10 alpha log10(d_vm / d_target): the pathloss M must hide.
double distance_correction_db(double d_vm, double d_target, double alpha);

/// Claims rx + C and tx - C with C = distance_correction_db(d_vm_est, d_target_est).
/// Throws DomainError on non-positive estimates, PreconditionError on length mismatch.
FalsifiedReport advanced_report(std::span<const double> true_tx, std::span<const double> true_rx,
                                std::span<const double> d_vm_est, std::span<const double> d_target_est,
                                double alpha);

/// advanced_report with exact distances.
FalsifiedReport supreme_report(std::span<const double> true_tx, std::span<const double> true_rx,
                               std::span<const double> d_vm, std::span<const double> d_target, double alpha);

/// Instantaneous fading of the V-to-M link when V transmits at a known fixed
/// power: known_tx - rx - deterministic_pathloss(d_vm).
std::vector<double> recover_fading(double known_fixed_tx, std::span<const double> observed_rx,
                                   std::span<const double> d_vm, const chan::ChannelParams& params);

/// Supreme falsification that also cancels the recovered fading, leaving the
/// victim a noise-free distance curve. Throws PreconditionError when
/// `tx_randomized` is set: the exploit needs a fixed, known victim power.
FalsifiedReport fixed_power_exploit(double known_fixed_tx, std::span<const double> true_tx,
                                    std::span<const double> observed_rx, std::span<const double> d_vm,
                                    std::span<const double> d_target, const chan::ChannelParams& params,
                                    bool tx_randomized);

/// Mean of observed_rx + deterministic_pathloss(d_vm): M's estimate of the
/// victim's average transmit power.
double estimate_mean_tx(std::span<const double> observed_rx, std::span<const double> d_vm,
                        const chan::ChannelParams& params);

/// Claims rx = mean_tx_estimate - deterministic_pathloss(d_target) and the
/// supreme tx correction. `dither_rng`, if given, adds N(0, dither_db^2) to
/// each claimed value.
FalsifiedReport averaging_attack(std::span<const double> true_tx, std::span<const double> observed_rx,
                                 std::span<const double> d_vm, std::span<const double> d_target,
                                 const chan::ChannelParams& params, Rng* dither_rng = nullptr,
                                 double dither_db = 0.01);

}  // namespace swipesim::adversary
