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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swipesim/adversary.hpp"
#include "swipesim/chanmodel.hpp"
#include "swipesim/crypto.hpp"
#include "swipesim/detect.hpp"
#include "swipesim/interlock.hpp"
#include "swipesim/record.hpp"
#include "swipesim/rng.hpp"

/// The four pairing stages between devices A and B: randomized-power probe
/// exchange, interlock exchange of sealed power records, bidirectional
/// pathloss reconstruction and authentication on both sides.
namespace swipesim::protocol {

/// Stage 1 settings shared by both devices.
struct ProbeConfig {
    std::size_t n = 500;
    double rate_hz = 500.0;
    double tx_lo_dbm = 0.0;
    double tx_hi_dbm = 30.0;

    bool tx_randomized() const { return tx_hi_dbm > tx_lo_dbm; }
    /// Std of the uniform transmit power, (hi - lo) / sqrt(12).
    double tx_sigma_db() const;
    void validate() const;
};

/// Transmit and receive powers are kept on a binary fixed-point grid of
/// 2^-32 dB. On that grid rx = tx - pathloss and tx - rx are both exact, so a
/// noiseless reconstruction returns the channel's pathloss to the last bit.
double snap_to_power_grid(double dbm);

/// Uniform draws in [lo, hi] (constant when lo == hi), snapped to the grid.
std::vector<double> draw_tx_powers(std::size_t n, double lo, double hi, Rng& rng);

/// Both directions of a probed link.
struct LinkExchange {
    std::vector<double> distance_m;
    std::vector<double> fading_db;           ///< shared by both directions
    std::vector<double> rx_at_responder;     ///< tx_initiator - forward pathloss
    std::vector<double> rx_at_initiator;     ///< tx_responder - reverse pathloss
};

/// Probes a link of per-probe length `d`. Each probe pair draws one fading
/// value (sigma from `env` at that distance) and one measurement error per
/// receiver, in that order.
LinkExchange exchange_probes(std::span<const double> d, const chan::EnvironmentChannel& env,
                             std::span<const double> tx_initiator, std::span<const double> tx_responder,
                             double sigma_meas_responder, double sigma_meas_initiator, Rng& rng);

/// Probe timestamps i / rate_hz for i = 0 .. n - 1.
std::vector<double> probe_times(const ProbeConfig& cfg);

struct ProbeStageResult {
    PowerRecord a;   ///< A's transmit powers and what A received from B
    PowerRecord b;
    std::vector<double> times_s;
    std::vector<double> distance_m;
    std::vector<double> fading_db;
};

/// Honest stage 1 over trajectory `traj`. Draws A's powers, then B's, then
/// the link, all from `rng`. Records are not quantized.
ProbeStageResult run_probe_stage(const chan::Trajectory& traj, const chan::EnvironmentChannel& env,
                                 const ProbeConfig& cfg, Rng& rng);
/// Constant-fading convenience overload.
ProbeStageResult run_probe_stage(const chan::Trajectory& traj, const chan::ChannelParams& params,
                                 const ProbeConfig& cfg, Rng& rng);

struct PathlossSeries {
    std::vector<double> pl_fwd_db;   ///< own tx - peer's claimed rx
    std::vector<double> pl_rev_db;   ///< peer's claimed tx - own rx
    std::vector<double> times_s;
};

/// Throws FramingError when the sequences differ in length.
PathlossSeries compute_pathloss(std::span<const double> own_tx, std::span<const double> peer_rx_claimed,
                                std::span<const double> peer_tx_claimed, std::span<const double> own_rx,
                                std::span<const double> times_s);

enum class FailedCheck { None, ValleyShape, FadingVariation, KeyAgreement, InterlockOrdering, Framing };
std::string_view to_string(FailedCheck f);

enum class VariationMode {
    Both,     ///< forward and reverse residuals must each pass
    Pooled,   ///< one std over both residual sets
};
std::string_view to_string(VariationMode m);
VariationMode parse_variation_mode(std::string_view name);

/// One device's authentication settings.
struct AuthParams {
    detect::ValleyDetectionParams detector;
    detect::ExtentOptions extent;
    detect::ValleyGates gates;
    double variation_threshold_db = 1.27;
    VariationMode mode = VariationMode::Both;
    std::size_t min_variation_samples = detect::kMinVariationSamples;

    void validate() const;
};

struct AuthResult {
    detect::ValleyReport valley;
    bool valley_pass = false;
    detect::VariationReport fwd;
    detect::VariationReport rev;
    detect::VariationReport pooled;
    bool variation_pass = false;
    bool accepted = false;
    FailedCheck failed_check = FailedCheck::ValleyShape;
    /// Statistic compared with the threshold: the larger of the forward and
    /// reverse stds (or the pooled std); +inf when no valley was found.
    double decision_std_db = 0.0;
};

/// Detection runs on the mean of the forward and reverse series. The
/// variation check uses residuals from the fitted valley within its extent.
/// Throws ConfigError when the series is not longer than the detector lag.
AuthResult authenticate(const PathlossSeries& series, const AuthParams& params);

/// Audit log of one pairing.
struct Transcript {
    static constexpr int kSchemaVersion = 1;
    ProbeConfig probe;
    std::string attacker = "none";
    std::vector<double> times_s;
    PowerRecord a_record;                       ///< as A sealed it
    PowerRecord b_record;
    std::optional<PowerRecord> claimed_to_a;    ///< what M sealed for A
    std::optional<PowerRecord> claimed_to_b;
    PowerRecord a_received;                     ///< what A recovered
    PowerRecord b_received;
    Bytes a_public;
    Bytes b_public;
    Bytes m_public;
    std::vector<crypto::FrameLogEntry> frames;
};

struct PairingSetup {
    chan::Trajectory trajectory;
    chan::EnvironmentChannel environment;
    ProbeConfig probe;
    AuthParams auth_a;
    AuthParams auth_b;
    std::optional<adversary::AttackerProfile> attacker;

    /// Test hooks for tampering outside the modeled attacker strategies.
    std::function<void(Bytes& public_point_seen_by_a)> tamper_public_key;
    crypto::FrameTap interlock_tap;

    void validate() const;
};

struct PairingOutcome {
    bool accepted = false;
    FailedCheck failed_check = FailedCheck::None;
    std::string detail;
    std::optional<AuthResult> auth_a;
    std::optional<AuthResult> auth_b;
    std::optional<PathlossSeries> series_a;   ///< what A reconstructed
    std::optional<PathlossSeries> series_b;
    Transcript transcript;
};

/// Runs all four stages. Every random draw comes from a stream derived from
/// `session_seed`, so the outcome is a pure function of (setup, seed).
/// Key-agreement, ordering and framing failures yield a rejected outcome.
PairingOutcome pair(const PairingSetup& setup, std::uint64_t session_seed);

}  // namespace swipesim::protocol
