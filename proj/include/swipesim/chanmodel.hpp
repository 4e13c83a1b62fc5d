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

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "swipesim/rng.hpp"

/// Swipe geometry and the lognormal-shadowing radio channel.
///
/// Coordinates: device B sits at the origin. The moving device A travels in
/// the plane y = perp_offset_m; x is the lateral (swipe) axis and z the
/// vertical axis. An attacker is a fixed point elsewhere in the room.
namespace swipesim::chan {

inline constexpr double kSpeedOfLight = 3.0e8;
inline constexpr double kCarrierHz = 2.4e9;
inline constexpr double kDefaultWavelength = kSpeedOfLight / kCarrierHz;

struct ChannelParams {
    double alpha = 2.0;                      ///< pathloss exponent
    double lambda_m = kDefaultWavelength;    ///< carrier wavelength
    double sigma_fading_db = 0.0;            ///< std of the shadowing term
    double sigma_meas_db = 0.0;              ///< std of the receiver's measurement error
    /// Constant offset added to every pathloss (antenna, cable and RSSI
    /// calibration losses). Zero gives the bare log-distance term.
    double system_loss_db = 0.0;
    /// Round recorded Rx powers to whole dB, like integer RSSI reporting.
    bool quantize_rssi_1db = false;

    /// Throws ConfigError on a violated invariant.
    void validate() const;
};

enum class TrajectoryKind {
    SymmetricSwipe,
    AsymmetricSwipe,
    DiagonalSwipe,
    SlowSwipe,
    FarSwipe,
    Stationary,
};

std::string_view to_string(TrajectoryKind kind);
/// Accepts the hyphenated names used in configuration files
/// ("symmetric-swipe", ...). Throws ConfigError on unknown names.
TrajectoryKind parse_trajectory_kind(std::string_view name);

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Motion of device A relative to B over the observation window.
///
/// The lateral pass from -half_span to +half_span at `speed_mps` is centred in
/// the window; before and after it the device is held still at the end
/// points. Diagonal swipes run right to left while rising through
/// `vertical_span_m`. `start_offset_m` shifts the whole path laterally so B is
/// off-centre.
struct Trajectory {
    TrajectoryKind kind = TrajectoryKind::SymmetricSwipe;
    double perp_offset_m = 0.1;
    double half_span_m = 0.55;
    double speed_mps = 9.0;
    double start_offset_m = 0.0;
    double vertical_span_m = 0.0;
    double duration_s = 1.0;

    /// Time spent on the lateral pass itself.
    double swipe_time_s() const { return 2.0 * half_span_m / speed_mps; }
    /// Time at which the pass starts (negative when the pass outlasts the window).
    double swipe_start_s() const { return 0.5 * (duration_s - swipe_time_s()); }

    void validate() const;
};

/// Calibrated nominal geometry for each motion kind.
Trajectory make_trajectory(TrajectoryKind kind, double duration_s = 1.0);

Vec3 position_at(const Trajectory& traj, double t_s);
/// Distance from A to B at time t. Throws RangeError outside [0, duration].
double distance_at(const Trajectory& traj, double t_s);

struct LinkSample {
    std::size_t index = 0;   ///< probe number, 1-based
    double time_s = 0.0;
    double distance_m = 0.0;
    double fading_db = 0.0;
    double pathloss_db = 0.0;
};

/// 10·alpha·log10(4·pi·d/lambda) + system_loss_db. Throws DomainError for d <= 0.
double deterministic_pathloss(double d_m, const ChannelParams& params);

/// One observed pathloss: deterministic term + N(0, sigma_fading²) fading +
/// N(0, sigma_meas²) measurement error, drawn in that order.
LinkSample sample_link(double d_m, const ChannelParams& params, Rng& rng,
                       std::size_t index = 1, double time_s = 0.0);

/// A bidirectional probe pair under channel reciprocity: one shared fading
/// draw, independent measurement errors at the two receivers.
struct ReciprocalSample {
    double fading_db = 0.0;
    double pathloss_fwd_db = 0.0;   ///< as measured by the second device
    double pathloss_rev_db = 0.0;   ///< as measured by the first device
};

ReciprocalSample sample_reciprocal(double d_m, const ChannelParams& params,
                                   double sigma_meas_fwd_db, double sigma_meas_rev_db,
                                   Rng& rng);

/// Zero-mean Gaussian draw; sigma == 0 yields exactly 0.
double gaussian(Rng& rng, double sigma);

/// Piecewise-linear fading std versus link distance, flat beyond the end knots.
class FadingTable {
public:
    FadingTable() = default;
    explicit FadingTable(std::vector<std::pair<double, double>> knots);

    double sigma_at(double d_m) const;
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

private:
    std::vector<std::pair<double, double>> knots_;
};

/// Channel parameters plus distance-dependent fading. An empty table means
/// the constant `channel.sigma_fading_db` applies at every distance.
struct EnvironmentChannel {
    std::string name;
    ChannelParams channel;
    FadingTable fading;

    /// `channel` with sigma_fading_db resolved for a link of length d.
    ChannelParams at(double d_m) const;
};

/// Calibrated channel presets: "office", "lobby", "dining".
/// Throws ConfigError on unknown names.
const EnvironmentChannel& environment_channel(std::string_view name);
std::vector<std::string> environment_names();

double fading_sigma_for(const EnvironmentChannel& env, double d_m);
double fading_sigma_for(std::string_view environment, double d_m);

}  // namespace swipesim::chan
