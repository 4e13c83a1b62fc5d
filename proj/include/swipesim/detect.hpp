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
#include <optional>
#include <span>
#include <string>
#include <vector>

/// Authentication signal processing: robust z-score valley detection, valley
/// extent location by model fitting, geometry gating and the fading variation
/// check.
namespace swipesim::detect {

struct ValleyDetectionParams {
    std::size_t lag = 100;
    double threshold = 4.0;
    double influence = 0.5;

    /// Throws ConfigError (keys under "detector.").
    void validate() const;
};

/// Full state of one detector pass, exposed for tracing and tests.
struct SignalTrace {
    std::vector<int> signals;        ///< -1, 0 or +1 per sample
    std::vector<double> filtered;    ///< influence-blended copy of the input
    std::vector<double> avg;         ///< moving mean; valid from index lag - 1
    std::vector<double> stdev;       ///< moving sample std (n - 1); valid from index lag - 1
};

/// Robust z-score detector. The first `lag` samples carry signal 0; the window
/// statistics at index lag - 1 seed the loop. A sample is flagged when its
/// deviation from the previous moving mean strictly exceeds threshold times
/// the previous moving std. Throws ConfigError when y.size() <= lag.
SignalTrace detect_signals_trace(std::span<const double> y, const ValleyDetectionParams& p);
std::vector<int> detect_signals(std::span<const double> y, const ValleyDetectionParams& p);

/// Centred moving average of odd or even width with edge replication.
/// Width <= 1 returns the input unchanged.
std::vector<double> moving_average(std::span<const double> y, std::size_t width);

/// Inverted Gaussian on a constant baseline, in sample-index units:
/// baseline - depth * exp(-(x - center)^2 / (2 width^2)).
struct ValleyModel {
    double baseline = 0.0;
    double depth = 0.0;
    double center = 0.0;
    double width = 1.0;

    double operator()(double x) const;
    /// Distance from the centre at which the model is back within
    /// `cutoff_fraction` of the depth from the baseline.
    double half_extent(double cutoff_fraction) const;
};

struct FitResult {
    ValleyModel model;
    bool converged = false;
    std::size_t iterations = 0;
    double cost = 0.0;   ///< half the sum of squared residuals
};

/// Levenberg-Marquardt least squares of ValleyModel to (index, y).
FitResult fit_valley_model(std::span<const double> y, const ValleyModel& initial,
                           std::size_t max_iterations = 200);

struct ExtentOptions {
    double cutoff_fraction = 0.01;
    std::size_t smoothing_window = 21;   ///< for seeding the fit only
    std::size_t search_margin = 100;     ///< samples searched past the band for the bottom
    std::size_t max_iterations = 200;
};

struct Extent {
    std::size_t start_idx = 0;
    std::size_t end_idx = 0;
    std::size_t valley_idx = 0;
    double start_pos = 0.0;   ///< unclipped fractional crossing points
    double end_pos = 0.0;
    FitResult fit;
};

/// Seeds the model from the negative-signal band (bottom at the minimum of the
/// smoothed series near the band, width from its half-depth crossings), fits
/// it to the raw series, and widens outward to whole indices where the model
/// is within the cutoff of its baseline. Returns nullopt when there is no
/// negative band, the fit does not converge or the result is not a valley
/// inside the data. `why`, if given, receives the reason.
std::optional<Extent> locate_extent(std::span<const double> y, std::span<const int> signals,
                                    const ExtentOptions& opts = {}, std::string* why = nullptr);

struct ValleyReport {
    bool found = false;
    std::string reason;   ///< why nothing was found
    std::size_t start_idx = 0;
    std::size_t end_idx = 0;
    std::size_t valley_idx = 0;
    double depth_db = 0.0;
    double peak_level_db = 0.0;
    double valley_level_db = 0.0;
    double width_s = 0.0;
    ValleyModel model;
};

struct ValleyGates {
    double min_depth_db = 10.0;
    double max_valley_level_db = 45.0;
    double min_peak_db = 50.0;
    double max_peak_db = 60.0;
    double min_width_s = 0.1;
    double max_width_s = 0.6;

    void validate() const;
};

/// Runs detector and extent location on one series sampled at rate_hz.
ValleyReport analyze_valley(std::span<const double> y, const ValleyDetectionParams& p,
                            const ExtentOptions& opts, double rate_hz);

/// False when the report is not `found`.
bool check_valley_geometry(const ValleyReport& report, const ValleyGates& gates);

inline constexpr std::size_t kMinVariationSamples = 30;

struct VariationReport {
    double residual_std_db = 0.0;
    double threshold_db = 1.27;
    bool pass = false;
    std::size_t samples = 0;
    std::string reason;   ///< set when the check could not be evaluated
};

/// Sample std (n - 1) of y - model over the extent. Fails with a reason when
/// fewer than `min_samples` residuals are available.
VariationReport variation_check(std::span<const double> y, std::span<const double> model,
                                double threshold_db, std::size_t min_samples = kMinVariationSamples);
/// Same with the residuals given directly.
VariationReport variation_check_residuals(std::span<const double> residuals, double threshold_db,
                                          std::size_t min_samples = kMinVariationSamples);

double sample_std(std::span<const double> v);
double mean(std::span<const double> v);
double median(std::vector<double> v);

}  // namespace swipesim::detect
