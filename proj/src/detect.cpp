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

#include "swipesim/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swipesim/errors.hpp"

namespace swipesim::detect {

void ValleyDetectionParams::validate() const {
    if (lag < 2) throw ConfigError("must be >= 2", "detector.lag");
    if (!(threshold > 0.0) || !std::isfinite(threshold)) throw ConfigError("must be > 0", "detector.threshold");
    if (!(influence >= 0.0 && influence <= 1.0)) throw ConfigError("must lie in [0, 1]", "detector.influence");
}

double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

SignalTrace detect_signals_trace(std::span<const double> y, const ValleyDetectionParams& p) {
    p.validate();
    const std::size_t n = y.size();
    const std::size_t lag = p.lag;
    if (n <= lag)
        throw ConfigError("series of " + std::to_string(n) + " samples is not longer than the lag", "detector.lag");

    SignalTrace t;
    t.signals.assign(n, 0);
    t.filtered.assign(y.begin(), y.end());
    t.avg.assign(n, 0.0);
    t.stdev.assign(n, 0.0);

    auto window_stats = [&](std::size_t i) {
        const std::span<const double> w(t.filtered.data() + (i + 1 - lag), lag);
        t.avg[i] = mean(w);
        t.stdev[i] = sample_std(w);
    };
    window_stats(lag - 1);

    for (std::size_t i = lag; i < n; ++i) {
        const double dev = y[i] - t.avg[i - 1];
        if (std::abs(dev) > p.threshold * t.stdev[i - 1]) {
            t.signals[i] = y[i] > t.avg[i - 1] ? 1 : -1;
            t.filtered[i] = p.influence * y[i] + (1.0 - p.influence) * t.filtered[i - 1];
        } else {
            t.filtered[i] = y[i];
        }
        window_stats(i);
    }
    return t;
}

std::vector<int> detect_signals(std::span<const double> y, const ValleyDetectionParams& p) {
    return detect_signals_trace(y, p).signals;
}

std::vector<double> moving_average(std::span<const double> y, std::size_t width) {
    if (width <= 1 || y.empty()) return {y.begin(), y.end()};
    const auto n = static_cast<std::ptrdiff_t>(y.size());
    const auto left = static_cast<std::ptrdiff_t>(width / 2);
    std::vector<double> out(y.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::ptrdiff_t k = i - left; k < i - left + static_cast<std::ptrdiff_t>(width); ++k)
            s += y[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, n - 1))];
        out[static_cast<std::size_t>(i)] = s / static_cast<double>(width);
    }
    return out;
}

void ValleyGates::validate() const {
    if (!(min_depth_db >= 0.0)) throw ConfigError("must be >= 0", "gates.min_depth_db");
    if (!(min_peak_db <= max_peak_db)) throw ConfigError("min_peak_db exceeds max_peak_db", "gates.min_peak_db");
    if (!(min_width_s >= 0.0 && min_width_s <= max_width_s))
        throw ConfigError("need 0 <= min_width_s <= max_width_s", "gates.min_width_s");
    if (!std::isfinite(max_valley_level_db)) throw ConfigError("must be finite", "gates.max_valley_level_db");
}

ValleyReport analyze_valley(std::span<const double> y, const ValleyDetectionParams& p, const ExtentOptions& opts,
                            double rate_hz) {
    ValleyReport r;
    // detection runs on the smoothed series; the fit itself sees raw data
    const auto smoothed = moving_average(y, opts.smoothing_window);
    const auto signals = detect_signals(smoothed, p);
    ExtentOptions o = opts;
    o.search_margin = p.lag;
    auto ext = locate_extent(y, signals, o, &r.reason);
    if (!ext) return r;

    r.found = true;
    r.start_idx = ext->start_idx;
    r.end_idx = ext->end_idx;
    r.valley_idx = ext->valley_idx;
    r.model = ext->fit.model;
    r.depth_db = r.model.depth;
    r.peak_level_db = r.model.baseline;
    r.valley_level_db = r.model.baseline - r.model.depth;
    r.width_s = static_cast<double>(r.end_idx - r.start_idx) / rate_hz;
    return r;
}

bool check_valley_geometry(const ValleyReport& report, const ValleyGates& g) {
    if (!report.found) return false;
    return report.depth_db >= g.min_depth_db && report.valley_level_db <= g.max_valley_level_db &&
           report.peak_level_db >= g.min_peak_db && report.peak_level_db <= g.max_peak_db &&
           report.width_s >= g.min_width_s && report.width_s <= g.max_width_s;
}

VariationReport variation_check_residuals(std::span<const double> residuals, double threshold_db,
                                          std::size_t min_samples) {
    VariationReport r;
    r.threshold_db = threshold_db;
    r.samples = residuals.size();
    if (residuals.size() < std::max<std::size_t>(min_samples, 2)) {
        r.residual_std_db = std::numeric_limits<double>::infinity();
        r.reason = "extent holds " + std::to_string(residuals.size()) + " samples, need " +
                   std::to_string(std::max<std::size_t>(min_samples, 2));
        return r;
    }
    r.residual_std_db = sample_std(residuals);
    r.pass = r.residual_std_db <= threshold_db;
    return r;
}

VariationReport variation_check(std::span<const double> y, std::span<const double> model, double threshold_db,
                                std::size_t min_samples) {
    if (y.size() != model.size()) throw PreconditionError("series and model lengths differ");
    std::vector<double> res(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) res[i] = y[i] - model[i];
    return variation_check_residuals(res, threshold_db, min_samples);
}

}  // namespace swipesim::detect
