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

// Levenberg-Marquardt fit of the inverted-Gaussian valley model and the
// extent search built on it.

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "swipesim/detect.hpp"

namespace swipesim::detect {

double ValleyModel::operator()(double x) const {
    const double u = (x - center) / width;
    return baseline - depth * std::exp(-0.5 * u * u);
}

double ValleyModel::half_extent(double cutoff_fraction) const {
    return std::abs(width) * std::sqrt(2.0 * std::log(1.0 / cutoff_fraction));
}

namespace {

using Vec4 = Eigen::Vector4d;

ValleyModel unpack(const Vec4& p) { return {p[0], p[1], p[2], p[3]}; }

double cost_of(std::span<const double> y, const Vec4& p) {
    const ValleyModel m = unpack(p);
    double c = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - m(static_cast<double>(i));
        c += r * r;
    }
    return 0.5 * c;
}

}  // namespace

FitResult fit_valley_model(std::span<const double> y, const ValleyModel& initial, std::size_t max_iterations) {
    Vec4 p{initial.baseline, initial.depth, initial.center, initial.width};
    double cost = cost_of(y, p);
    double lambda = 1e-3;
    FitResult out;

    for (std::size_t it = 1; it <= max_iterations; ++it) {
        out.iterations = it;
        Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
        Vec4 jtr = Vec4::Zero();
        const double s = p[3];
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double dx = static_cast<double>(i) - p[2];
            const double e = std::exp(-0.5 * dx * dx / (s * s));
            const double r = y[i] - (p[0] - p[1] * e);
            // derivatives of the model with respect to (baseline, depth, center, width)
            const Vec4 j{1.0, -e, -p[1] * e * dx / (s * s), -p[1] * e * dx * dx / (s * s * s)};
            jtj.noalias() += j * j.transpose();
            jtr.noalias() += j * r;
        }

        bool improved = false;
        while (!improved) {
            Eigen::Matrix4d a = jtj;
            a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
            const Vec4 step = a.ldlt().solve(jtr);
            if (!step.allFinite()) {
                lambda *= 10.0;
            } else {
                const Vec4 trial = p + step;
                const double tc = cost_of(y, trial);
                if (std::isfinite(tc) && tc <= cost && trial[3] != 0.0) {
                    const bool tiny = step.norm() <= 1e-10 * (p.norm() + 1e-10) ||
                                      cost - tc <= 1e-14 * std::max(cost, 1e-300);
                    p = trial;
                    cost = tc;
                    lambda = std::max(lambda / 10.0, 1e-12);
                    improved = true;
                    if (tiny) {
                        out.converged = true;
                        break;
                    }
                } else {
                    lambda *= 10.0;
                }
            }
            // no downhill step left at any damping: we sit at the minimum
            if (lambda > 1e12) {
                out.converged = true;
                break;
            }
        }
        if (out.converged) break;
    }

    out.model = unpack(p);
    out.model.width = std::abs(out.model.width);
    out.cost = cost;
    return out;
}

std::optional<Extent> locate_extent(std::span<const double> y, std::span<const int> signals,
                                    const ExtentOptions& opts, std::string* why) {
    auto fail = [&](const char* reason) -> std::optional<Extent> {
        if (why) *why = reason;
        return std::nullopt;
    };
    if (signals.size() != y.size()) return fail("signal and series lengths differ");
    const auto first = std::find(signals.begin(), signals.end(), -1);
    if (first == signals.end()) return fail("no negative-signal band");
    const auto last = std::find(signals.rbegin(), signals.rend(), -1);

    const std::size_t n = y.size();
    const auto lo = static_cast<std::size_t>(first - signals.begin());
    const std::size_t band_end = n - 1 - static_cast<std::size_t>(last - signals.rbegin());
    const std::size_t hi = std::min(n, band_end + opts.search_margin + 1);

    // seed the bottom where the smoothed curve is lowest; the detector flags
    // the descending flank first, so the band alone sits off-centre
    const auto ys = moving_average(y, opts.smoothing_window);
    const auto bottom = std::min_element(ys.begin() + static_cast<std::ptrdiff_t>(lo),
                                         ys.begin() + static_cast<std::ptrdiff_t>(hi));
    const auto c0 = static_cast<std::size_t>(bottom - ys.begin());
    const double base = median({y.begin(), y.end()});
    const double dep = std::max(base - ys[c0], 1.0);
    const double half = base - 0.5 * dep;
    std::size_t l = c0;
    while (l > 0 && ys[l] < half) --l;
    std::size_t r = c0;
    while (r + 1 < n && ys[r] < half) ++r;
    // FWHM = 2.355 sigma
    const double w0 = std::max(static_cast<double>(r - l) / 2.355, 3.0);

    Extent ext;
    ext.fit = fit_valley_model(y, {base, dep, static_cast<double>(c0), w0}, opts.max_iterations);
    if (!ext.fit.converged) return fail("fit did not converge");
    const ValleyModel& m = ext.fit.model;
    if (!(m.depth > 0.0) || !std::isfinite(m.center) || m.center <= 0.0 ||
        m.center >= static_cast<double>(n - 1))
        return fail("fitted model is not a valley inside the series");

    const double h = m.half_extent(opts.cutoff_fraction);
    ext.start_pos = m.center - h;
    ext.end_pos = m.center + h;
    ext.start_idx = static_cast<std::size_t>(std::max(0.0, std::floor(ext.start_pos)));
    ext.end_idx = static_cast<std::size_t>(std::min(static_cast<double>(n - 1), std::ceil(ext.end_pos)));
    ext.valley_idx = static_cast<std::size_t>(std::lround(m.center));
    if (!(ext.start_idx < ext.valley_idx && ext.valley_idx < ext.end_idx))
        return fail("fitted valley is degenerate");
    return ext;
}

}  // namespace swipesim::detect
