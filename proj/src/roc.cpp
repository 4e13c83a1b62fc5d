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

#include <algorithm>
#include <cmath>
#include <limits>

#include "swipesim/errors.hpp"
#include "swipesim/harness.hpp"

namespace swipesim::harness {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> normalized_sorted(const std::vector<double>& v) {
    std::vector<double> out(v);
    for (auto& x : out)
        if (std::isnan(x)) x = kInf;
    std::sort(out.begin(), out.end());
    return out;
}

void require_nonempty(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw PreconditionError("ROC needs nonempty legit and attack populations");
}

// fraction of sorted values strictly greater than t
double frac_above(const std::vector<double>& sorted, double t) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
    return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
}

}  // namespace

std::vector<RocPoint> roc_curve(const std::vector<double>& legit_stds, const std::vector<double>& attack_stds,
                                const std::vector<double>& thresholds) {
    require_nonempty(legit_stds, attack_stds);
    const auto l = normalized_sorted(legit_stds);
    const auto a = normalized_sorted(attack_stds);
    std::vector<RocPoint> out;
    out.reserve(thresholds.size());
    for (double t : thresholds) out.push_back({t, frac_above(l, t), frac_above(a, t)});
    return out;
}

std::vector<double> threshold_sweep(const std::vector<double>& legit_stds, const std::vector<double>& attack_stds,
                                    std::size_t count) {
    double lo = kInf, hi = -kInf;
    for (const auto* pop : {&legit_stds, &attack_stds})
        for (double x : *pop)
            if (std::isfinite(x)) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
    if (!std::isfinite(lo)) return {0.0};
    if (count < 2 || hi == lo) return {lo};
    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i)
        t[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return t;
}

std::vector<RocPoint> empirical_roc(const std::vector<double>& legit_stds, const std::vector<double>& attack_stds) {
    require_nonempty(legit_stds, attack_stds);
    std::vector<double> cuts = normalized_sorted(legit_stds);
    const auto a = normalized_sorted(attack_stds);
    cuts.insert(cuts.end(), a.begin(), a.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<RocPoint> out{{-kInf, 1.0, 1.0}};
    const auto curve = roc_curve(legit_stds, attack_stds, cuts);
    out.insert(out.end(), curve.begin(), curve.end());
    if (out.back().fpr != 0.0 || out.back().tpr != 0.0) out.push_back({kInf, 0.0, 0.0});
    return out;
}

double auc(const std::vector<double>& legit_stds, const std::vector<double>& attack_stds) {
    require_nonempty(legit_stds, attack_stds);
    const auto l = normalized_sorted(legit_stds);
    double wins = 0.0;
    for (double x : normalized_sorted(attack_stds)) {
        const auto lo = std::lower_bound(l.begin(), l.end(), x);
        const auto hi = std::upper_bound(l.begin(), l.end(), x);
        wins += static_cast<double>(lo - l.begin()) + 0.5 * static_cast<double>(hi - lo);
    }
    return wins / (static_cast<double>(l.size()) * static_cast<double>(attack_stds.size()));
}

bool meets_target(const std::vector<RocPoint>& curve, double max_fpr, double min_tpr) {
    return std::any_of(curve.begin(), curve.end(),
                       [&](const RocPoint& p) { return p.fpr < max_fpr && p.tpr > min_tpr; });
}

Calibration calibrate_threshold(const std::vector<double>& legit_stds, const std::vector<double>& attack_stds,
                                double target_fpr, double target_tpr) {
    require_nonempty(legit_stds, attack_stds);
    const auto l = normalized_sorted(legit_stds);
    const auto a = normalized_sorted(attack_stds);
    const auto nl = l.size();

    // smallest threshold whose false-positive rate is within target
    const auto allowed = static_cast<std::size_t>(std::floor(target_fpr * static_cast<double>(nl) + 1e-9));
    double t_min = allowed >= nl ? -kInf : l[nl - 1 - allowed];
    if (!std::isfinite(t_min) && t_min > 0) {
        // too many legitimate runs without a valley: no finite threshold works
        double best = -kInf;
        for (double x : l)
            if (std::isfinite(x)) best = std::max(best, x);
        Calibration c;
        c.threshold_db = std::isfinite(best) ? best : 0.0;
        c.fpr = frac_above(l, c.threshold_db);
        c.tpr = frac_above(a, c.threshold_db);
        c.interval_lo = c.interval_hi = c.threshold_db;
        return c;
    }
    if (!std::isfinite(t_min)) t_min = std::min(l.front(), a.front()) - 1.0;

    // tpr stays constant until the next attack value; within that stretch push
    // the threshold past as many legitimate values as possible
    const auto next_a = std::upper_bound(a.begin(), a.end(), t_min);
    double hi = next_a == a.end() ? kInf : *next_a;
    double lo = t_min;
    const auto below_hi = std::lower_bound(l.begin(), l.end(), hi);
    if (below_hi != l.begin()) lo = std::max(lo, *(below_hi - 1));

    Calibration c;
    c.interval_lo = lo;
    c.interval_hi = hi;
    c.threshold_db = std::isfinite(hi) ? 0.5 * (lo + hi) : lo;
    c.fpr = frac_above(l, c.threshold_db);
    c.tpr = frac_above(a, c.threshold_db);
    c.feasible = c.fpr <= target_fpr && c.tpr >= target_tpr;
    return c;
}

}  // namespace swipesim::harness
