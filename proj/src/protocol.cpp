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

#include "swipesim/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "swipesim/errors.hpp"

namespace swipesim::protocol {

double ProbeConfig::tx_sigma_db() const { return (tx_hi_dbm - tx_lo_dbm) / std::sqrt(12.0); }

void ProbeConfig::validate() const {
    if (n < 2) throw ConfigError("must be >= 2", "n_probes");
    if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) throw ConfigError("must be > 0", "rate_hz");
    if (!std::isfinite(tx_lo_dbm) || !std::isfinite(tx_hi_dbm) || tx_lo_dbm > tx_hi_dbm)
        throw ConfigError("need finite lo <= hi", "tx_range_dbm");
    if (tx_lo_dbm < kTxSaneMinDbm || tx_hi_dbm > kTxSaneMaxDbm)
        throw ConfigError("outside the representable power range", "tx_range_dbm");
}

double snap_to_power_grid(double dbm) { return std::ldexp(std::nearbyint(std::ldexp(dbm, 32)), -32); }

std::vector<double> draw_tx_powers(std::size_t n, double lo, double hi, Rng& rng) {
    std::vector<double> tx(n, snap_to_power_grid(lo));
    if (hi > lo) {
        std::uniform_real_distribution<double> u(lo, hi);
        for (auto& v : tx) v = snap_to_power_grid(u(rng));
    }
    return tx;
}

LinkExchange exchange_probes(std::span<const double> d, const chan::EnvironmentChannel& env,
                             std::span<const double> tx_initiator, std::span<const double> tx_responder,
                             double sigma_meas_responder, double sigma_meas_initiator, Rng& rng) {
    const std::size_t n = d.size();
    if (tx_initiator.size() != n || tx_responder.size() != n)
        throw PreconditionError("probe inputs differ in length");
    LinkExchange out;
    out.distance_m.assign(d.begin(), d.end());
    out.fading_db.resize(n);
    out.rx_at_responder.resize(n);
    out.rx_at_initiator.resize(n);
    const bool whole_db = env.channel.quantize_rssi_1db;
    for (std::size_t i = 0; i < n; ++i) {
        const auto s = chan::sample_reciprocal(d[i], env.at(d[i]), sigma_meas_responder, sigma_meas_initiator, rng);
        out.fading_db[i] = s.fading_db;
        double rx_r = tx_initiator[i] - snap_to_power_grid(s.pathloss_fwd_db);
        double rx_i = tx_responder[i] - snap_to_power_grid(s.pathloss_rev_db);
        if (whole_db) {
            rx_r = std::nearbyint(rx_r);
            rx_i = std::nearbyint(rx_i);
        }
        out.rx_at_responder[i] = rx_r;
        out.rx_at_initiator[i] = rx_i;
    }
    return out;
}

std::vector<double> probe_times(const ProbeConfig& cfg) {
    std::vector<double> t(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) t[i] = static_cast<double>(i) / cfg.rate_hz;
    return t;
}

namespace {

std::vector<double> path_distances(const chan::Trajectory& traj, std::span<const double> times,
                                   const chan::Vec3& anchor) {
    std::vector<double> d(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) d[i] = (chan::position_at(traj, times[i]) - anchor).norm();
    return d;
}

}  // namespace

ProbeStageResult run_probe_stage(const chan::Trajectory& traj, const chan::EnvironmentChannel& env,
                                 const ProbeConfig& cfg, Rng& rng) {
    cfg.validate();
    ProbeStageResult r;
    r.times_s = probe_times(cfg);
    r.distance_m = path_distances(traj, r.times_s, {});
    const auto tx_a = draw_tx_powers(cfg.n, cfg.tx_lo_dbm, cfg.tx_hi_dbm, rng);
    const auto tx_b = draw_tx_powers(cfg.n, cfg.tx_lo_dbm, cfg.tx_hi_dbm, rng);
    const double sm = env.channel.sigma_meas_db;
    auto link = exchange_probes(r.distance_m, env, tx_a, tx_b, sm, sm, rng);
    r.fading_db = std::move(link.fading_db);
    r.a = {tx_a, std::move(link.rx_at_initiator)};
    r.b = {tx_b, std::move(link.rx_at_responder)};
    return r;
}

ProbeStageResult run_probe_stage(const chan::Trajectory& traj, const chan::ChannelParams& params,
                                 const ProbeConfig& cfg, Rng& rng) {
    chan::EnvironmentChannel env;
    env.name = "custom";
    env.channel = params;
    return run_probe_stage(traj, env, cfg, rng);
}

PathlossSeries compute_pathloss(std::span<const double> own_tx, std::span<const double> peer_rx_claimed,
                                std::span<const double> peer_tx_claimed, std::span<const double> own_rx,
                                std::span<const double> times_s) {
    const std::size_t n = own_tx.size();
    if (peer_rx_claimed.size() != n || peer_tx_claimed.size() != n || own_rx.size() != n || times_s.size() != n)
        throw FramingError("power series lengths differ");
    PathlossSeries s;
    s.pl_fwd_db.resize(n);
    s.pl_rev_db.resize(n);
    s.times_s.assign(times_s.begin(), times_s.end());
    for (std::size_t i = 0; i < n; ++i) {
        s.pl_fwd_db[i] = own_tx[i] - peer_rx_claimed[i];
        s.pl_rev_db[i] = peer_tx_claimed[i] - own_rx[i];
    }
    return s;
}

std::string_view to_string(FailedCheck f) {
    switch (f) {
        case FailedCheck::None: return "none";
        case FailedCheck::ValleyShape: return "valley-shape";
        case FailedCheck::FadingVariation: return "fading-variation";
        case FailedCheck::KeyAgreement: return "key-agreement";
        case FailedCheck::InterlockOrdering: return "interlock-ordering";
        case FailedCheck::Framing: return "framing";
    }
    return "unknown";
}

std::string_view to_string(VariationMode m) { return m == VariationMode::Both ? "both" : "pooled"; }

VariationMode parse_variation_mode(std::string_view name) {
    if (name == "both") return VariationMode::Both;
    if (name == "pooled") return VariationMode::Pooled;
    throw ConfigError("expected 'both' or 'pooled'", "variation_mode");
}

void AuthParams::validate() const {
    detector.validate();
    gates.validate();
    if (!(extent.cutoff_fraction > 0.0 && extent.cutoff_fraction < 1.0))
        throw ConfigError("must lie in (0, 1)", "detector.cutoff_fraction");
    if (extent.max_iterations == 0) throw ConfigError("must be > 0", "detector.max_iterations");
    if (!(variation_threshold_db > 0.0) || !std::isfinite(variation_threshold_db))
        throw ConfigError("must be > 0", "variation_threshold_db");
    if (min_variation_samples < 2) throw ConfigError("must be >= 2", "min_variation_samples");
}

AuthResult authenticate(const PathlossSeries& series, const AuthParams& params) {
    const std::size_t n = series.pl_fwd_db.size();
    if (series.pl_rev_db.size() != n || series.times_s.size() != n)
        throw FramingError("pathloss series lengths differ");
    if (n <= params.detector.lag)
        throw ConfigError("series of " + std::to_string(n) + " probes is not longer than the lag", "detector.lag");

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = 0.5 * (series.pl_fwd_db[i] + series.pl_rev_db[i]);
    const double span_s = series.times_s.back() - series.times_s.front();
    const double rate = span_s > 0.0 ? static_cast<double>(n - 1) / span_s : 1.0;

    AuthResult r;
    r.valley = detect::analyze_valley(y, params.detector, params.extent, rate);
    if (r.valley.found) r.valley.width_s = series.times_s[r.valley.end_idx] - series.times_s[r.valley.start_idx];
    r.valley_pass = detect::check_valley_geometry(r.valley, params.gates);

    const double thr = params.variation_threshold_db;
    if (r.valley.found) {
        const std::size_t lo = r.valley.start_idx;
        const std::size_t m = r.valley.end_idx - lo + 1;
        std::vector<double> rf(m), rr(m), pooled;
        pooled.reserve(2 * m);
        for (std::size_t k = 0; k < m; ++k) {
            const double fit = r.valley.model(static_cast<double>(lo + k));
            rf[k] = series.pl_fwd_db[lo + k] - fit;
            rr[k] = series.pl_rev_db[lo + k] - fit;
        }
        pooled.insert(pooled.end(), rf.begin(), rf.end());
        pooled.insert(pooled.end(), rr.begin(), rr.end());
        r.fwd = detect::variation_check_residuals(rf, thr, params.min_variation_samples);
        r.rev = detect::variation_check_residuals(rr, thr, params.min_variation_samples);
        r.pooled = detect::variation_check_residuals(pooled, thr, 2 * params.min_variation_samples);
    } else {
        for (auto* v : {&r.fwd, &r.rev, &r.pooled}) {
            v->threshold_db = thr;
            v->residual_std_db = std::numeric_limits<double>::infinity();
            v->reason = "no valley";
        }
    }
    if (params.mode == VariationMode::Both) {
        r.variation_pass = r.fwd.pass && r.rev.pass;
        r.decision_std_db = std::max(r.fwd.residual_std_db, r.rev.residual_std_db);
    } else {
        r.variation_pass = r.pooled.pass;
        r.decision_std_db = r.pooled.residual_std_db;
    }
    r.accepted = r.valley_pass && r.variation_pass;
    r.failed_check = !r.valley_pass       ? FailedCheck::ValleyShape
                     : !r.variation_pass ? FailedCheck::FadingVariation
                                         : FailedCheck::None;
    return r;
}

void PairingSetup::validate() const {
    trajectory.validate();
    environment.channel.validate();
    probe.validate();
    auth_a.validate();
    auth_b.validate();
    if (static_cast<double>(probe.n - 1) / probe.rate_hz > trajectory.duration_s)
        throw ConfigError("probing outlasts the trajectory duration", "n_probes");
    if (probe.n <= std::max(auth_a.detector.lag, auth_b.detector.lag))
        throw ConfigError("probe count must exceed the detector lag", "n_probes");
    if (attacker) {
        attacker->validate();
        if (attacker->kind == adversary::AttackerKind::FixedPowerExploit && probe.tx_randomized())
            throw ConfigError("the fixed-power exploit needs a fixed transmit power", "attacker.kind");
    }
}

namespace {

struct Keys {
    crypto::SessionKey a;   ///< A's session key (with B, or with M)
    crypto::SessionKey b;
    crypto::SessionKey m_with_a;
    crypto::SessionKey m_with_b;
};

crypto::SessionKey agree(const crypto::KeyPair& own, const Bytes& peer_public) {
    return crypto::derive_session_key(crypto::derive_shared_secret(own.private_scalar, peer_public));
}

PairingOutcome reject(PairingOutcome o, FailedCheck f, std::string detail) {
    o.accepted = false;
    o.failed_check = f;
    o.detail = std::move(detail);
    return o;
}

adversary::FalsifiedReport falsify(const adversary::AttackerProfile& atk, const PairingSetup& s,
                                   std::span<const double> true_tx, std::span<const double> true_rx,
                                   std::span<const double> d_vm, std::span<const double> d_target,
                                   Rng& estimate_rng, Rng& tamper_rng) {
    using adversary::AttackerKind;
    const auto& ch = s.environment.channel;
    switch (atk.kind) {
        case AttackerKind::General:
            return adversary::general_report(true_tx, true_rx);
        case AttackerKind::Advanced: {
            const auto vm = adversary::estimate_distances(d_vm, atk.sigma_d, estimate_rng);
            const auto tg = adversary::estimate_distances(d_target, atk.sigma_d, estimate_rng);
            return adversary::advanced_report(true_tx, true_rx, vm, tg, ch.alpha);
        }
        case AttackerKind::Supreme:
            return adversary::supreme_report(true_tx, true_rx, d_vm, d_target, ch.alpha);
        case AttackerKind::FixedPowerExploit:
            return adversary::fixed_power_exploit(s.probe.tx_lo_dbm, true_tx, true_rx, d_vm, d_target, ch,
                                                  s.probe.tx_randomized());
        case AttackerKind::Averaging:
            return adversary::averaging_attack(true_tx, true_rx, d_vm, d_target, ch,
                                               atk.dither ? &tamper_rng : nullptr, atk.dither_db);
    }
    throw PreconditionError("unhandled attacker kind");
}

}  // namespace

PairingOutcome pair(const PairingSetup& setup, std::uint64_t session_seed) {
    setup.validate();
    const auto& cfg = setup.probe;
    const auto& env = setup.environment;
    const auto& atk = setup.attacker;

    PairingOutcome out;
    Transcript& tr = out.transcript;
    tr.probe = cfg;
    tr.attacker = atk ? std::string(adversary::to_string(atk->kind)) : "none";
    tr.times_s = probe_times(cfg);

    // Stage 1a: public keys travel with the probes
    auto rng_ka = make_stream(session_seed, Stream::KeysA);
    auto rng_kb = make_stream(session_seed, Stream::KeysB);
    auto rng_km = make_stream(session_seed, Stream::KeysM);
    const auto key_a = crypto::generate_keypair(rng_ka);
    const auto key_b = crypto::generate_keypair(rng_kb);
    std::optional<crypto::KeyPair> key_m;
    if (atk) key_m = crypto::generate_keypair(rng_km);
    tr.a_public = key_a.public_point;
    tr.b_public = key_b.public_point;
    if (key_m) tr.m_public = key_m->public_point;

    Keys keys;
    try {
        Bytes seen_by_a = key_m ? key_m->public_point : key_b.public_point;
        if (setup.tamper_public_key) setup.tamper_public_key(seen_by_a);
        keys.a = agree(key_a, seen_by_a);
        keys.b = agree(key_b, key_m ? key_m->public_point : key_a.public_point);
        if (key_m) {
            keys.m_with_a = agree(*key_m, key_a.public_point);
            keys.m_with_b = agree(*key_m, key_b.public_point);
        }
    } catch (const KeyAgreementError& e) {
        return reject(std::move(out), FailedCheck::KeyAgreement, e.what());
    }

    // Stage 1b: randomized-power probing
    auto rng_ta = make_stream(session_seed, Stream::TxPowerA);
    auto rng_tb = make_stream(session_seed, Stream::TxPowerB);
    const auto tx_a = draw_tx_powers(cfg.n, cfg.tx_lo_dbm, cfg.tx_hi_dbm, rng_ta);
    const auto tx_b = draw_tx_powers(cfg.n, cfg.tx_lo_dbm, cfg.tx_hi_dbm, rng_tb);
    const double sm = env.channel.sigma_meas_db;
    const auto d_ab = path_distances(setup.trajectory, tr.times_s, {});

    PowerRecord rec_a;
    PowerRecord rec_b;
    std::optional<PowerRecord> to_a;
    std::optional<PowerRecord> to_b;
    if (!atk) {
        auto rng = make_stream(session_seed, Stream::LinkAB);
        auto link = exchange_probes(d_ab, env, tx_a, tx_b, sm, sm, rng);
        rec_a = {tx_a, std::move(link.rx_at_initiator)};
        rec_b = {tx_b, std::move(link.rx_at_responder)};
    } else {
        auto rng_tm = make_stream(session_seed, Stream::TxPowerM);
        const auto tx_m_a = draw_tx_powers(cfg.n, cfg.tx_lo_dbm, cfg.tx_hi_dbm, rng_tm);
        const auto tx_m_b = draw_tx_powers(cfg.n, cfg.tx_lo_dbm, cfg.tx_hi_dbm, rng_tm);
        const auto d_am = path_distances(setup.trajectory, tr.times_s, atk->position);
        const std::vector<double> d_bm(cfg.n, atk->position.norm());
        const double snm = atk->measurement_noise_db;

        auto rng_am = make_stream(session_seed, Stream::LinkAM);
        auto rng_bm = make_stream(session_seed, Stream::LinkBM);
        auto am = exchange_probes(d_am, env, tx_a, tx_m_a, snm, sm, rng_am);
        auto bm = exchange_probes(d_bm, env, tx_m_b, tx_b, sm, snm, rng_bm);
        rec_a = {tx_a, am.rx_at_initiator};
        rec_b = {tx_b, bm.rx_at_responder};

        auto rng_est = make_stream(session_seed, Stream::AttackerEstimate);
        auto rng_tamper = make_stream(session_seed, Stream::AttackerTamper);
        auto fa = falsify(*atk, setup, tx_m_a, am.rx_at_responder, d_am, d_ab, rng_est, rng_tamper);
        auto fb = falsify(*atk, setup, tx_m_b, bm.rx_at_initiator, d_bm, d_ab, rng_est, rng_tamper);
        to_a = PowerRecord{std::move(fa.tx_claimed_dbm), std::move(fa.rx_claimed_dbm)};
        to_b = PowerRecord{std::move(fb.tx_claimed_dbm), std::move(fb.rx_claimed_dbm)};
    }

    // Stage 2: interlock exchange of the sealed records
    try {
        // devices keep powers at wire resolution, so what they seal is what they use
        rec_a = quantize_power_record(rec_a);
        rec_b = quantize_power_record(rec_b);
        tr.a_record = rec_a;
        tr.b_record = rec_b;
        if (!atk) {
            crypto::InterlockEndpoint ea("A", keys.a, rec_a);
            crypto::InterlockEndpoint eb("B", keys.b, rec_b);
            std::tie(tr.a_received, tr.b_received) = crypto::interlock_exchange(ea, eb, setup.interlock_tap, &tr.frames);
        } else {
            to_a = quantize_power_record(*to_a);
            to_b = quantize_power_record(*to_b);
            tr.claimed_to_a = to_a;
            tr.claimed_to_b = to_b;
            crypto::InterlockEndpoint ea("A", keys.a, rec_a);
            crypto::InterlockEndpoint ma("M", keys.m_with_a, *to_a);
            tr.a_received = crypto::interlock_exchange(ea, ma, setup.interlock_tap, &tr.frames).first;
            crypto::InterlockEndpoint mb("M", keys.m_with_b, *to_b);
            crypto::InterlockEndpoint eb("B", keys.b, rec_b);
            tr.b_received = crypto::interlock_exchange(mb, eb, {}, &tr.frames).second;
        }
    } catch (const OrderingError& e) {
        return reject(std::move(out), FailedCheck::InterlockOrdering, e.what());
    } catch (const FramingError& e) {
        return reject(std::move(out), FailedCheck::Framing, e.what());
    }

    // Stage 3: bidirectional pathloss on each side
    PathlossSeries sa;
    PathlossSeries sb;
    try {
        sa = compute_pathloss(rec_a.tx_dbm, tr.a_received.rx_dbm, tr.a_received.tx_dbm, rec_a.rx_dbm, tr.times_s);
        sb = compute_pathloss(rec_b.tx_dbm, tr.b_received.rx_dbm, tr.b_received.tx_dbm, rec_b.rx_dbm, tr.times_s);
    } catch (const FramingError& e) {
        return reject(std::move(out), FailedCheck::Framing, e.what());
    }

    // Stage 4: both sides must pass both checks
    out.auth_a = authenticate(sa, setup.auth_a);
    out.auth_b = authenticate(sb, setup.auth_b);
    out.series_a = std::move(sa);
    out.series_b = std::move(sb);
    out.accepted = out.auth_a->accepted && out.auth_b->accepted;
    if (!out.auth_a->accepted) {
        out.failed_check = out.auth_a->failed_check;
        out.detail = "device A";
    } else if (!out.auth_b->accepted) {
        out.failed_check = out.auth_b->failed_check;
        out.detail = "device B";
    }
    return out;
}

}  // namespace swipesim::protocol
