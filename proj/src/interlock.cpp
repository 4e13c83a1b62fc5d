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

#include "swipesim/interlock.hpp"

#include "swipesim/errors.hpp"

namespace swipesim::crypto {

InterlockEndpoint::InterlockEndpoint(std::string name, SessionKey key, const PowerRecord& own_record,
                                     std::optional<std::size_t> expected_peer_blocks)
    : name_(std::move(name)), key_(key), own_ciphertext_(seal_power_record(key, own_record)) {
    own_halves_ = split_into_halves(own_ciphertext_);
    expected_peer_blocks_ = expected_peer_blocks.value_or(own_block_count());
    peer_first_.resize(expected_peer_blocks_);
    peer_second_.resize(expected_peer_blocks_);
}

std::vector<Bytes> InterlockEndpoint::outgoing(int phase) const {
    if (phase != 1 && phase != 2) throw PreconditionError("interlock phase must be 1 or 2");
    std::vector<Bytes> out;
    for (const auto& h : own_halves_)
        if (h.half_index == phase - 1) out.push_back(encode_half_frame(h));
    return out;
}

void InterlockEndpoint::mark_sent(int phase) {
    if (phase != 1 && phase != 2) throw PreconditionError("interlock phase must be 1 or 2");
    if (phase == 2 && !sent_[0]) throw OrderingError(name_ + " sent second halves before first halves");
    sent_[phase - 1] = true;
}

bool InterlockEndpoint::first_phase_complete() const {
    if (!sent_[0]) return false;
    for (const auto& h : peer_first_)
        if (!h) return false;
    return true;
}

void InterlockEndpoint::receive(std::span<const std::uint8_t> frame) {
    const CipherHalf h = decode_half_frame(frame);
    if (h.half_index == 1 && !first_phase_complete())
        throw OrderingError(name_ + " received a second half before the first-half phase completed");
    if (h.block_index >= expected_peer_blocks_)
        throw FramingError(name_ + " received block " + std::to_string(h.block_index) + " beyond the expected " +
                           std::to_string(expected_peer_blocks_));
    auto& slot = (h.half_index == 0 ? peer_first_ : peer_second_)[h.block_index];
    if (slot) throw FramingError(name_ + " received a duplicate half for block " + std::to_string(h.block_index));
    slot = h;
}

std::size_t InterlockEndpoint::decryptable_block_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < expected_peer_blocks_; ++i)
        if (peer_first_[i] && peer_second_[i]) ++n;
    return n;
}

PowerRecord InterlockEndpoint::peer_record() const {
    if (decryptable_block_count() != expected_peer_blocks_)
        throw FramingError(name_ + " holds " + std::to_string(decryptable_block_count()) + " of " +
                           std::to_string(expected_peer_blocks_) + " peer blocks");
    std::vector<CipherHalf> halves;
    halves.reserve(2 * expected_peer_blocks_);
    for (std::size_t i = 0; i < expected_peer_blocks_; ++i) {
        halves.push_back(*peer_first_[i]);
        halves.push_back(*peer_second_[i]);
    }
    return open_power_record(key_, join_halves(halves));
}

std::pair<PowerRecord, PowerRecord> interlock_exchange(InterlockEndpoint& a, InterlockEndpoint& b,
                                                       const FrameTap& tap, std::vector<FrameLogEntry>* log) {
    auto deliver = [&](InterlockEndpoint& from, InterlockEndpoint& to, Direction dir, int phase) {
        auto frames = from.outgoing(phase);
        from.mark_sent(phase);
        if (tap) tap(dir, phase, frames);
        for (const auto& f : frames) {
            if (log) log->push_back({phase, from.name(), to.name(), f});
            to.receive(f);
        }
    };
    for (int phase = 1; phase <= 2; ++phase) {
        deliver(a, b, Direction::AtoB, phase);
        deliver(b, a, Direction::BtoA, phase);
    }
    return {a.peer_record(), b.peer_record()};
}

}  // namespace swipesim::crypto
