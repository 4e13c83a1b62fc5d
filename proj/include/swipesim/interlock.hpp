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
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swipesim/crypto.hpp"

/// Interlock exchange of sealed power records. Each cipher block travels as
/// two half frames; no second half is accepted until the receiver has both
/// sent and received every first half.
namespace swipesim::crypto {

struct FrameLogEntry {
    int phase = 0;         ///< 1 or 2
    std::string from;      ///< endpoint name
    std::string to;
    Bytes frame;
};

class InterlockEndpoint {
public:
    /// Seals `own_record`. `expected_peer_blocks` defaults to the own block
    /// count (both sides record the same number of probes).
    InterlockEndpoint(std::string name, SessionKey key, const PowerRecord& own_record,
                      std::optional<std::size_t> expected_peer_blocks = std::nullopt);

    const std::string& name() const { return name_; }
    std::size_t own_block_count() const { return own_halves_.size() / 2; }
    std::size_t expected_peer_blocks() const { return expected_peer_blocks_; }
    const Bytes& own_ciphertext() const { return own_ciphertext_; }

    /// Frames this endpoint sends in phase 1 (first halves) or 2 (second halves).
    std::vector<Bytes> outgoing(int phase) const;
    void mark_sent(int phase);

    /// Own first halves sent and every expected peer first half received.
    bool first_phase_complete() const;

    /// Throws OrderingError for an early second half and FramingError for a
    /// malformed, duplicate or out-of-range frame.
    void receive(std::span<const std::uint8_t> frame);

    /// Peer blocks for which both halves have arrived. Only these could be
    /// decrypted; a lone half carries no decryptable block.
    std::size_t decryptable_block_count() const;

    /// Reassembles, decrypts and decodes the peer record. Throws FramingError
    /// if halves are missing or the plaintext fails validation.
    PowerRecord peer_record() const;

private:
    std::string name_;
    SessionKey key_;
    Bytes own_ciphertext_;
    std::vector<CipherHalf> own_halves_;
    std::size_t expected_peer_blocks_;
    bool sent_[2] = {false, false};
    std::vector<std::optional<CipherHalf>> peer_first_;
    std::vector<std::optional<CipherHalf>> peer_second_;
};

enum class Direction { AtoB, BtoA };

/// Optional hook that sees each direction's batch of frames for a phase and
/// may rewrite it (substitute, drop, inject, reorder). Used to model tampering.
using FrameTap = std::function<void(Direction, int phase, std::vector<Bytes>& frames)>;

/// Runs both phases between two endpoints: phase 1 delivers first halves A to
/// B then B to A, phase 2 the second halves. Returns the records each side
/// recovered as (record A recovered from B, record B recovered from A).
/// Ordering and framing violations propagate as exceptions.
std::pair<PowerRecord, PowerRecord> interlock_exchange(InterlockEndpoint& a, InterlockEndpoint& b,
                                                       const FrameTap& tap = {},
                                                       std::vector<FrameLogEntry>* log = nullptr);

}  // namespace swipesim::crypto
