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
#include <random>

namespace swipesim {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive well-separated seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of Monte-Carlo run `index` under `base_seed`. Each run's seed depends
/// only on (base_seed, index), so any subset of runs can be replayed alone.
constexpr std::uint64_t derive_run_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(base_seed) ^ splitmix64(index + 0x5851f42d4c957f2dULL));
}

/// Independent random streams within one pairing session. Every consumer
/// draws from its own stream so that e.g. switching the attacker strategy does
/// not shift the channel draws.
enum class Stream : std::uint64_t {
    LinkAB = 1,
    LinkAM = 2,
    LinkBM = 3,
    TxPowerA = 4,
    TxPowerB = 5,
    TxPowerM = 6,
    MeasA = 7,
    MeasB = 8,
    MeasM = 9,
    KeysA = 10,
    KeysB = 11,
    KeysM = 12,
    AttackerEstimate = 13,
    AttackerTamper = 14,
};

inline Rng make_stream(std::uint64_t session_seed, Stream stream) {
    return Rng{splitmix64(session_seed ^ splitmix64(static_cast<std::uint64_t>(stream) << 32))};
}

}  // namespace swipesim
