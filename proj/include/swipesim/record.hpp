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
#include <cstdint>
#include <span>
#include <vector>

namespace swipesim {

using Bytes = std::vector<std::uint8_t>;

/// A device's recorded probe powers: what it transmitted and what it received
/// at each probe index.
struct PowerRecord {
    std::vector<double> tx_dbm;
    std::vector<double> rx_dbm;

    std::size_t n() const { return tx_dbm.size(); }
    friend bool operator==(const PowerRecord&, const PowerRecord&) = default;
};

/// Wire encoding: u16 big-endian probe count n, then n tx values, then n rx
/// values, each an i16 big-endian count of hundredths of a dB.
inline constexpr double kPowerQuantumDb = 0.01;
inline constexpr double kTxSaneMinDbm = -100.0;
inline constexpr double kTxSaneMaxDbm = 100.0;
inline constexpr double kRxSaneMinDbm = -200.0;
inline constexpr double kRxSaneMaxDbm = 100.0;

inline constexpr std::size_t encoded_record_size(std::size_t n) { return 2 + 4 * n; }

/// Throws FramingError when the series lengths differ, n does not fit the
/// count field or a value is outside the sanity range.
Bytes encode_power_record(const PowerRecord& rec);

/// Inverse of encode_power_record. Throws FramingError on a length mismatch
/// or an out-of-range value (this is how corrupted decryptions are caught).
PowerRecord decode_power_record(std::span<const std::uint8_t> bytes);

/// The record as it survives an encode/decode round trip.
PowerRecord quantize_power_record(const PowerRecord& rec);

}  // namespace swipesim
