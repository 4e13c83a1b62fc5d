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

#include "swipesim/record.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "swipesim/errors.hpp"

namespace swipesim {

namespace {

bool sane(double v, double lo, double hi) { return std::isfinite(v) && v >= lo && v <= hi; }

std::int16_t to_fixed(double dbm) {
    return static_cast<std::int16_t>(std::lround(dbm / kPowerQuantumDb));
}

void put_i16(Bytes& out, std::int16_t v) {
    const auto u = static_cast<std::uint16_t>(v);
    out.push_back(static_cast<std::uint8_t>(u >> 8));
    out.push_back(static_cast<std::uint8_t>(u & 0xff));
}

double get_i16(std::span<const std::uint8_t> b, std::size_t off) {
    const auto u = static_cast<std::uint16_t>((b[off] << 8) | b[off + 1]);
    return static_cast<std::int16_t>(u) * kPowerQuantumDb;
}

void check_values(const PowerRecord& rec) {
    for (std::size_t i = 0; i < rec.n(); ++i) {
        if (!sane(rec.tx_dbm[i], kTxSaneMinDbm, kTxSaneMaxDbm))
            throw FramingError("tx power out of range at probe " + std::to_string(i));
        if (!sane(rec.rx_dbm[i], kRxSaneMinDbm, kRxSaneMaxDbm))
            throw FramingError("rx power out of range at probe " + std::to_string(i));
    }
}

}  // namespace

Bytes encode_power_record(const PowerRecord& rec) {
    if (rec.tx_dbm.size() != rec.rx_dbm.size()) throw FramingError("tx/rx series length mismatch");
    if (rec.n() > std::numeric_limits<std::uint16_t>::max()) throw FramingError("too many probes");
    check_values(rec);

    Bytes out;
    out.reserve(encoded_record_size(rec.n()));
    out.push_back(static_cast<std::uint8_t>(rec.n() >> 8));
    out.push_back(static_cast<std::uint8_t>(rec.n() & 0xff));
    for (double v : rec.tx_dbm) put_i16(out, to_fixed(v));
    for (double v : rec.rx_dbm) put_i16(out, to_fixed(v));
    return out;
}

PowerRecord decode_power_record(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2) throw FramingError("record shorter than its header");
    const std::size_t n = (std::size_t{bytes[0]} << 8) | bytes[1];
    if (bytes.size() != encoded_record_size(n))
        throw FramingError("record length " + std::to_string(bytes.size()) + " does not match n = " +
                           std::to_string(n));
    PowerRecord rec;
    rec.tx_dbm.resize(n);
    rec.rx_dbm.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rec.tx_dbm[i] = get_i16(bytes, 2 + 2 * i);
        rec.rx_dbm[i] = get_i16(bytes, 2 + 2 * n + 2 * i);
    }
    check_values(rec);
    return rec;
}

PowerRecord quantize_power_record(const PowerRecord& rec) { return decode_power_record(encode_power_record(rec)); }

}  // namespace swipesim
