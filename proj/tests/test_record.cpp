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

#include <gtest/gtest.h>

#include <random>

#include "swipesim/errors.hpp"
#include "swipesim/record.hpp"

using namespace swipesim;

TEST(Record, GoldenBytes) {
    PowerRecord r{{1.5, -2.0}, {-40.25, 0.01}};
    const Bytes expect = {0x00, 0x02,               // n
                          0x00, 0x96, 0xff, 0x38,   // 150, -200
                          0xf0, 0x47, 0x00, 0x01};  // -4025, 1
    EXPECT_EQ(encode_power_record(r), expect);
    EXPECT_EQ(decode_power_record(expect), r);
}

TEST(Record, RoundTripAtWireResolution) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> tx(0.0, 30.0), rx(-90.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        PowerRecord r;
        const int n = 1 + trial % 600;
        for (int i = 0; i < n; ++i) {
            r.tx_dbm.push_back(tx(rng));
            r.rx_dbm.push_back(rx(rng));
        }
        const auto bytes = encode_power_record(r);
        ASSERT_EQ(bytes.size(), encoded_record_size(r.n()));
        const auto back = decode_power_record(bytes);
        for (int i = 0; i < n; ++i) {
            EXPECT_NEAR(back.tx_dbm[i], r.tx_dbm[i], kPowerQuantumDb / 2 + 1e-12);
            EXPECT_NEAR(back.rx_dbm[i], r.rx_dbm[i], kPowerQuantumDb / 2 + 1e-12);
        }
        // Quantization is idempotent.
        EXPECT_EQ(quantize_power_record(back), back);
    }
}

TEST(Record, EmptyRecord) {
    const auto b = encode_power_record({});
    EXPECT_EQ(b, (Bytes{0, 0}));
    EXPECT_EQ(decode_power_record(b).n(), 0u);
}

TEST(Record, RejectsMalformed) {
    EXPECT_THROW(encode_power_record({{1.0}, {}}), FramingError);
    EXPECT_THROW(encode_power_record({{150.0}, {0.0}}), FramingError);
    EXPECT_THROW(encode_power_record({{0.0}, {-250.0}}), FramingError);
    EXPECT_THROW(decode_power_record(Bytes{0x00}), FramingError);
    EXPECT_THROW(decode_power_record(Bytes{0x00, 0x01, 0x00}), FramingError);
    // 0x7fff hundredths is 327.67 dBm, outside the tx range.
    EXPECT_THROW(decode_power_record(Bytes{0x00, 0x01, 0x7f, 0xff, 0x00, 0x00}), FramingError);
}
