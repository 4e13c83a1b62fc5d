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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "swipesim/record.hpp"
#include "swipesim/rng.hpp"

/// Key agreement, session-key derivation and block encryption of power
/// records.
///
/// Curve: NIST P-256. Public points travel as 65-byte uncompressed SEC1
/// octets; the shared secret is the 32-byte x-coordinate of the product point.
/// Session keys come from HKDF-SHA256 under a fixed protocol label. Records
/// are encrypted with AES-128 in ECB mode with PKCS#7 padding. ECB is kept
/// for fidelity with the pairing design; it is not a recommendation.
namespace swipesim::crypto {

inline constexpr std::size_t kScalarBytes = 32;
inline constexpr std::size_t kPublicPointBytes = 65;
inline constexpr std::size_t kBlockBytes = 16;
inline constexpr std::size_t kHalfBytes = 8;
inline constexpr std::string_view kCurveName = "P-256";
inline constexpr std::string_view kSessionKeyLabel = "swipesim pairing v1 session key";

struct KeyPair {
    std::array<std::uint8_t, kScalarBytes> private_scalar{};
    Bytes public_point;   ///< SEC1 uncompressed
};

struct SessionKey {
    std::array<std::uint8_t, 16> bits{};
    friend bool operator==(const SessionKey&, const SessionKey&) = default;
};

/// Draws 256 bits from `rng` and reduces them into [1, order - 1].
KeyPair generate_keypair(Rng& rng);
/// Rebuilds a key pair from a big-endian private scalar in [1, order - 1].
/// Throws KeyAgreementError otherwise.
KeyPair keypair_from_private(std::span<const std::uint8_t> scalar);

/// x-coordinate of own_private · peer_public. Throws KeyAgreementError when
/// the peer point is malformed, off the curve or the point at infinity.
Bytes derive_shared_secret(std::span<const std::uint8_t> own_private,
                           std::span<const std::uint8_t> peer_public);

/// Throws KeyAgreementError on an empty secret.
SessionKey derive_session_key(std::span<const std::uint8_t> shared);

/// Raw AES-128-ECB. With pad == false the input must be block aligned.
Bytes aes128_ecb_encrypt(const SessionKey& key, std::span<const std::uint8_t> data, bool pad);
/// Throws FramingError when the length is misaligned or the padding is bad.
Bytes aes128_ecb_decrypt(const SessionKey& key, std::span<const std::uint8_t> data, bool pad);

/// Encrypts the wire encoding of `record`. The result is a whole number of
/// 16-byte blocks.
Bytes seal_power_record(const SessionKey& key, const PowerRecord& record);
/// Decrypts and decodes. Throws FramingError on bad padding or a record that
/// fails format validation.
PowerRecord open_power_record(const SessionKey& key, std::span<const std::uint8_t> ciphertext);

/// One 64-bit half of a cipher block.
struct CipherHalf {
    std::uint32_t block_index = 0;
    std::uint8_t half_index = 0;   ///< 0 = first 64 bits, 1 = second
    std::array<std::uint8_t, kHalfBytes> payload{};
    friend bool operator==(const CipherHalf&, const CipherHalf&) = default;
};

/// Block-major, half-minor order. Throws FramingError on misaligned input.
std::vector<CipherHalf> split_into_halves(std::span<const std::uint8_t> ciphertext);
/// Inverse of split_into_halves. Throws FramingError unless the halves are
/// exactly (0,0), (0,1), (1,0), ... in order.
Bytes join_halves(std::span<const CipherHalf> halves);

/// Frame: u32 big-endian block index, u8 half index, 8 payload bytes.
inline constexpr std::size_t kHalfFrameBytes = 13;
Bytes encode_half_frame(const CipherHalf& half);
/// Throws FramingError on a wrong size or a half index other than 0 or 1.
CipherHalf decode_half_frame(std::span<const std::uint8_t> frame);

}  // namespace swipesim::crypto
