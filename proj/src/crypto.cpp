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

#include "swipesim/crypto.hpp"

#include <algorithm>
#include <memory>
#include <string>

#include <openssl/bn.h>
#include <openssl/core_names.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/kdf.h>
#include <openssl/obj_mac.h>
#include <openssl/params.h>

#include "swipesim/errors.hpp"

namespace swipesim::crypto {

namespace {

template <auto Fn>
struct Deleter {
    template <typename T>
    void operator()(T* p) const { Fn(p); }
};

using BnCtx = std::unique_ptr<BN_CTX, Deleter<BN_CTX_free>>;
using Bn = std::unique_ptr<BIGNUM, Deleter<BN_clear_free>>;
using Group = std::unique_ptr<EC_GROUP, Deleter<EC_GROUP_free>>;
using Point = std::unique_ptr<EC_POINT, Deleter<EC_POINT_free>>;
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, Deleter<EVP_CIPHER_CTX_free>>;
using Kdf = std::unique_ptr<EVP_KDF, Deleter<EVP_KDF_free>>;
using KdfCtx = std::unique_ptr<EVP_KDF_CTX, Deleter<EVP_KDF_CTX_free>>;

Group p256() {
    Group g{EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1)};
    if (!g) throw KeyAgreementError("P-256 group unavailable");
    return g;
}

Bn to_bn(std::span<const std::uint8_t> bytes) {
    Bn b{BN_bin2bn(bytes.data(), static_cast<int>(bytes.size()), nullptr)};
    if (!b) throw KeyAgreementError("bignum allocation failed");
    return b;
}

Bytes point_octets(const EC_GROUP* g, const EC_POINT* p, BN_CTX* ctx) {
    Bytes out(kPublicPointBytes);
    if (EC_POINT_point2oct(g, p, POINT_CONVERSION_UNCOMPRESSED, out.data(), out.size(), ctx) !=
        kPublicPointBytes)
        throw KeyAgreementError("point encoding failed");
    return out;
}

KeyPair from_scalar(const EC_GROUP* g, const BIGNUM* k, BN_CTX* ctx) {
    KeyPair kp;
    if (BN_bn2binpad(k, kp.private_scalar.data(), kScalarBytes) != kScalarBytes)
        throw KeyAgreementError("scalar encoding failed");
    Point pub{EC_POINT_new(g)};
    if (!pub || EC_POINT_mul(g, pub.get(), k, nullptr, nullptr, ctx) != 1)
        throw KeyAgreementError("public point computation failed");
    kp.public_point = point_octets(g, pub.get(), ctx);
    return kp;
}

void require(bool ok, const char* what) {
    if (!ok) throw KeyAgreementError(what);
}

}  // namespace

KeyPair generate_keypair(Rng& rng) {
    std::array<std::uint8_t, kScalarBytes> raw{};
    for (std::size_t w = 0; w < kScalarBytes / 8; ++w) {
        const std::uint64_t v = rng();
        for (std::size_t b = 0; b < 8; ++b) raw[w * 8 + b] = static_cast<std::uint8_t>(v >> (56 - 8 * b));
    }
    auto g = p256();
    BnCtx ctx{BN_CTX_new()};
    Bn k = to_bn(raw);
    Bn n_minus_1{BN_dup(EC_GROUP_get0_order(g.get()))};
    require(ctx && n_minus_1 && BN_sub_word(n_minus_1.get(), 1) == 1, "order arithmetic failed");
    // k mod (n - 1) + 1 lands in [1, n - 1]
    require(BN_nnmod(k.get(), k.get(), n_minus_1.get(), ctx.get()) == 1 && BN_add_word(k.get(), 1) == 1,
            "scalar reduction failed");
    return from_scalar(g.get(), k.get(), ctx.get());
}

KeyPair keypair_from_private(std::span<const std::uint8_t> scalar) {
    auto g = p256();
    BnCtx ctx{BN_CTX_new()};
    Bn k = to_bn(scalar);
    if (BN_is_zero(k.get()) || BN_cmp(k.get(), EC_GROUP_get0_order(g.get())) >= 0)
        throw KeyAgreementError("private scalar outside [1, order - 1]");
    return from_scalar(g.get(), k.get(), ctx.get());
}

Bytes derive_shared_secret(std::span<const std::uint8_t> own_private, std::span<const std::uint8_t> peer_public) {
    auto g = p256();
    BnCtx ctx{BN_CTX_new()};
    require(static_cast<bool>(ctx), "context allocation failed");
    Point peer{EC_POINT_new(g.get())};
    if (!peer || peer_public.size() != kPublicPointBytes ||
        EC_POINT_oct2point(g.get(), peer.get(), peer_public.data(), peer_public.size(), ctx.get()) != 1 ||
        EC_POINT_is_at_infinity(g.get(), peer.get()) ||
        EC_POINT_is_on_curve(g.get(), peer.get(), ctx.get()) != 1)
        throw KeyAgreementError("peer public key is not a valid P-256 point");

    Bn k = to_bn(own_private);
    if (BN_is_zero(k.get()) || BN_cmp(k.get(), EC_GROUP_get0_order(g.get())) >= 0)
        throw KeyAgreementError("private scalar outside [1, order - 1]");
    Point prod{EC_POINT_new(g.get())};
    Bn x{BN_new()};
    require(prod && x && EC_POINT_mul(g.get(), prod.get(), nullptr, peer.get(), k.get(), ctx.get()) == 1 &&
                !EC_POINT_is_at_infinity(g.get(), prod.get()) &&
                EC_POINT_get_affine_coordinates(g.get(), prod.get(), x.get(), nullptr, ctx.get()) == 1,
            "shared point computation failed");
    Bytes out(kScalarBytes);
    require(BN_bn2binpad(x.get(), out.data(), kScalarBytes) == kScalarBytes, "secret encoding failed");
    return out;
}

SessionKey derive_session_key(std::span<const std::uint8_t> shared) {
    if (shared.empty()) throw KeyAgreementError("empty shared secret");
    Kdf kdf{EVP_KDF_fetch(nullptr, "HKDF", nullptr)};
    require(static_cast<bool>(kdf), "HKDF unavailable");
    KdfCtx kctx{EVP_KDF_CTX_new(kdf.get())};
    require(static_cast<bool>(kctx), "HKDF context allocation failed");

    std::string digest = "SHA256";
    std::string label{kSessionKeyLabel};
    Bytes secret(shared.begin(), shared.end());
    const OSSL_PARAM params[] = {
        OSSL_PARAM_construct_utf8_string(OSSL_KDF_PARAM_DIGEST, digest.data(), 0),
        OSSL_PARAM_construct_octet_string(OSSL_KDF_PARAM_KEY, secret.data(), secret.size()),
        OSSL_PARAM_construct_octet_string(OSSL_KDF_PARAM_INFO, label.data(), label.size()),
        OSSL_PARAM_construct_end(),
    };
    SessionKey key;
    require(EVP_KDF_derive(kctx.get(), key.bits.data(), key.bits.size(), params) == 1, "HKDF failed");
    return key;
}

namespace {

Bytes run_ecb(const SessionKey& key, std::span<const std::uint8_t> data, bool pad, bool encrypt) {
    if (!pad && data.size() % kBlockBytes != 0) throw FramingError("input is not block aligned");
    if (!encrypt && data.size() % kBlockBytes != 0) throw FramingError("ciphertext is not block aligned");
    CipherCtx ctx{EVP_CIPHER_CTX_new()};
    if (!ctx || EVP_CipherInit_ex(ctx.get(), EVP_aes_128_ecb(), nullptr, key.bits.data(), nullptr,
                                  encrypt ? 1 : 0) != 1)
        throw FramingError("cipher initialisation failed");
    EVP_CIPHER_CTX_set_padding(ctx.get(), pad ? 1 : 0);

    Bytes out(data.size() + kBlockBytes);
    int len1 = 0;
    int len2 = 0;
    if (EVP_CipherUpdate(ctx.get(), out.data(), &len1, data.data(), static_cast<int>(data.size())) != 1 ||
        EVP_CipherFinal_ex(ctx.get(), out.data() + len1, &len2) != 1)
        throw FramingError(encrypt ? "encryption failed" : "decryption failed (bad padding)");
    out.resize(static_cast<std::size_t>(len1 + len2));
    return out;
}

}  // namespace

Bytes aes128_ecb_encrypt(const SessionKey& key, std::span<const std::uint8_t> data, bool pad) {
    return run_ecb(key, data, pad, true);
}

Bytes aes128_ecb_decrypt(const SessionKey& key, std::span<const std::uint8_t> data, bool pad) {
    return run_ecb(key, data, pad, false);
}

Bytes seal_power_record(const SessionKey& key, const PowerRecord& record) {
    return aes128_ecb_encrypt(key, encode_power_record(record), true);
}

PowerRecord open_power_record(const SessionKey& key, std::span<const std::uint8_t> ciphertext) {
    return decode_power_record(aes128_ecb_decrypt(key, ciphertext, true));
}

std::vector<CipherHalf> split_into_halves(std::span<const std::uint8_t> ciphertext) {
    if (ciphertext.size() % kBlockBytes != 0) throw FramingError("ciphertext is not block aligned");
    std::vector<CipherHalf> out;
    out.reserve(ciphertext.size() / kHalfBytes);
    for (std::size_t off = 0; off < ciphertext.size(); off += kHalfBytes) {
        CipherHalf h;
        h.block_index = static_cast<std::uint32_t>(off / kBlockBytes);
        h.half_index = static_cast<std::uint8_t>((off / kHalfBytes) % 2);
        std::copy_n(ciphertext.begin() + static_cast<std::ptrdiff_t>(off), kHalfBytes, h.payload.begin());
        out.push_back(h);
    }
    return out;
}

Bytes join_halves(std::span<const CipherHalf> halves) {
    if (halves.size() % 2 != 0) throw FramingError("odd number of cipher halves");
    Bytes out;
    out.reserve(halves.size() * kHalfBytes);
    for (std::size_t i = 0; i < halves.size(); ++i) {
        if (halves[i].block_index != i / 2 || halves[i].half_index != i % 2)
            throw FramingError("cipher halves out of order at position " + std::to_string(i));
        out.insert(out.end(), halves[i].payload.begin(), halves[i].payload.end());
    }
    return out;
}

Bytes encode_half_frame(const CipherHalf& half) {
    Bytes f;
    f.reserve(kHalfFrameBytes);
    for (int s = 24; s >= 0; s -= 8) f.push_back(static_cast<std::uint8_t>(half.block_index >> s));
    f.push_back(half.half_index);
    f.insert(f.end(), half.payload.begin(), half.payload.end());
    return f;
}

CipherHalf decode_half_frame(std::span<const std::uint8_t> frame) {
    if (frame.size() != kHalfFrameBytes)
        throw FramingError("half frame must be " + std::to_string(kHalfFrameBytes) + " bytes");
    CipherHalf h;
    h.block_index = (std::uint32_t{frame[0]} << 24) | (std::uint32_t{frame[1]} << 16) |
                    (std::uint32_t{frame[2]} << 8) | frame[3];
    h.half_index = frame[4];
    if (h.half_index > 1) throw FramingError("half index must be 0 or 1");
    std::copy_n(frame.begin() + 5, kHalfBytes, h.payload.begin());
    return h;
}

}  // namespace swipesim::crypto
