#include "routeseal/cryptobox.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <cstring>
#include <memory>

#include "routeseal/base64.hpp"
#include "routeseal/errors.hpp"

namespace routeseal::cryptobox {

namespace {

struct CipherCtxFree {
    void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxFree>;

struct MacFree {
    void operator()(EVP_MAC* p) const { EVP_MAC_free(p); }
};
struct MacCtxFree {
    void operator()(EVP_MAC_CTX* p) const { EVP_MAC_CTX_free(p); }
};

std::array<std::uint8_t, 32> hmac_sha256(const closedhash::SymmetricKey& key,
                                         std::span<const std::uint8_t> iv,
                                         std::span<const std::uint8_t> ciphertext) {
    std::unique_ptr<EVP_MAC, MacFree> mac(EVP_MAC_fetch(nullptr, "HMAC", nullptr));
    if (!mac) throw Error("HMAC unavailable");
    std::unique_ptr<EVP_MAC_CTX, MacCtxFree> ctx(EVP_MAC_CTX_new(mac.get()));
    if (!ctx) throw Error("HMAC context allocation failed");

    char digest_name[] = "SHA256";
    OSSL_PARAM params[] = {
        OSSL_PARAM_construct_utf8_string("digest", digest_name, 0),
        OSSL_PARAM_construct_end(),
    };
    if (EVP_MAC_init(ctx.get(), key.bytes().data(), key.bytes().size(), params) != 1)
        throw Error("HMAC init failed");
    if (!iv.empty() && EVP_MAC_update(ctx.get(), iv.data(), iv.size()) != 1)
        throw Error("HMAC update failed");
    if (!ciphertext.empty() &&
        EVP_MAC_update(ctx.get(), ciphertext.data(), ciphertext.size()) != 1)
        throw Error("HMAC update failed");

    std::array<std::uint8_t, 32> out{};
    std::size_t out_len = 0;
    if (EVP_MAC_final(ctx.get(), out.data(), &out_len, out.size()) != 1 || out_len != out.size())
        throw Error("HMAC final failed");
    return out;
}

}  // namespace

void SystemRandom::fill(std::span<std::uint8_t> out) {
    if (out.empty()) return;
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
        throw EntropyError("system entropy source failed");
}

std::uint64_t SeededRandom::next() {
    // splitmix64: tiny, well distributed, and stable across platforms.
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while (i < out.size()) {
        std::uint64_t word = next();
        for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
            out[i] = static_cast<std::uint8_t>(word >> (8 * b));
        }
    }
}

std::vector<std::uint8_t> gen_nonce(std::size_t n, RandomSource& rng) {
    if (n != 16 && n != 32) throw Error("nonce length must be 16 or 32 bytes");
    std::vector<std::uint8_t> out(n);
    rng.fill(out);
    return out;
}

std::string SealedDescriptor::encode() const {
    std::vector<std::uint8_t> wire;
    wire.reserve(cbc_iv.size() + ciphertext.size() + tag.size());
    wire.insert(wire.end(), cbc_iv.begin(), cbc_iv.end());
    wire.insert(wire.end(), ciphertext.begin(), ciphertext.end());
    wire.insert(wire.end(), tag.begin(), tag.end());
    return base64_encode(wire);
}

std::optional<SealedDescriptor> SealedDescriptor::decode(std::string_view base64_text) {
    auto wire = base64_decode(base64_text);
    if (!wire) return std::nullopt;
    // Minimum: 16-byte IV, one cipher block, 32-byte tag.
    if (wire->size() < 16 + 16 + 32) return std::nullopt;
    std::size_t ct_len = wire->size() - 16 - 32;
    if (ct_len % 16 != 0) return std::nullopt;

    SealedDescriptor out;
    std::memcpy(out.cbc_iv.data(), wire->data(), 16);
    out.ciphertext.assign(wire->begin() + 16, wire->begin() + 16 + ct_len);
    std::memcpy(out.tag.data(), wire->data() + 16 + ct_len, 32);
    return out;
}

SealedDescriptor seal(const closedhash::SymmetricKey& key, std::span<const std::uint8_t> plaintext,
                      RandomSource& rng) {
    SealedDescriptor out;
    rng.fill(out.cbc_iv);

    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw Error("cipher context allocation failed");
    if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_cbc(), nullptr, key.bytes().data(),
                           out.cbc_iv.data()) != 1)
        throw Error("cipher init failed");

    out.ciphertext.resize(plaintext.size() + 16);
    int written = 0;
    int total = 0;
    if (!plaintext.empty()) {
        if (EVP_EncryptUpdate(ctx.get(), out.ciphertext.data(), &written, plaintext.data(),
                              static_cast<int>(plaintext.size())) != 1)
            throw Error("encryption failed");
        total = written;
    }
    if (EVP_EncryptFinal_ex(ctx.get(), out.ciphertext.data() + total, &written) != 1)
        throw Error("encryption failed");
    total += written;
    out.ciphertext.resize(static_cast<std::size_t>(total));

    out.tag = hmac_sha256(key, out.cbc_iv, out.ciphertext);
    return out;
}

SealedDescriptor seal(const closedhash::SymmetricKey& key, std::string_view plaintext,
                      RandomSource& rng) {
    return seal(key,
                std::span<const std::uint8_t>(
                    reinterpret_cast<const std::uint8_t*>(plaintext.data()), plaintext.size()),
                rng);
}

OpenResult open(const closedhash::SymmetricKey& key, const SealedDescriptor& sealed) {
    OpenResult result;
    if (sealed.ciphertext.empty() || sealed.ciphertext.size() % 16 != 0) {
        result.status = OpenStatus::EnvelopeError;
        return result;
    }

    auto expected = hmac_sha256(key, sealed.cbc_iv, sealed.ciphertext);
    if (CRYPTO_memcmp(expected.data(), sealed.tag.data(), expected.size()) != 0) {
        result.status = OpenStatus::IntegrityFailure;
        return result;
    }

    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw Error("cipher context allocation failed");
    if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_cbc(), nullptr, key.bytes().data(),
                           sealed.cbc_iv.data()) != 1)
        throw Error("cipher init failed");

    result.plaintext.resize(sealed.ciphertext.size() + 16);
    int written = 0;
    int total = 0;
    if (EVP_DecryptUpdate(ctx.get(), result.plaintext.data(), &written, sealed.ciphertext.data(),
                          static_cast<int>(sealed.ciphertext.size())) != 1) {
        result.plaintext.clear();
        result.status = OpenStatus::IntegrityFailure;
        return result;
    }
    total = written;
    if (EVP_DecryptFinal_ex(ctx.get(), result.plaintext.data() + total, &written) != 1) {
        // Padding failure despite a valid tag would mean MAC misuse; treat as
        // the same integrity signal rather than crashing.
        result.plaintext.clear();
        result.status = OpenStatus::IntegrityFailure;
        return result;
    }
    total += written;
    result.plaintext.resize(static_cast<std::size_t>(total));
    result.status = OpenStatus::Ok;
    return result;
}

OpenResult open_envelope(const closedhash::SymmetricKey& key, std::string_view base64_text) {
    auto sealed = SealedDescriptor::decode(base64_text);
    if (!sealed) {
        OpenResult result;
        result.status = OpenStatus::EnvelopeError;
        return result;
    }
    return open(key, *sealed);
}

}  // namespace routeseal::cryptobox
