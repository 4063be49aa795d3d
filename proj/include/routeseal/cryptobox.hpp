#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "routeseal/closedhash.hpp"

namespace routeseal::cryptobox {

// Byte source for nonces and CBC IVs. The seeded variant exists so a protect
// run can be replayed bit-exactly; release builds use the system source.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;
};

// OS entropy via the crypto library. Throws EntropyError when unavailable.
class SystemRandom : public RandomSource {
public:
    void fill(std::span<std::uint8_t> out) override;
};

class SeededRandom : public RandomSource {
public:
    explicit SeededRandom(std::uint64_t seed) : state_(seed) {}
    void fill(std::span<std::uint8_t> out) override;

private:
    std::uint64_t next();
    std::uint64_t state_;
};

// n must be 16 or 32 (CBC IV or key nonce).
std::vector<std::uint8_t> gen_nonce(std::size_t n, RandomSource& rng);

// AES-256-CBC ciphertext with an encrypt-then-MAC tag. The Base-64 envelope
// of cbc_iv || ciphertext || tag is the literal embedded at rewritten call
// sites.
struct SealedDescriptor {
    std::array<std::uint8_t, 16> cbc_iv{};
    std::vector<std::uint8_t> ciphertext;  // multiple of 16 bytes
    std::array<std::uint8_t, 32> tag{};    // HMAC-SHA-256 over cbc_iv || ciphertext

    std::string encode() const;
    static std::optional<SealedDescriptor> decode(std::string_view base64_text);

    bool operator==(const SealedDescriptor&) const = default;
};

SealedDescriptor seal(const closedhash::SymmetricKey& key, std::span<const std::uint8_t> plaintext,
                      RandomSource& rng);
SealedDescriptor seal(const closedhash::SymmetricKey& key, std::string_view plaintext,
                      RandomSource& rng);

enum class OpenStatus {
    Ok,
    EnvelopeError,     // malformed Base-64 or impossible lengths
    IntegrityFailure,  // wrong key or modified ciphertext: the tamper signal
};

struct OpenResult {
    OpenStatus status = OpenStatus::IntegrityFailure;
    std::vector<std::uint8_t> plaintext;  // filled only on Ok

    bool ok() const { return status == OpenStatus::Ok; }
    std::string plaintext_string() const {
        return std::string(plaintext.begin(), plaintext.end());
    }
};

// Verifies the tag before any decryption; a mismatch never yields plaintext.
OpenResult open(const closedhash::SymmetricKey& key, const SealedDescriptor& sealed);
OpenResult open_envelope(const closedhash::SymmetricKey& key, std::string_view base64_text);

}  // namespace routeseal::cryptobox
