#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace routeseal {

// 32-byte hash value. Used both for plain SHA-256 digests and for the
// XOR-combined per-file hashes derived from them.
struct Digest {
    static constexpr std::size_t kSize = 32;

    std::array<std::uint8_t, kSize> bytes{};

    bool operator==(const Digest&) const = default;
    auto operator<=>(const Digest&) const = default;

    Digest& operator^=(const Digest& other) {
        for (std::size_t i = 0; i < kSize; ++i) bytes[i] ^= other.bytes[i];
        return *this;
    }
    friend Digest operator^(Digest a, const Digest& b) { return a ^= b; }

    bool is_zero() const {
        for (auto b : bytes)
            if (b != 0) return false;
        return true;
    }

    std::string hex() const;
};

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view data);

}  // namespace routeseal
