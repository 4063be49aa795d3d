#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "routeseal/depgraph.hpp"
#include "routeseal/digest.hpp"

namespace routeseal::closedhash {

// Per-file hashes over the dependency DAG. A file's closed hash is its plain
// hash XORed with the closed hashes of everything it depends on; for a file
// with no dependencies the two coincide.
struct ClosedHashTable {
    std::map<std::string, Digest> closed;
    std::map<std::string, Digest> plain;
};

// Per-callee random value mixed into key derivation. Distinct from the
// 16-byte CBC initialization vector used per ciphertext.
struct KeyNonce {
    std::string file_id;
    std::array<std::uint8_t, 32> nonce{};
};

// AES-256 key material. Wiped on destruction; never serialized.
class SymmetricKey {
public:
    SymmetricKey() = default;
    explicit SymmetricKey(const std::array<std::uint8_t, 32>& bytes) : bytes_(bytes) {}
    SymmetricKey(const SymmetricKey&) = default;
    SymmetricKey& operator=(const SymmetricKey&) = default;
    ~SymmetricKey() { wipe(); }

    const std::array<std::uint8_t, 32>& bytes() const { return bytes_; }
    bool operator==(const SymmetricKey& other) const { return bytes_ == other.bytes_; }

    void wipe();

private:
    std::array<std::uint8_t, 32> bytes_{};
};

// Computes every node's closed hash in topological order. The graph must be
// acyclic and `plain` must cover all nodes (MissingHashError otherwise).
ClosedHashTable closed_hashes(const depgraph::DependencyGraph& dag,
                              const std::map<std::string, Digest>& plain);

// Key for sealing call descriptors destined for `callee`: XOR of the closed
// hashes of every caller, mixed with the callee's nonce. Order-independent
// over callers. Throws NoCallersError on an empty caller set.
SymmetricKey derive_key(const std::string& callee, const std::set<std::string>& callers,
                        const ClosedHashTable& table, const KeyNonce& nonce);

}  // namespace routeseal::closedhash
