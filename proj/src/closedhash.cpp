#include "routeseal/closedhash.hpp"

#include <openssl/crypto.h>

#include "routeseal/errors.hpp"

namespace routeseal::closedhash {

void SymmetricKey::wipe() { OPENSSL_cleanse(bytes_.data(), bytes_.size()); }

ClosedHashTable closed_hashes(const depgraph::DependencyGraph& dag,
                              const std::map<std::string, Digest>& plain) {
    ClosedHashTable table;
    for (const auto& node : depgraph::topo_sort(dag)) {
        auto it = plain.find(node);
        if (it == plain.end()) throw MissingHashError("no plain hash for file: " + node);
        Digest h = it->second;
        for (auto arc = dag.arcs.lower_bound({node, ""});
             arc != dag.arcs.end() && arc->first == node; ++arc) {
            h ^= table.closed.at(arc->second);  // dependency already processed
        }
        table.plain[node] = it->second;
        table.closed[node] = h;
    }
    return table;
}

SymmetricKey derive_key(const std::string& callee, const std::set<std::string>& callers,
                        const ClosedHashTable& table, const KeyNonce& nonce) {
    if (callers.empty()) {
        throw NoCallersError("no callers for file " + callee + "; no key is needed");
    }
    Digest acc;
    for (const auto& caller : callers) {
        auto it = table.closed.find(caller);
        if (it == table.closed.end()) {
            throw MissingHashError("no closed hash for caller file: " + caller);
        }
        acc ^= it->second;
    }
    std::array<std::uint8_t, 32> key{};
    for (std::size_t i = 0; i < key.size(); ++i) key[i] = acc.bytes[i] ^ nonce.nonce[i];
    return SymmetricKey(key);
}

}  // namespace routeseal::closedhash
