#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "routeseal/depgraph.hpp"
#include "routeseal/digest.hpp"

namespace routeseal::config {

// Everything the dispatcher needs at startup: expected per-file hashes, the
// key-derivation nonces, and the dependency relation (including the arcs that
// were dropped to break cycles, which still feed key derivation).
struct RouterConfig {
    int format_version = 1;
    std::string entry_file;
    std::string entry_fn;
    std::map<std::string, Digest> file_hashes;
    std::map<std::string, std::array<std::uint8_t, 32>> nonces;
    std::set<depgraph::Arc> deps;
    std::set<depgraph::Arc> removed;

    bool operator==(const RouterConfig&) const = default;
};

// Text form is line oriented and emitted in a fixed order so two runs over
// the same project produce byte-identical files.
std::string emit_config(const RouterConfig& cfg);
RouterConfig parse_config(std::string_view text);  // throws ConfigError

}  // namespace routeseal::config
