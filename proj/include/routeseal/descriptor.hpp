#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace routeseal::descriptor {

// Plaintext payload of a sealed call: where the call goes plus every argument
// that was a literal at the original site. Arguments that were expressions
// stay at the call site and are appended at dispatch time.
struct CallDescriptor {
    std::string dst_file;
    std::string method;
    std::vector<std::string> literal_types;   // "Int", "Str", "Bool"
    std::vector<std::string> literal_values;  // rendered source values, unquoted
    std::size_t runtime_arg_count = 0;        // not on the wire

    bool operator==(const CallDescriptor& o) const {
        return dst_file == o.dst_file && method == o.method && literal_types == o.literal_types &&
               literal_values == o.literal_values;
    }
};

// Wire form: [dst]-[method]-[types]-[values], comma-joined lists, "null" for
// an empty list. '%', '-' and ',' inside any item are percent-escaped so the
// four sections always split on bare dashes.
std::string encode_descriptor(const CallDescriptor& d);
std::optional<CallDescriptor> decode_descriptor(std::string_view text);

std::string escape_item(std::string_view raw);
std::optional<std::string> unescape_item(std::string_view escaped);

}  // namespace routeseal::descriptor
