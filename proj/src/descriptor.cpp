#include "routeseal/descriptor.hpp"

namespace routeseal::descriptor {

namespace {

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string join_section(const std::vector<std::string>& items) {
    if (items.empty()) return "null";
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += ',';
        out += escape_item(items[i]);
    }
    return out;
}

std::optional<std::vector<std::string>> split_section(std::string_view section) {
    if (section == "null") return std::vector<std::string>{};
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = section.find(',', start);
        std::string_view piece = comma == std::string_view::npos
                                     ? section.substr(start)
                                     : section.substr(start, comma - start);
        auto raw = unescape_item(piece);
        if (!raw) return std::nullopt;
        out.push_back(std::move(*raw));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::string escape_item(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '%': out += "%25"; break;
            case '-': out += "%2D"; break;
            case ',': out += "%2C"; break;
            default: out += c; break;
        }
    }
    return out;
}

std::optional<std::string> unescape_item(std::string_view escaped) {
    std::string out;
    out.reserve(escaped.size());
    for (std::size_t i = 0; i < escaped.size(); ++i) {
        char c = escaped[i];
        if (c != '%') {
            out += c;
            continue;
        }
        if (i + 2 >= escaped.size()) return std::nullopt;
        int hi = hex_digit(escaped[i + 1]);
        int lo = hex_digit(escaped[i + 2]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out += static_cast<char>(hi * 16 + lo);
        i += 2;
    }
    return out;
}

std::string encode_descriptor(const CallDescriptor& d) {
    std::string out = escape_item(d.dst_file);
    out += '-';
    out += escape_item(d.method);
    out += '-';
    out += join_section(d.literal_types);
    out += '-';
    out += join_section(d.literal_values);
    return out;
}

std::optional<CallDescriptor> decode_descriptor(std::string_view text) {
    std::vector<std::string_view> sections;
    std::size_t start = 0;
    while (true) {
        std::size_t dash = text.find('-', start);
        if (dash == std::string_view::npos) {
            sections.push_back(text.substr(start));
            break;
        }
        sections.push_back(text.substr(start, dash - start));
        start = dash + 1;
    }
    if (sections.size() != 4) return std::nullopt;

    auto dst = unescape_item(sections[0]);
    auto method = unescape_item(sections[1]);
    auto types = split_section(sections[2]);
    auto values = split_section(sections[3]);
    if (!dst || !method || !types || !values) return std::nullopt;
    if (dst->empty() || method->empty()) return std::nullopt;
    if (types->size() != values->size()) return std::nullopt;
    for (const auto& t : *types) {
        if (t != "Int" && t != "Str" && t != "Bool") return std::nullopt;
    }

    CallDescriptor d;
    d.dst_file = std::move(*dst);
    d.method = std::move(*method);
    d.literal_types = std::move(*types);
    d.literal_values = std::move(*values);
    return d;
}

}  // namespace routeseal::descriptor
