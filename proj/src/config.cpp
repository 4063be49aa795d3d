#include "routeseal/config.hpp"

#include <sstream>
#include <vector>

#include "routeseal/base64.hpp"
#include "routeseal/errors.hpp"

namespace routeseal::config {

namespace {

std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) out.emplace_back(line.substr(start, i - start));
    }
    return out;
}

std::array<std::uint8_t, 32> decode_b64_32(std::string_view text, std::size_t line_no,
                                           const char* what) {
    auto bytes = base64_decode(text);
    if (!bytes || bytes->size() != 32) {
        throw ConfigError("line " + std::to_string(line_no) + ": bad " + what +
                          " (expected Base-64 of 32 bytes)");
    }
    std::array<std::uint8_t, 32> out{};
    std::copy(bytes->begin(), bytes->end(), out.begin());
    return out;
}

}  // namespace

std::string emit_config(const RouterConfig& cfg) {
    std::ostringstream out;
    out << "version " << cfg.format_version << "\n";
    out << "entry " << cfg.entry_file << "." << cfg.entry_fn << "\n";
    for (const auto& [file, digest] : cfg.file_hashes) {
        out << "file " << file << " hash="
            << base64_encode(std::span<const std::uint8_t>(digest.bytes)) << "\n";
    }
    for (const auto& [file, nonce] : cfg.nonces) {
        out << "nonce " << file << " iv=" << base64_encode(std::span<const std::uint8_t>(nonce))
            << "\n";
    }
    for (const auto& [from, to] : cfg.deps) {
        out << "dep " << from << " -> " << to << "\n";
    }
    for (const auto& [from, to] : cfg.removed) {
        out << "removed " << from << " -> " << to << "\n";
    }
    return out.str();
}

RouterConfig parse_config(std::string_view text) {
    RouterConfig cfg;
    bool saw_version = false;
    bool saw_entry = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = eol == std::string_view::npos ? text.substr(pos)
                                                              : text.substr(pos, eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        auto fields = split_ws(line);
        if (fields.empty() || fields[0][0] == '#') continue;
        const std::string& kind = fields[0];

        if (kind == "version") {
            if (fields.size() != 2 || fields[1] != "1")
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": unsupported config version");
            saw_version = true;
        } else if (kind == "entry") {
            if (fields.size() != 2)
                throw ConfigError("line " + std::to_string(line_no) + ": malformed entry line");
            std::size_t dot = fields[1].rfind('.');
            if (dot == std::string::npos || dot == 0 || dot + 1 == fields[1].size())
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": entry must be <file>.<fn>");
            cfg.entry_file = fields[1].substr(0, dot);
            cfg.entry_fn = fields[1].substr(dot + 1);
            saw_entry = true;
        } else if (kind == "file") {
            if (fields.size() != 3 || fields[2].rfind("hash=", 0) != 0)
                throw ConfigError("line " + std::to_string(line_no) + ": malformed file line");
            Digest d;
            d.bytes = decode_b64_32(std::string_view(fields[2]).substr(5), line_no, "hash");
            if (!cfg.file_hashes.emplace(fields[1], d).second)
                throw ConfigError("line " + std::to_string(line_no) + ": duplicate file " +
                                  fields[1]);
        } else if (kind == "nonce") {
            if (fields.size() != 3 || fields[2].rfind("iv=", 0) != 0)
                throw ConfigError("line " + std::to_string(line_no) + ": malformed nonce line");
            auto iv = decode_b64_32(std::string_view(fields[2]).substr(3), line_no, "iv");
            if (!cfg.nonces.emplace(fields[1], iv).second)
                throw ConfigError("line " + std::to_string(line_no) + ": duplicate nonce " +
                                  fields[1]);
        } else if (kind == "dep" || kind == "removed") {
            if (fields.size() != 4 || fields[2] != "->")
                throw ConfigError("line " + std::to_string(line_no) + ": malformed " + kind +
                                  " line");
            auto& target = kind == "dep" ? cfg.deps : cfg.removed;
            if (!target.emplace(fields[1], fields[3]).second)
                throw ConfigError("line " + std::to_string(line_no) + ": duplicate " + kind +
                                  " arc");
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown directive '" +
                              kind + "'");
        }
    }

    if (!saw_version) throw ConfigError("missing version line");
    if (!saw_entry) throw ConfigError("missing entry line");
    for (const auto& [file, _] : cfg.nonces) {
        if (!cfg.file_hashes.count(file))
            throw ConfigError("nonce for unknown file " + file);
    }
    for (const auto& [from, to] : cfg.deps) {
        if (!cfg.file_hashes.count(from) || !cfg.file_hashes.count(to))
            throw ConfigError("dep references unknown file: " + from + " -> " + to);
    }
    for (const auto& [from, to] : cfg.removed) {
        if (!cfg.file_hashes.count(from) || !cfg.file_hashes.count(to))
            throw ConfigError("removed arc references unknown file: " + from + " -> " + to);
    }
    if (!cfg.file_hashes.count(cfg.entry_file))
        throw ConfigError("entry file " + cfg.entry_file + " has no hash entry");
    return cfg;
}

}  // namespace routeseal::config
