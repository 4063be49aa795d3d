#include "routeseal/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "routeseal/errors.hpp"

namespace routeseal::manifest {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::string parse_quoted(std::string_view v, std::size_t line_no) {
    v = trim(v);
    if (v.size() < 2 || v.front() != '"' || v.back() != '"')
        throw ManifestError("line " + std::to_string(line_no) + ": expected a quoted string");
    return std::string(v.substr(1, v.size() - 2));
}

std::vector<std::string> parse_list(std::string_view v, std::size_t line_no) {
    v = trim(v);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw ManifestError("line " + std::to_string(line_no) + ": expected a [list]");
    v = trim(v.substr(1, v.size() - 2));
    std::vector<std::string> out;
    while (!v.empty()) {
        std::size_t comma = v.find(',');
        std::string_view item = comma == std::string_view::npos ? v : v.substr(0, comma);
        out.push_back(parse_quoted(item, line_no));
        if (comma == std::string_view::npos) break;
        v = trim(v.substr(comma + 1));
    }
    return out;
}

}  // namespace

ProjectManifest parse_manifest(std::string_view text) {
    ProjectManifest m;
    bool saw_entry = false;
    bool saw_files = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = eol == std::string_view::npos ? text.substr(pos)
                                                              : text.substr(pos, eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ManifestError("line " + std::to_string(line_no) + ": expected key = value");
        std::string key{trim(line.substr(0, eq))};
        std::string_view value = line.substr(eq + 1);

        if (key == "name") {
            m.name = parse_quoted(value, line_no);
        } else if (key == "entry") {
            std::string entry = parse_quoted(value, line_no);
            std::size_t dot = entry.rfind('.');
            if (dot == std::string::npos || dot == 0 || dot + 1 == entry.size())
                throw ManifestError("line " + std::to_string(line_no) +
                                    ": entry must be \"<file_id>.<fn>\"");
            m.entry_file = entry.substr(0, dot);
            m.entry_fn = entry.substr(dot + 1);
            saw_entry = true;
        } else if (key == "files") {
            m.files = parse_list(value, line_no);
            saw_files = true;
        } else if (key == "include") {
            m.include = parse_list(value, line_no);
        } else if (key == "exclude") {
            m.exclude = parse_list(value, line_no);
        } else {
            throw ManifestError("line " + std::to_string(line_no) + ": unknown key '" + key +
                                "'");
        }
    }

    if (!saw_entry) throw ManifestError("manifest is missing 'entry'");
    if (!saw_files || m.files.empty()) throw ManifestError("manifest lists no files");
    return m;
}

ProjectManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ManifestError("cannot open manifest " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str());
}

std::vector<canon::SourceFile> load_sources(const ProjectManifest& m,
                                            const std::filesystem::path& root) {
    std::vector<canon::SourceFile> out;
    std::set<std::string> seen;
    for (const auto& rel : m.files) {
        std::filesystem::path p = root / rel;
        std::ifstream in(p, std::ios::binary);
        if (!in) throw ManifestError("cannot open source file " + p.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string file_id = p.stem().string();
        if (!seen.insert(file_id).second)
            throw ManifestError("duplicate file id '" + file_id + "' in manifest");
        out.push_back(canon::SourceFile{file_id, rel, buf.str()});
    }
    return out;
}

bool glob_match(std::string_view pattern, std::string_view text) {
    std::size_t p = 0, t = 0;
    std::size_t star = std::string_view::npos, mark = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

rewriter::Selection manifest_selection(const ProjectManifest& m) {
    std::vector<std::string> include = m.include;
    std::vector<std::string> exclude = m.exclude;
    return [include, exclude](const minilang::CallSite& site) {
        if (!site.cross_file()) return false;
        std::string target = site.target();
        bool in = false;
        for (const auto& pat : include) {
            if (glob_match(pat, target)) {
                in = true;
                break;
            }
        }
        if (!in) return false;
        for (const auto& pat : exclude) {
            if (glob_match(pat, target)) return false;
        }
        return true;
    };
}

}  // namespace routeseal::manifest
