#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "routeseal/canon.hpp"
#include "routeseal/rewriter.hpp"

namespace routeseal::manifest {

// Project description consumed by the command-line tools:
//   name    = "fib"
//   entry   = "main.main"
//   files   = ["main.ml", "util.ml"]
//   include = ["*"]          # optional, glob over callee `file.fn` targets
//   exclude = []             # optional
struct ProjectManifest {
    std::string name;
    std::string entry_file;
    std::string entry_fn;
    std::vector<std::string> files;
    std::vector<std::string> include{"*"};
    std::vector<std::string> exclude;
};

ProjectManifest parse_manifest(std::string_view text);  // throws ManifestError
ProjectManifest load_manifest(const std::filesystem::path& path);

// Reads every listed file relative to the manifest's directory. File ids are
// the path stems and must be unique.
std::vector<canon::SourceFile> load_sources(const ProjectManifest& m,
                                            const std::filesystem::path& root);

// Cross-file sites whose `file.fn` target matches an include pattern and no
// exclude pattern.
rewriter::Selection manifest_selection(const ProjectManifest& m);

// '*' matches any run of characters; everything else is literal.
bool glob_match(std::string_view pattern, std::string_view text);

}  // namespace routeseal::manifest
