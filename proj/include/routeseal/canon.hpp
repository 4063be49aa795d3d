#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "routeseal/digest.hpp"

namespace routeseal::canon {

struct SourceFile {
    std::string file_id;  // file stem, unique within the project
    std::string path;     // project-relative path
    std::string text;     // raw source bytes (UTF-8)
};

// Normalized byte form of a source file. All integrity hashing runs over this,
// so that layout-only edits never change a file's identity.
struct CanonicalForm {
    std::string bytes;
    int placeholder_count = 0;  // sealed-argument placeholders substituted
};

// Token literal substituted for the first string argument of every
// forward_call. This keeps the canonical form independent of the sealed
// payload, so the hash computed before sealing equals the hash of the
// deployed file.
inline constexpr std::string_view kSealedArgPlaceholder = "<ENC>";

// Strips comments and blank lines, collapses whitespace runs, normalizes line
// endings and string escaping, and substitutes the sealed-argument
// placeholder. Output is a pure function of the token stream.
// Throws LexError when the text cannot be tokenized.
CanonicalForm canonicalize(const SourceFile& file);

// SHA-256 over the canonical bytes.
Digest plain_hash(const CanonicalForm& form);

}  // namespace routeseal::canon
