#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace routeseal::minilang {

// Half-open byte range into the original source text.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
};

struct Token {
    enum class Kind { Ident, Int, Str, Punct, Comment, Eof };

    Kind kind = Kind::Eof;
    std::string text;       // exact lexeme for Ident/Int/Punct, full comment text for Comment
    std::string str_value;  // decoded value for Str
    Span span;
    std::size_t line = 1;
    std::size_t col = 1;

    bool is_ident(std::string_view s) const { return kind == Kind::Ident && text == s; }
    bool is_punct(std::string_view s) const { return kind == Kind::Punct && text == s; }
};

// Tokenizes minilang source. Comments are dropped unless keep_comments is set
// (the canonical form never contains them; mutation tooling wants their spans).
// Throws LexError on input that cannot be tokenized.
std::vector<Token> lex(std::string_view text, const std::string& file_id,
                       bool keep_comments = false);

// Renders a string value as a minilang string literal with deterministic escaping.
std::string render_string_literal(std::string_view value);

bool is_valid_utf8(std::string_view text);

}  // namespace routeseal::minilang
