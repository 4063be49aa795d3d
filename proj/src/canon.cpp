#include "routeseal/canon.hpp"

#include "routeseal/lexer.hpp"

namespace routeseal::canon {

using minilang::Token;

CanonicalForm canonicalize(const SourceFile& file) {
    auto tokens = minilang::lex(file.text, file.file_id);

    CanonicalForm form;
    std::string& out = form.bytes;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        if (t.kind == Token::Kind::Eof) break;
        if (!out.empty()) out.push_back(' ');
        if (t.kind == Token::Kind::Str) {
            bool sealed_arg = i >= 2 && tokens[i - 1].is_punct("(") &&
                              tokens[i - 2].is_ident("forward_call");
            if (sealed_arg) {
                out += minilang::render_string_literal(kSealedArgPlaceholder);
                ++form.placeholder_count;
            } else {
                out += minilang::render_string_literal(t.str_value);
            }
        } else {
            out += t.text;
        }
    }
    if (!out.empty()) out.push_back('\n');
    return form;
}

Digest plain_hash(const CanonicalForm& form) { return sha256(form.bytes); }

}  // namespace routeseal::canon
