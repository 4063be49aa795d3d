#include "routeseal/lexer.hpp"

#include <cctype>

#include "routeseal/errors.hpp"

namespace routeseal::minilang {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_cont(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Two-character operators first so max-munch wins.
constexpr std::string_view kTwoCharPunct[] = {"->", "==", "!=", "<=", ">=", "&&", "||"};
constexpr std::string_view kOneCharPunct = "(){},;:.=<>+-*/%!";

}  // namespace

bool is_valid_utf8(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        std::size_t need;
        if (c < 0x80) {
            i += 1;
            continue;
        } else if ((c & 0xe0) == 0xc0 && c >= 0xc2) {
            need = 1;
        } else if ((c & 0xf0) == 0xe0) {
            need = 2;
        } else if ((c & 0xf8) == 0xf0 && c <= 0xf4) {
            need = 3;
        } else {
            return false;
        }
        if (i + need >= text.size()) return false;
        for (std::size_t j = 1; j <= need; ++j) {
            if ((static_cast<unsigned char>(text[i + j]) & 0xc0) != 0x80) return false;
        }
        i += need + 1;
    }
    return true;
}

std::vector<Token> lex(std::string_view text, const std::string& file_id, bool keep_comments) {
    if (!is_valid_utf8(text)) throw LexError(file_id, 1, 1, "source is not valid UTF-8");

    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };

    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        std::size_t tok_line = line, tok_col = col, tok_begin = i;

        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') advance(1);
            if (keep_comments) {
                Token t;
                t.kind = Token::Kind::Comment;
                t.text = std::string(text.substr(tok_begin, i - tok_begin));
                t.span = {tok_begin, i};
                t.line = tok_line;
                t.col = tok_col;
                out.push_back(std::move(t));
            }
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
            advance(2);
            bool closed = false;
            while (i < text.size()) {
                if (text[i] == '*' && i + 1 < text.size() && text[i + 1] == '/') {
                    advance(2);
                    closed = true;
                    break;
                }
                advance(1);
            }
            if (!closed) throw LexError(file_id, tok_line, tok_col, "unterminated block comment");
            if (keep_comments) {
                Token t;
                t.kind = Token::Kind::Comment;
                t.text = std::string(text.substr(tok_begin, i - tok_begin));
                t.span = {tok_begin, i};
                t.line = tok_line;
                t.col = tok_col;
                out.push_back(std::move(t));
            }
            continue;
        }

        Token t;
        t.line = tok_line;
        t.col = tok_col;

        if (ident_start(c)) {
            while (i < text.size() && ident_cont(text[i])) advance(1);
            t.kind = Token::Kind::Ident;
            t.text = std::string(text.substr(tok_begin, i - tok_begin));
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) advance(1);
            t.kind = Token::Kind::Int;
            t.text = std::string(text.substr(tok_begin, i - tok_begin));
        } else if (c == '"') {
            advance(1);
            std::string value;
            bool closed = false;
            while (i < text.size()) {
                char s = text[i];
                if (s == '"') {
                    advance(1);
                    closed = true;
                    break;
                }
                if (s == '\n') break;  // raw newline terminates the scan; reported below
                if (s == '\\') {
                    if (i + 1 >= text.size())
                        throw LexError(file_id, line, col, "unterminated escape in string literal");
                    char e = text[i + 1];
                    switch (e) {
                        case 'n': value.push_back('\n'); break;
                        case 't': value.push_back('\t'); break;
                        case 'r': value.push_back('\r'); break;
                        case '\\': value.push_back('\\'); break;
                        case '"': value.push_back('"'); break;
                        default:
                            throw LexError(file_id, line, col,
                                           std::string("unknown escape '\\") + e + "' in string literal");
                    }
                    advance(2);
                    continue;
                }
                value.push_back(s);
                advance(1);
            }
            if (!closed) throw LexError(file_id, tok_line, tok_col, "unterminated string literal");
            t.kind = Token::Kind::Str;
            t.str_value = std::move(value);
            t.text = std::string(text.substr(tok_begin, i - tok_begin));
        } else {
            bool matched = false;
            for (auto p : kTwoCharPunct) {
                if (text.substr(i, 2) == p) {
                    t.kind = Token::Kind::Punct;
                    t.text = std::string(p);
                    advance(2);
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                if (kOneCharPunct.find(c) != std::string_view::npos) {
                    t.kind = Token::Kind::Punct;
                    t.text = std::string(1, c);
                    advance(1);
                } else {
                    throw LexError(file_id, tok_line, tok_col,
                                   std::string("unexpected character '") + c + "'");
                }
            }
        }
        t.span = {tok_begin, i};
        out.push_back(std::move(t));
    }

    Token eof;
    eof.kind = Token::Kind::Eof;
    eof.span = {text.size(), text.size()};
    eof.line = line;
    eof.col = col;
    out.push_back(std::move(eof));
    return out;
}

std::string render_string_literal(std::string_view value) {
    std::string out = "\"";
    for (char c : value) {
        switch (c) {
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

}  // namespace routeseal::minilang
