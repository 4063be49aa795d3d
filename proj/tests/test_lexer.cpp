#include <doctest.h>

#include <string>
#include <vector>

#include "routeseal/errors.hpp"
#include "routeseal/lexer.hpp"

using namespace routeseal;
using minilang::Token;

namespace {

std::vector<std::string> lexemes(const std::string& text) {
    std::vector<std::string> out;
    for (const auto& t : minilang::lex(text, "t")) {
        if (t.kind == Token::Kind::Eof) break;
        out.push_back(t.text);
    }
    return out;
}

}  // namespace

TEST_CASE("lexer splits identifiers, numbers and punctuation") {
    auto toks = lexemes("fn add(a: Int) -> Int { return a + 41; }");
    std::vector<std::string> want = {"fn", "add", "(",  "a", ":", "Int", ")",  "->", "Int",
                                     "{",  "return", "a", "+", "41", ";", "}"};
    CHECK(toks == want);
}

TEST_CASE("lexer applies max munch to two-char operators") {
    auto toks = lexemes("a==b!=c<=d>=e&&f||g->h");
    std::vector<std::string> want = {"a", "==", "b", "!=", "c", "<=", "d", ">=",
                                     "e", "&&", "f", "||", "g", "->", "h"};
    CHECK(toks == want);
    CHECK(lexemes("a=-b") == std::vector<std::string>{"a", "=", "-", "b"});
}

TEST_CASE("lexer decodes string escapes") {
    auto toks = minilang::lex(R"(x = "a\n\t\"q\\z";)", "t");
    REQUIRE(toks.size() >= 4);
    const Token& s = toks[2];
    CHECK(s.kind == Token::Kind::Str);
    CHECK(s.str_value == "a\n\t\"q\\z");
    CHECK(s.text == R"("a\n\t\"q\\z")");
}

TEST_CASE("lexer drops comments by default and keeps them on request") {
    const std::string src = "a // line\n/* block\nspans lines */ b";
    auto plain = lexemes(src);
    CHECK(plain == std::vector<std::string>{"a", "b"});

    auto kept = minilang::lex(src, "t", true);
    std::size_t comments = 0;
    for (const auto& t : kept)
        if (t.kind == Token::Kind::Comment) ++comments;
    CHECK(comments == 2);
    CHECK(kept[1].text == "// line");
    CHECK(kept[2].text == "/* block\nspans lines */");
}

TEST_CASE("lexer records spans, lines and columns") {
    const std::string src = "ab\n  cd";
    auto toks = minilang::lex(src, "t");
    REQUIRE(toks.size() == 3);
    CHECK(toks[0].span.begin == 0);
    CHECK(toks[0].span.end == 2);
    CHECK(toks[0].line == 1);
    CHECK(toks[0].col == 1);
    CHECK(toks[1].span.begin == 5);
    CHECK(toks[1].span.end == 7);
    CHECK(toks[1].line == 2);
    CHECK(toks[1].col == 3);
    CHECK(src.substr(toks[1].span.begin, toks[1].span.end - toks[1].span.begin) == "cd");
    CHECK(toks[2].kind == Token::Kind::Eof);
}

TEST_CASE("lexer rejects malformed input with positions") {
    CHECK_THROWS_AS(minilang::lex("\"open", "t"), LexError);
    CHECK_THROWS_AS(minilang::lex("/* open", "t"), LexError);
    CHECK_THROWS_AS(minilang::lex("a @ b", "t"), LexError);
    CHECK_THROWS_AS(minilang::lex("\"bad \\q escape\"", "t"), LexError);
    CHECK_THROWS_AS(minilang::lex("\"line\nbreak\"", "t"), LexError);
    CHECK_THROWS_AS(minilang::lex("ok \xff\xfe", "t"), LexError);

    try {
        minilang::lex("ab\n  @", "t");
        FAIL("expected LexError");
    } catch (const LexError& e) {
        CHECK(e.line == 2);
        CHECK(e.col == 3);
        CHECK(e.file_id == "t");
    }
}

TEST_CASE("string literal rendering round-trips through the lexer") {
    const std::vector<std::string> values = {
        "", "plain", "with space", "quote\"inside", "back\\slash", "tab\t nl\n cr\r", "<ENC>",
        "a-b,c%d"};
    for (const auto& v : values) {
        CAPTURE(v);
        auto rendered = minilang::render_string_literal(v);
        auto toks = minilang::lex(rendered, "t");
        REQUIRE(toks.size() == 2);
        CHECK(toks[0].kind == Token::Kind::Str);
        CHECK(toks[0].str_value == v);
    }
}

TEST_CASE("utf8 validation accepts multibyte text and rejects junk") {
    CHECK(minilang::is_valid_utf8("ascii only"));
    CHECK(minilang::is_valid_utf8("caf\xc3\xa9"));
    CHECK(minilang::is_valid_utf8("\xe2\x82\xac"));
    CHECK_FALSE(minilang::is_valid_utf8("\x80"));
    CHECK_FALSE(minilang::is_valid_utf8("\xc3"));
    CHECK_FALSE(minilang::is_valid_utf8("\xc0\xaf"));
    CHECK_FALSE(minilang::is_valid_utf8("\xf5\x80\x80\x80"));
}
