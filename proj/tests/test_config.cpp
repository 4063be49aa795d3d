#include <doctest.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "routeseal/config.hpp"
#include "routeseal/errors.hpp"

using namespace routeseal;
using config::RouterConfig;

namespace {

Digest digest_of(std::uint8_t fill) {
    Digest d;
    d.bytes.fill(fill);
    return d;
}

RouterConfig small_config() {
    RouterConfig cfg;
    cfg.entry_file = "main";
    cfg.entry_fn = "main";
    cfg.file_hashes["main"] = digest_of(0x00);
    cfg.file_hashes["util"] = digest_of(0xff);
    cfg.nonces["util"].fill(0x00);
    cfg.deps.insert({"main", "util"});
    return cfg;
}

}  // namespace

TEST_CASE("emit_config produces the pinned line format") {
    const std::string kZeros = "AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA=";
    const std::string kOnes = "//////////////////////////////////////////8=";
    CHECK(config::emit_config(small_config()) ==
          "version 1\n"
          "entry main.main\n"
          "file main hash=" + kZeros + "\n"
          "file util hash=" + kOnes + "\n"
          "nonce util iv=" + kZeros + "\n"
          "dep main -> util\n");
}

TEST_CASE("emission orders every section lexicographically") {
    RouterConfig cfg;
    cfg.entry_file = "zz";
    cfg.entry_fn = "go";
    for (const char* f : {"zz", "aa", "mm"}) cfg.file_hashes[f] = digest_of(1);
    cfg.nonces["mm"].fill(2);
    cfg.nonces["aa"].fill(2);
    cfg.deps = {{"zz", "mm"}, {"mm", "aa"}, {"zz", "aa"}};
    cfg.removed = {{"aa", "zz"}};

    auto text = config::emit_config(cfg);
    CHECK(text.find("file aa ") < text.find("file mm "));
    CHECK(text.find("file mm ") < text.find("file zz "));
    CHECK(text.find("nonce aa ") < text.find("nonce mm "));
    CHECK(text.find("dep mm -> aa") < text.find("dep zz -> aa"));
    CHECK(text.find("dep zz -> aa") < text.find("dep zz -> mm"));
    CHECK(text.find("removed aa -> zz") != std::string::npos);

    // Emission is a pure function: two calls, identical bytes.
    CHECK(config::emit_config(cfg) == text);
}

TEST_CASE("parse_config inverts emit_config") {
    SUBCASE("hand-built config") {
        auto cfg = small_config();
        CHECK(config::parse_config(config::emit_config(cfg)) == cfg);
    }
    SUBCASE("random configs") {
        std::mt19937_64 rng(31);
        for (int round = 0; round < 50; ++round) {
            RouterConfig cfg;
            int n = 1 + static_cast<int>(rng() % 6);
            std::vector<std::string> ids;
            for (int i = 0; i < n; ++i) {
                std::string id = "f" + std::to_string(i);
                ids.push_back(id);
                Digest d;
                for (auto& b : d.bytes) b = static_cast<std::uint8_t>(rng());
                cfg.file_hashes[id] = d;
            }
            cfg.entry_file = ids[rng() % ids.size()];
            cfg.entry_fn = "main";
            for (int i = 0; i < n; ++i) {
                if (rng() % 2) {
                    auto& nonce = cfg.nonces[ids[i]];
                    for (auto& b : nonce) b = static_cast<std::uint8_t>(rng());
                }
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    switch (rng() % 4) {
                        case 0: cfg.deps.insert({ids[i], ids[j]}); break;
                        case 1: cfg.removed.insert({ids[i], ids[j]}); break;
                        default: break;
                    }
                }
            }
            CHECK(config::parse_config(config::emit_config(cfg)) == cfg);
        }
    }
}

TEST_CASE("parse_config tolerates comments, blank lines and crlf") {
    auto cfg = small_config();
    auto text = config::emit_config(cfg);
    std::string decorated = "# generated\n\n" + text + "\n# trailing note\n";
    CHECK(config::parse_config(decorated) == cfg);

    std::string crlf;
    for (char c : text) {
        if (c == '\n') crlf += "\r\n";
        else crlf += c;
    }
    CHECK(config::parse_config(crlf) == cfg);
}

TEST_CASE("parse_config rejects malformed input") {
    auto base = config::emit_config(small_config());

    CHECK_THROWS_AS(config::parse_config(""), ConfigError);
    CHECK_THROWS_AS(config::parse_config("version 2\nentry a.b\nfile a hash=x\n"), ConfigError);
    CHECK_THROWS_AS(config::parse_config("entry main.main\n"), ConfigError);   // no version
    CHECK_THROWS_AS(config::parse_config("version 1\n"), ConfigError);         // no entry
    CHECK_THROWS_AS(config::parse_config(base + "banana main\n"), ConfigError);
    CHECK_THROWS_AS(config::parse_config(base + "file util hash=AAAA\n"), ConfigError);
    CHECK_THROWS_AS(config::parse_config(base + "nonce ghost iv=AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA=\n"),
                    ConfigError);
    CHECK_THROWS_AS(config::parse_config(base + "dep util -> ghost\n"), ConfigError);
    CHECK_THROWS_AS(config::parse_config(base + "removed ghost -> util\n"), ConfigError);
    CHECK_THROWS_AS(config::parse_config(base + "dep main util\n"), ConfigError);

    // Duplicate records.
    CHECK_THROWS_AS(config::parse_config(base + "file util hash=AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA=\n"),
                    ConfigError);
    CHECK_THROWS_AS(config::parse_config(base + "dep main -> util\n"), ConfigError);

    // Entry must name a hashed file and carry a dot.
    CHECK_THROWS_AS(config::parse_config("version 1\nentry nodot\n"), ConfigError);
    CHECK_THROWS_AS(
        config::parse_config("version 1\nentry ghost.main\nfile main hash=AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA=\n"),
        ConfigError);

    // Error messages carry line numbers.
    try {
        config::parse_config("version 1\nmystery\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}
