#include <doctest.h>

#include <atomic>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "routeseal/base64.hpp"
#include "routeseal/cryptobox.hpp"
#include "routeseal/errors.hpp"
#include "routeseal/interp.hpp"
#include "routeseal/parser.hpp"
#include "routeseal/protector.hpp"
#include "routeseal/registry.hpp"
#include "routeseal/router.hpp"
#include "oracles.hpp"

using namespace routeseal;
using minilang::ExitStatus;
using router::ResponseStrategy;
using router::RouterState;
using router::TamperReport;

namespace {

struct Protected {
    minilang::Program original;
    protector::ProtectedProject prot;
    minilang::Program deployed;
};

Protected make_protected(const std::vector<std::pair<std::string, std::string>>& files,
                         const std::string& entry_file = "main",
                         const std::string& entry_fn = "main", std::uint64_t seed = 1) {
    std::vector<canon::SourceFile> sources;
    for (const auto& [id, text] : files) sources.push_back({id, id + ".ml", text});
    Protected out;
    out.original = minilang::parse(sources, entry_file, entry_fn);
    cryptobox::SeededRandom rng(seed);
    out.prot = protector::protect(out.original, rewriter::select_all_cross_file(), rng);
    out.deployed = minilang::parse(out.prot.files, entry_file, entry_fn);
    return out;
}

Protected make_protected_fixture(const std::string& name, std::uint64_t seed = 1) {
    manifest::ProjectManifest m;
    auto files = testing::load_fixture(name, &m);
    Protected out;
    out.original = minilang::parse(files, m.entry_file, m.entry_fn);
    cryptobox::SeededRandom rng(seed);
    out.prot = protector::protect(out.original, rewriter::select_all_cross_file(), rng);
    out.deployed = minilang::parse(out.prot.files, m.entry_file, m.entry_fn);
    return out;
}

std::vector<std::string> envelopes_in(const std::string& text) {
    std::vector<std::string> out;
    const std::string needle = "forward_call(\"";
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        pos += needle.size();
        auto end = text.find('"', pos);
        REQUIRE(end != std::string::npos);
        out.push_back(text.substr(pos, end - pos));
        pos = end;
    }
    return out;
}

const std::string& text_of(const protector::ProtectedProject& prot, const std::string& id) {
    for (const auto& f : prot.files)
        if (f.file_id == id) return f.text;
    static const std::string empty;
    FAIL("file not found in protected project");
    return empty;
}

// Shaped like a real envelope (iv + one block + tag) but random, so it can
// never authenticate.
std::string junk_envelope(std::mt19937_64& rng) {
    std::vector<std::uint8_t> bytes(64);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
    return base64_encode(bytes);
}

const std::vector<std::pair<std::string, std::string>> kLoopProject = {
    {"main",
     "fn main() { let i = 0; while i < 20 { i = util.bump(i); } print(i); }"},
    {"util", "fn bump(x: Int) -> Int { return x + 1; }"}};

}  // namespace

TEST_CASE("tamper reports render the pinned message") {
    TamperReport hash{TamperReport::Kind::HashMismatch, "util", "detail"};
    CHECK(hash.message() == "PLAGIARISM ATTEMPT DETECTED: HashMismatch in util");
    TamperReport dec{TamperReport::Kind::DecryptionFailure, "main", ""};
    CHECK(dec.message() == "PLAGIARISM ATTEMPT DETECTED: DecryptionFailure in main");

    auto stop = router::respond(ResponseStrategy::Terminate, hash);
    CHECK(stop.stop);
    CHECK(stop.message == hash.message());
    auto go = router::respond(ResponseStrategy::ReportOnly, hash);
    CHECK_FALSE(go.stop);
}

TEST_CASE("init accepts the untampered protected project") {
    auto fx = make_protected_fixture("chain");
    auto outcome = RouterState::init(fx.prot.config, fx.prot.files);
    REQUIRE(outcome.state != nullptr);
    CHECK_FALSE(outcome.tamper.has_value());

    const auto& state = *outcome.state;
    for (const auto& [id, expected] : fx.prot.config.file_hashes) {
        CHECK(state.runtime_hashes().closed.at(id) == expected);
    }
    // Keys exist exactly for the files somebody calls into.
    auto keys = state.keys();
    CHECK(keys.size() == 2);
    CHECK(keys.count("mid") == 1);
    CHECK(keys.count("leaf") == 1);
    CHECK(keys.count("main") == 0);
}

TEST_CASE("protected fixtures run to the original output") {
    for (const char* name : {"fib", "chain", "strings", "diamond"}) {
        CAPTURE(name);
        auto fx = make_protected_fixture(name);
        auto original = minilang::run(fx.original);
        REQUIRE(original.ok());

        auto outcome = RouterState::init(fx.prot.config, fx.prot.files);
        REQUIRE(outcome.state != nullptr);
        auto routed = minilang::run(fx.deployed, outcome.state.get());
        REQUIRE(routed.ok());
        CHECK(routed.output == original.output);
    }
}

TEST_CASE("init flags a code edit as a hash mismatch in the right file") {
    auto fx = make_protected_fixture("chain");

    auto tampered = fx.prot.files;
    for (auto& f : tampered) {
        if (f.file_id == "leaf") {
            auto pos = f.text.find("40");
            REQUIRE(pos != std::string::npos);
            f.text.replace(pos, 2, "41");
        }
    }
    auto outcome = RouterState::init(fx.prot.config, tampered);
    CHECK(outcome.state == nullptr);
    REQUIRE(outcome.tamper.has_value());
    CHECK(outcome.tamper->kind == TamperReport::Kind::HashMismatch);
    CHECK(outcome.tamper->file_id == "leaf");

    SUBCASE("the first file in dependency order wins when several differ") {
        for (auto& f : tampered) {
            if (f.file_id == "main") f.text += "\nfn extra() { }\n";
        }
        auto multi = RouterState::init(fx.prot.config, tampered);
        REQUIRE(multi.tamper.has_value());
        CHECK(multi.tamper->file_id == "leaf");  // leaf precedes main in topo order
    }
}

TEST_CASE("init ignores layout-only edits") {
    auto fx = make_protected_fixture("chain");
    std::mt19937_64 rng(13);
    auto deployed = fx.prot.files;
    for (auto& f : deployed) {
        auto variants = testing::layout_only_mutations(f.text, f.file_id, 4, rng);
        f.text = variants[rng() % variants.size()];
    }
    auto outcome = RouterState::init(fx.prot.config, deployed);
    CHECK(outcome.state != nullptr);
    CHECK_FALSE(outcome.tamper.has_value());
}

TEST_CASE("init treats missing or unreadable sources as tampering") {
    auto fx = make_protected_fixture("chain");

    SUBCASE("missing file") {
        std::vector<canon::SourceFile> partial;
        for (const auto& f : fx.prot.files)
            if (f.file_id != "mid") partial.push_back(f);
        auto outcome = RouterState::init(fx.prot.config, partial);
        REQUIRE(outcome.tamper.has_value());
        CHECK(outcome.tamper->kind == TamperReport::Kind::HashMismatch);
        CHECK(outcome.tamper->file_id == "mid");
    }
    SUBCASE("untokenizable file") {
        auto broken = fx.prot.files;
        for (auto& f : broken)
            if (f.file_id == "mid") f.text += "\n\"unterminated";
        auto outcome = RouterState::init(fx.prot.config, broken);
        REQUIRE(outcome.tamper.has_value());
        CHECK(outcome.tamper->file_id == "mid");
    }
}

TEST_CASE("init rejects inconsistent configs outright") {
    auto fx = make_protected_fixture("chain");

    SUBCASE("deployed file the config does not know") {
        auto extra = fx.prot.files;
        extra.push_back({"stray", "stray.ml", "fn s() { }"});
        CHECK_THROWS_AS(RouterState::init(fx.prot.config, extra), ConfigError);
    }
    SUBCASE("cyclic dependency relation") {
        auto cfg = fx.prot.config;
        cfg.deps.insert({"leaf", "main"});
        CHECK_THROWS_AS(RouterState::init(cfg, fx.prot.files), ConfigError);
    }
    SUBCASE("caller without a nonce") {
        auto cfg = fx.prot.config;
        cfg.nonces.erase("mid");
        CHECK_THROWS_AS(RouterState::init(cfg, fx.prot.files), ConfigError);
    }
}

TEST_CASE("the caller hash is re-checked on every dispatch") {
    auto fx = make_protected_fixture("chain");
    auto outcome = RouterState::init(fx.prot.config, fx.prot.files);
    REQUIRE(outcome.state != nullptr);
    outcome.state->corrupt_runtime_hash_for_testing("main");

    auto report = minilang::run(fx.deployed, outcome.state.get());
    CHECK(report.status == ExitStatus::TamperDetected);
    CHECK(report.tamper_message == "PLAGIARISM ATTEMPT DETECTED: HashMismatch in main");
    REQUIRE_FALSE(report.output.empty());
    CHECK(report.output.back() == report.tamper_message);
}

TEST_CASE("an envelope swap passes init but dies at dispatch") {
    auto fx = make_protected_fixture("chain");
    std::mt19937_64 rng(21);

    auto tampered = fx.prot.files;
    for (auto& f : tampered) {
        if (f.file_id != "main") continue;
        auto envelopes = envelopes_in(f.text);
        REQUIRE_FALSE(envelopes.empty());
        auto pos = f.text.find(envelopes[0]);
        f.text.replace(pos, envelopes[0].size(), junk_envelope(rng));
    }

    // The canonical form masks the first argument, so init still passes.
    auto outcome = RouterState::init(fx.prot.config, tampered);
    REQUIRE(outcome.state != nullptr);

    auto deployed = minilang::parse(tampered, "main", "main");
    auto report = minilang::run(deployed, outcome.state.get());
    CHECK(report.status == ExitStatus::TamperDetected);
    CHECK(report.tamper_message == "PLAGIARISM ATTEMPT DETECTED: DecryptionFailure in main");

    SUBCASE("report-only runs record the detection and continue") {
        auto observing = RouterState::init(fx.prot.config, tampered, ResponseStrategy::ReportOnly);
        REQUIRE(observing.state != nullptr);
        auto soft = minilang::run(deployed, observing.state.get());
        CHECK(soft.status == ExitStatus::Normal);
        CHECK(soft.output == std::vector<std::string>{"()", "leaf"});
        auto reports = observing.state->reports();
        REQUIRE(reports.size() == 1);
        CHECK(reports[0].kind == TamperReport::Kind::DecryptionFailure);
        CHECK(reports[0].file_id == "main");
    }
}

TEST_CASE("terminate wipes keys and latches the first report") {
    auto fx = make_protected(kLoopProject);
    auto outcome = RouterState::init(fx.prot.config, fx.prot.files);
    REQUIRE(outcome.state != nullptr);
    auto& state = *outcome.state;
    CHECK(state.keys().size() == 1);

    auto registry = minilang::build_registry(fx.deployed);
    state.attach(&registry, [](const minilang::FunctionDef&, std::vector<minilang::Value>) {
        return minilang::Value{std::int64_t{99}};
    });

    std::mt19937_64 rng(3);
    auto junk = junk_envelope(rng);
    bool threw = false;
    try {
        state.forward_call("main", junk, {});
    } catch (const router::TamperSignal& sig) {
        threw = true;
        CHECK(sig.report.kind == TamperReport::Kind::DecryptionFailure);
        CHECK(sig.report.file_id == "main");
    }
    REQUIRE(threw);
    CHECK(state.terminated());
    CHECK(state.keys().empty());

    // Even a genuine envelope is refused now, with the original report.
    auto good = envelopes_in(text_of(fx.prot, "main"));
    REQUIRE_FALSE(good.empty());
    threw = false;
    try {
        state.forward_call("main", good[0], {minilang::Value{std::int64_t{1}}});
    } catch (const router::TamperSignal& sig) {
        threw = true;
        CHECK(sig.report.kind == TamperReport::Kind::DecryptionFailure);
        CHECK(sig.report.file_id == "main");
    }
    REQUIRE(threw);
    state.detach();
}

TEST_CASE("crafted descriptors are classified as tampering") {
    auto fx = make_protected(kLoopProject);
    auto outcome = RouterState::init(fx.prot.config, fx.prot.files, ResponseStrategy::ReportOnly);
    REQUIRE(outcome.state != nullptr);
    auto& state = *outcome.state;
    auto registry = minilang::build_registry(fx.deployed);
    state.attach(&registry, [](const minilang::FunctionDef&, std::vector<minilang::Value>) {
        return minilang::Value{std::int64_t{7}};
    });

    auto util_key = state.keys().at("util");
    cryptobox::SeededRandom rng(8);
    auto sealed_text = [&](std::string_view text) {
        return cryptobox::seal(util_key, text, rng).encode();
    };

    SUBCASE("descriptor naming a missing function blames the destination") {
        state.forward_call("main", sealed_text("util-ghost-null-null"), {});
        auto reports = state.reports();
        REQUIRE(reports.size() == 1);
        CHECK(reports[0].kind == TamperReport::Kind::DecryptionFailure);
        CHECK(reports[0].file_id == "util");
        CHECK(reports[0].detail.find("missing function") != std::string::npos);
    }
    SUBCASE("descriptor whose literal does not parse blames the caller") {
        state.forward_call("main", sealed_text("util-bump-Int-xx"), {});
        auto reports = state.reports();
        REQUIRE(reports.size() == 1);
        CHECK(reports[0].file_id == "main");
    }
    SUBCASE("descriptor destination must match the authenticating key") {
        state.forward_call("main", sealed_text("other-bump-null-null"),
                           {minilang::Value{std::int64_t{1}}});
        auto reports = state.reports();
        REQUIRE(reports.size() == 1);
        CHECK(reports[0].file_id == "main");
    }
    SUBCASE("unknown caller fails the hash check") {
        state.forward_call("ghost", sealed_text("util-bump-null-null"),
                           {minilang::Value{std::int64_t{1}}});
        auto reports = state.reports();
        REQUIRE(reports.size() == 1);
        CHECK(reports[0].kind == TamperReport::Kind::HashMismatch);
        CHECK(reports[0].file_id == "ghost");
    }
    SUBCASE("cached envelope with the wrong argument count is refused") {
        auto env = sealed_text("util-bump-null-null");
        auto v = state.forward_call("main", env, {minilang::Value{std::int64_t{1}}});
        CHECK(std::get<std::int64_t>(v) == 7);
        CHECK(state.reports().empty());
        state.forward_call("main", env,
                           {minilang::Value{std::int64_t{1}}, minilang::Value{std::int64_t{2}}});
        auto reports = state.reports();
        REQUIRE(reports.size() == 1);
        CHECK(reports[0].detail.find("argument count") != std::string::npos);
    }
    state.detach();
}

TEST_CASE("dispatch cache short-circuits repeated calls") {
    auto fx = make_protected(kLoopProject);

    SUBCASE("hit and miss counters account for every routed call") {
        auto outcome = RouterState::init(fx.prot.config, fx.prot.files);
        REQUIRE(outcome.state != nullptr);
        auto report = minilang::run(fx.deployed, outcome.state.get());
        REQUIRE(report.ok());
        CHECK(report.output == std::vector<std::string>{"20"});

        const auto& cache = outcome.state->cache();
        CHECK(cache.misses() == 1);  // one distinct envelope
        CHECK(cache.hits() == 19);
        CHECK(cache.hits() + cache.misses() == 20);
        CHECK(cache.hits() >= 20 - 1);  // calls minus distinct callees
    }
    SUBCASE("disabling the cache changes nothing observable") {
        auto outcome = RouterState::init(fx.prot.config, fx.prot.files);
        REQUIRE(outcome.state != nullptr);
        outcome.state->set_cache_enabled(false);
        auto report = minilang::run(fx.deployed, outcome.state.get());
        REQUIRE(report.ok());
        CHECK(report.output == std::vector<std::string>{"20"});
        CHECK(outcome.state->cache().hits() == 0);
        CHECK(outcome.state->cache().misses() == 0);
    }
}

TEST_CASE("the callee hint selects the key directly but stays optional") {
    auto fx = make_protected(kLoopProject);
    auto outcome = RouterState::init(fx.prot.config, fx.prot.files);
    REQUIRE(outcome.state != nullptr);
    auto& state = *outcome.state;
    auto registry = minilang::build_registry(fx.deployed);
    state.attach(&registry, [](const minilang::FunctionDef&, std::vector<minilang::Value>) {
        return minilang::Value{std::int64_t{5}};
    });
    state.set_cache_enabled(false);

    auto env = envelopes_in(text_of(fx.prot, "main")).at(0);
    std::vector<minilang::Value> args{minilang::Value{std::int64_t{1}}};

    auto plain = state.forward_call("main", env, args);
    CHECK(std::get<std::int64_t>(plain) == 5);

    std::string right = "util", wrong = "nowhere";
    auto hinted = state.forward_call("main", env, args, &right);
    CHECK(std::get<std::int64_t>(hinted) == 5);
    auto fallback = state.forward_call("main", env, args, &wrong);
    CHECK(std::get<std::int64_t>(fallback) == 5);
    state.detach();
}

TEST_CASE("forward_call is safe under concurrent use") {
    auto fx = make_protected(
        {{"main", "fn main() { util.f1(); other.g1(); }"},
         {"util", "fn f1() { }"},
         {"other", "fn g1() { }"}});
    auto outcome = RouterState::init(fx.prot.config, fx.prot.files);
    REQUIRE(outcome.state != nullptr);
    auto& state = *outcome.state;
    auto registry = minilang::build_registry(fx.deployed);
    std::atomic<int> invoked{0};
    state.attach(&registry, [&](const minilang::FunctionDef&, std::vector<minilang::Value>) {
        invoked.fetch_add(1, std::memory_order_relaxed);
        return minilang::Value{};
    });

    auto envelopes = envelopes_in(text_of(fx.prot, "main"));
    REQUIRE(envelopes.size() == 2);

    const int kThreads = 8, kCalls = 250;
    std::atomic<int> failures{0};
    std::vector<std::thread> workers;
    for (int t = 0; t < kThreads; ++t) {
        workers.emplace_back([&, t] {
            for (int i = 0; i < kCalls; ++i) {
                try {
                    state.forward_call("main", envelopes[(t + i) % 2], {});
                } catch (...) {
                    failures.fetch_add(1, std::memory_order_relaxed);
                }
            }
        });
    }
    for (auto& w : workers) w.join();

    CHECK(failures.load() == 0);
    CHECK(invoked.load() == kThreads * kCalls);
    const auto& cache = state.cache();
    CHECK(cache.hits() + cache.misses() == kThreads * kCalls);
    // Every thread can miss each envelope at most once before the insert wins.
    CHECK(cache.misses() <= kThreads * 2);
    CHECK(cache.misses() >= 2);
    state.detach();
}
