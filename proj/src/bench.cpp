#include "routeseal/bench.hpp"

#include <chrono>
#include <cstdio>
#include <limits>
#include <sstream>

#include "routeseal/cryptobox.hpp"
#include "routeseal/errors.hpp"
#include "routeseal/interp.hpp"
#include "routeseal/parser.hpp"
#include "routeseal/protector.hpp"
#include "routeseal/router.hpp"

namespace routeseal::bench {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<canon::SourceFile> fixture_sources(std::uint64_t calls) {
    std::ostringstream main_src;
    main_src << "fn main() {\n"
             << "    let i = 0;\n"
             << "    while i < " << calls << " {\n"
             << "        i = util.bump(i);\n"
             << "    }\n"
             << "    print(i);\n"
             << "}\n";
    std::string util_src = "fn bump(x: Int) -> Int {\n    return x + 1;\n}\n";
    return {
        canon::SourceFile{"main", "main.ml", main_src.str()},
        canon::SourceFile{"util", "util.ml", util_src},
    };
}

struct Workload {
    minilang::Program plain;
    minilang::Program protected_prog;
    std::unique_ptr<router::RouterState> router;

    explicit Workload(std::uint64_t calls) {
        plain = minilang::parse(fixture_sources(calls), "main", "main");

        cryptobox::SeededRandom rng(0x9d867a30c53a11ecULL);
        auto project = protector::protect(plain, rewriter::select_all_cross_file(), rng);
        protected_prog = minilang::parse(project.files, project.config.entry_file,
                                         project.config.entry_fn);
        auto outcome = router::RouterState::init(project.config, project.files);
        if (!outcome.state)
            throw Error("bench fixture failed integrity verification at init");
        router = std::move(outcome.state);
    }

    minilang::ExitReport run_mode(const std::string& mode) {
        if (mode == "direct") return minilang::run(plain);
        router->set_cache_enabled(mode == "routed+cache");
        return minilang::run(protected_prog, router.get());
    }
};

}  // namespace

BenchReport run_bench(std::uint64_t calls, int repetitions) {
    BenchReport report;
    report.calls = calls;
    if (calls == 0 || repetitions <= 0) return report;

    Workload warmup(10'000);
    Workload timed(calls);

    const char* modes[] = {"direct", "routed+cache", "routed-no-cache"};
    std::string expected_output;
    for (const char* mode : modes) {
        auto warm = warmup.run_mode(mode);
        if (!warm.ok()) throw Error("bench warmup failed in mode " + std::string(mode));

        double total = 0.0;
        double best = std::numeric_limits<double>::max();
        for (int rep = 0; rep < repetitions; ++rep) {
            auto start = Clock::now();
            auto result = timed.run_mode(mode);
            std::chrono::duration<double> elapsed = Clock::now() - start;
            if (!result.ok()) throw Error("bench run failed in mode " + std::string(mode));

            std::string joined;
            for (const auto& line : result.output) joined += line + "\n";
            if (expected_output.empty()) {
                expected_output = joined;
            } else if (joined != expected_output) {
                throw Error("bench output diverged in mode " + std::string(mode));
            }

            total += elapsed.count();
            if (elapsed.count() < best) best = elapsed.count();
        }
        report.modes.push_back(ModeTiming{mode, total / repetitions, best});
    }

    double direct = report.modes[0].mean_seconds;
    double cached = report.modes[1].mean_seconds;
    double nocache = report.modes[2].mean_seconds;
    if (direct > 0.0) report.ratio_routed_direct = cached / direct;
    if (cached > 0.0) report.ratio_nocache_cached = nocache / cached;
    return report;
}

std::string format(const BenchReport& report) {
    std::ostringstream out;
    out << "calls: " << report.calls << "\n";
    char line[128];
    for (const auto& m : report.modes) {
        std::snprintf(line, sizeof(line), "mode %-16s mean %.4fs  min %.4fs\n", m.mode.c_str(),
                      m.mean_seconds, m.min_seconds);
        out << line;
    }
    if (!report.modes.empty()) {
        std::snprintf(line, sizeof(line), "ratio routed/direct  %.2f\n",
                      report.ratio_routed_direct);
        out << line;
        std::snprintf(line, sizeof(line), "ratio nocache/cached %.2f\n",
                      report.ratio_nocache_cached);
        out << line;
    }
    return out.str();
}

}  // namespace routeseal::bench
