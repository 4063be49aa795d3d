#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace routeseal::bench {

struct ModeTiming {
    std::string mode;
    double mean_seconds = 0.0;
    double min_seconds = 0.0;
};

struct BenchReport {
    std::uint64_t calls = 0;
    std::vector<ModeTiming> modes;        // direct, routed+cache, routed-no-cache
    double ratio_routed_direct = 0.0;     // cached mean / direct mean
    double ratio_nocache_cached = 0.0;    // no-cache mean / cached mean
};

// Times a tight cross-file call loop in three modes: plain interpretation,
// dispatch through the protected path with the cache on, and with the cache
// off (full authenticated open per call). A separate small project (10^4
// calls) runs once per mode as warmup and is excluded from timing; each mode
// then runs `repetitions` timed passes.
BenchReport run_bench(std::uint64_t calls, int repetitions = 5);

std::string format(const BenchReport& report);

}  // namespace routeseal::bench
