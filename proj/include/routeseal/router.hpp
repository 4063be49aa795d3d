#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "routeseal/ast.hpp"
#include "routeseal/closedhash.hpp"
#include "routeseal/config.hpp"
#include "routeseal/registry.hpp"

namespace routeseal::router {

struct TamperReport {
    enum class Kind { DecryptionFailure, HashMismatch };

    Kind kind = Kind::HashMismatch;
    std::string file_id;
    std::string detail;  // diagnostic context, not part of the user-visible message

    std::string message() const;
};

std::string_view tamper_kind_name(TamperReport::Kind kind);

// Terminate is the shipping behavior; ReportOnly exists so test harnesses can
// observe detections without unwinding.
enum class ResponseStrategy { Terminate, ReportOnly };

struct ExitDirective {
    std::string message;
    bool stop = false;
};

ExitDirective respond(ResponseStrategy strategy, const TamperReport& report);

// Thrown out of forward_call under Terminate. Deliberately not derived from
// std::exception so interpreter error handling cannot swallow it.
struct TamperSignal {
    TamperReport report;
};

// Memo of resolved dispatches. The envelope tier skips the authenticated open
// entirely on repeat calls; the handle tier skips the registry walk once the
// descriptor is decoded. Both are pure caches: entries are only ever derived
// from the registry, never mutated.
class DispatchCache {
public:
    struct Prepared {
        const minilang::FunctionDef* fn = nullptr;
        std::vector<minilang::Value> literal_args;
    };

    std::shared_ptr<const Prepared> find_sealed(const std::string& envelope) const;
    void insert_sealed(const std::string& envelope, std::shared_ptr<const Prepared> prepared);

    const minilang::FunctionDef* find_handle(const std::string& file_id, const std::string& method,
                                             std::size_t arity) const;
    void insert_handle(const std::string& file_id, const std::string& method, std::size_t arity,
                       const minilang::FunctionDef* fn);

    void record_hit() { hits_.fetch_add(1, std::memory_order_relaxed); }
    void record_miss() { misses_.fetch_add(1, std::memory_order_relaxed); }
    std::uint64_t hits() const { return hits_.load(std::memory_order_relaxed); }
    std::uint64_t misses() const { return misses_.load(std::memory_order_relaxed); }

    void clear();

private:
    static std::string handle_key(std::string_view file_id, std::string_view method,
                                  std::size_t arity);

    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, std::shared_ptr<const Prepared>> sealed_;
    std::unordered_map<std::string, const minilang::FunctionDef*> handles_;
    std::atomic<std::uint64_t> hits_{0};
    std::atomic<std::uint64_t> misses_{0};
};

// Runtime dispatcher. Built by init() from the deployed sources and the
// config; after that, forward_call may be invoked from multiple threads.
class RouterState {
public:
    using Invoker =
        std::function<minilang::Value(const minilang::FunctionDef&, std::vector<minilang::Value>)>;

    struct InitOutcome {
        std::unique_ptr<RouterState> state;   // null when tamper is set
        std::optional<TamperReport> tamper;
    };

    // Canonicalizes every deployed file, recomputes closed hashes over the
    // config's dependency graph and compares them with the expected values.
    // The first mismatch in topological order wins. Keys are derived from the
    // recomputed hashes, never read from storage.
    static InitOutcome init(config::RouterConfig cfg,
                            const std::vector<canon::SourceFile>& deployed,
                            ResponseStrategy response = ResponseStrategy::Terminate);

    // Dispatches descriptors in plaintext with no integrity checking. Only
    // for differential tests of the rewrite itself.
    static std::unique_ptr<RouterState> passthrough(
        ResponseStrategy response = ResponseStrategy::Terminate);

    // The interpreter supplies function lookup and invocation for the
    // duration of a run. The invoker must be thread-safe if forward_call is
    // used concurrently.
    void attach(const minilang::FunctionRegistry* registry, Invoker invoker);
    void detach();

    // Core dispatch: verify the caller's hash, open the envelope, merge
    // arguments, resolve, invoke. Throws TamperSignal under Terminate.
    minilang::Value forward_call(const std::string& caller_file,
                                 const std::string& sealed_envelope,
                                 std::vector<minilang::Value> runtime_args,
                                 const std::string* callee_hint = nullptr);

    const config::RouterConfig& config() const { return config_; }
    const closedhash::ClosedHashTable& runtime_hashes() const { return runtime_; }
    ResponseStrategy response() const { return response_; }

    DispatchCache& cache() { return cache_; }
    const DispatchCache& cache() const { return cache_; }
    void set_cache_enabled(bool enabled) { cache_enabled_ = enabled; }

    bool terminated() const { return terminated_.load(std::memory_order_acquire); }

    // ReportOnly detections, in order of occurrence.
    std::vector<TamperReport> reports() const;

    // Derived key material, copied out. Test introspection only.
    std::map<std::string, closedhash::SymmetricKey> keys() const;

    // Flips one byte of a runtime closed hash so the per-call caller check
    // can be exercised without rebuilding fixtures.
    void corrupt_runtime_hash_for_testing(const std::string& file_id);

private:
    RouterState() = default;

    // Routes a detection to the response strategy. Terminate wipes all key
    // material, latches the first report and throws; ReportOnly records the
    // report and returns Unit so the run can continue.
    minilang::Value handle_tamper(TamperReport report);

    minilang::Value dispatch_passthrough(const std::string& caller_file,
                                         const std::string& descriptor_text,
                                         std::vector<minilang::Value> runtime_args);

    minilang::Value invoke_prepared(const DispatchCache::Prepared& prepared,
                                    std::vector<minilang::Value> runtime_args,
                                    const std::string& caller_file);

    config::RouterConfig config_;
    closedhash::ClosedHashTable runtime_;
    std::map<std::string, Digest> expected_closed_;
    std::map<std::string, closedhash::SymmetricKey> keys_;
    DispatchCache cache_;
    ResponseStrategy response_ = ResponseStrategy::Terminate;
    bool passthrough_ = false;
    std::atomic<bool> cache_enabled_{true};

    const minilang::FunctionRegistry* registry_ = nullptr;
    Invoker invoker_;

    std::atomic<bool> terminated_{false};
    mutable std::mutex tamper_mutex_;
    std::optional<TamperReport> first_report_;
    std::vector<TamperReport> reports_;
};

}  // namespace routeseal::router
