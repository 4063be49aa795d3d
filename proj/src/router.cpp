#include "routeseal/router.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <utility>

#include "routeseal/canon.hpp"
#include "routeseal/cryptobox.hpp"
#include "routeseal/depgraph.hpp"
#include "routeseal/descriptor.hpp"
#include "routeseal/errors.hpp"

namespace routeseal::router {

using minilang::Value;

std::string_view tamper_kind_name(TamperReport::Kind kind) {
    switch (kind) {
        case TamperReport::Kind::DecryptionFailure: return "DecryptionFailure";
        case TamperReport::Kind::HashMismatch: return "HashMismatch";
    }
    return "HashMismatch";
}

std::string TamperReport::message() const {
    std::string out = "PLAGIARISM ATTEMPT DETECTED: ";
    out += tamper_kind_name(kind);
    out += " in ";
    out += file_id;
    return out;
}

ExitDirective respond(ResponseStrategy strategy, const TamperReport& report) {
    ExitDirective d;
    d.message = report.message();
    d.stop = strategy == ResponseStrategy::Terminate;
    return d;
}

std::string DispatchCache::handle_key(std::string_view file_id, std::string_view method,
                                      std::size_t arity) {
    std::string k;
    k.reserve(file_id.size() + method.size() + 8);
    k.append(file_id);
    k.push_back('\x1f');
    k.append(method);
    k.push_back('\x1f');
    k.append(std::to_string(arity));
    return k;
}

std::shared_ptr<const DispatchCache::Prepared> DispatchCache::find_sealed(
    const std::string& envelope) const {
    std::shared_lock lock(mutex_);
    auto it = sealed_.find(envelope);
    return it == sealed_.end() ? nullptr : it->second;
}

void DispatchCache::insert_sealed(const std::string& envelope,
                                  std::shared_ptr<const Prepared> prepared) {
    std::unique_lock lock(mutex_);
    sealed_.emplace(envelope, std::move(prepared));
}

const minilang::FunctionDef* DispatchCache::find_handle(const std::string& file_id,
                                                        const std::string& method,
                                                        std::size_t arity) const {
    std::shared_lock lock(mutex_);
    auto it = handles_.find(handle_key(file_id, method, arity));
    return it == handles_.end() ? nullptr : it->second;
}

void DispatchCache::insert_handle(const std::string& file_id, const std::string& method,
                                  std::size_t arity, const minilang::FunctionDef* fn) {
    std::unique_lock lock(mutex_);
    handles_.emplace(handle_key(file_id, method, arity), fn);
}

void DispatchCache::clear() {
    std::unique_lock lock(mutex_);
    sealed_.clear();
    handles_.clear();
}

namespace {

std::optional<Value> literal_to_value(const std::string& type, const std::string& text) {
    if (type == "Int") {
        if (text.empty()) return std::nullopt;
        errno = 0;
        char* end = nullptr;
        long long v = std::strtoll(text.c_str(), &end, 10);
        if (errno != 0 || end != text.c_str() + text.size()) return std::nullopt;
        return Value{static_cast<std::int64_t>(v)};
    }
    if (type == "Str") return Value{text};
    if (type == "Bool") {
        if (text == "true") return Value{true};
        if (text == "false") return Value{false};
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

RouterState::InitOutcome RouterState::init(config::RouterConfig cfg,
                                           const std::vector<canon::SourceFile>& deployed,
                                           ResponseStrategy response) {
    std::unique_ptr<RouterState> state(new RouterState());
    state->config_ = std::move(cfg);
    state->response_ = response;
    const auto& config = state->config_;

    std::map<std::string, Digest> plain;
    std::set<std::string> untokenizable;
    for (const auto& file : deployed) {
        if (!config.file_hashes.count(file.file_id))
            throw ConfigError("deployed file " + file.file_id + " not named in config");
        if (plain.count(file.file_id))
            throw ConfigError("duplicate deployed file " + file.file_id);
        try {
            plain.emplace(file.file_id, canon::plain_hash(canon::canonicalize(file)));
        } catch (const LexError&) {
            untokenizable.insert(file.file_id);
            plain.emplace(file.file_id, Digest{});
        }
    }

    depgraph::DependencyGraph dag;
    for (const auto& [file_id, _] : config.file_hashes) dag.nodes.insert(file_id);
    dag.arcs = config.deps;
    dag.removed_arcs = config.removed;

    std::vector<std::string> order;
    try {
        order = depgraph::topo_sort(dag);
    } catch (const CycleError&) {
        throw ConfigError("dependency graph in config is cyclic");
    }

    for (const auto& node : order) {
        auto tamper = [&](std::string detail) {
            InitOutcome out;
            out.tamper = TamperReport{TamperReport::Kind::HashMismatch, node, std::move(detail)};
            return out;
        };
        auto plain_it = plain.find(node);
        if (plain_it == plain.end()) return tamper("listed file missing from deployment");
        if (untokenizable.count(node)) return tamper("source is not tokenizable");

        Digest closed = plain_it->second;
        for (auto it = dag.arcs.lower_bound({node, std::string()});
             it != dag.arcs.end() && it->first == node; ++it) {
            closed ^= state->runtime_.closed.at(it->second);
        }
        state->runtime_.plain.emplace(node, plain_it->second);
        state->runtime_.closed.emplace(node, closed);
        if (!(closed == config.file_hashes.at(node)))
            return tamper("closed hash differs from expected value");
    }

    state->expected_closed_ = config.file_hashes;

    std::map<std::string, std::set<std::string>> callers;
    for (const auto& [from, to] : config.deps) callers[to].insert(from);
    for (const auto& [from, to] : config.removed) callers[to].insert(from);
    for (const auto& [callee, sources] : callers) {
        auto nonce_it = config.nonces.find(callee);
        if (nonce_it == config.nonces.end())
            throw ConfigError("file " + callee + " has callers but no nonce");
        closedhash::KeyNonce nonce{callee, nonce_it->second};
        state->keys_.emplace(callee,
                             closedhash::derive_key(callee, sources, state->runtime_, nonce));
    }

    InitOutcome out;
    out.state = std::move(state);
    return out;
}

std::unique_ptr<RouterState> RouterState::passthrough(ResponseStrategy response) {
    std::unique_ptr<RouterState> state(new RouterState());
    state->passthrough_ = true;
    state->response_ = response;
    return state;
}

void RouterState::attach(const minilang::FunctionRegistry* registry, Invoker invoker) {
    registry_ = registry;
    invoker_ = std::move(invoker);
}

void RouterState::detach() {
    registry_ = nullptr;
    invoker_ = nullptr;
}

std::vector<TamperReport> RouterState::reports() const {
    std::lock_guard lock(tamper_mutex_);
    return reports_;
}

std::map<std::string, closedhash::SymmetricKey> RouterState::keys() const {
    std::lock_guard lock(tamper_mutex_);
    return keys_;
}

void RouterState::corrupt_runtime_hash_for_testing(const std::string& file_id) {
    auto it = runtime_.closed.find(file_id);
    if (it != runtime_.closed.end()) it->second.bytes[0] ^= 0xFF;
}

minilang::Value RouterState::handle_tamper(TamperReport report) {
    if (response_ == ResponseStrategy::ReportOnly) {
        std::lock_guard lock(tamper_mutex_);
        reports_.push_back(std::move(report));
        return Value{};
    }

    TamperReport latched;
    {
        std::lock_guard lock(tamper_mutex_);
        if (!first_report_) {
            first_report_ = std::move(report);
            for (auto& [_, key] : keys_) key.wipe();
            keys_.clear();
            cache_.clear();
            terminated_.store(true, std::memory_order_release);
        }
        latched = *first_report_;
    }
    throw TamperSignal{std::move(latched)};
}

minilang::Value RouterState::invoke_prepared(const DispatchCache::Prepared& prepared,
                                             std::vector<minilang::Value> runtime_args,
                                             const std::string& caller_file) {
    if (prepared.fn->params.size() != prepared.literal_args.size() + runtime_args.size()) {
        return handle_tamper({TamperReport::Kind::DecryptionFailure, caller_file,
                              "argument count does not match sealed descriptor"});
    }
    std::vector<Value> args = prepared.literal_args;
    for (auto& v : runtime_args) args.push_back(std::move(v));
    if (!invoker_) throw Error("router has no attached invoker");
    return invoker_(*prepared.fn, std::move(args));
}

minilang::Value RouterState::dispatch_passthrough(const std::string& caller_file,
                                                  const std::string& descriptor_text,
                                                  std::vector<minilang::Value> runtime_args) {
    auto desc = descriptor::decode_descriptor(descriptor_text);
    if (!desc) {
        return handle_tamper({TamperReport::Kind::DecryptionFailure, caller_file,
                              "descriptor does not parse"});
    }
    DispatchCache::Prepared prepared;
    for (std::size_t i = 0; i < desc->literal_types.size(); ++i) {
        auto v = literal_to_value(desc->literal_types[i], desc->literal_values[i]);
        if (!v) {
            return handle_tamper({TamperReport::Kind::DecryptionFailure, caller_file,
                                  "descriptor literal does not parse"});
        }
        prepared.literal_args.push_back(std::move(*v));
    }
    std::size_t arity = prepared.literal_args.size() + runtime_args.size();
    if (!registry_) throw Error("router has no attached registry");
    prepared.fn = registry_->lookup(desc->dst_file, desc->method, arity);
    if (!prepared.fn) {
        return handle_tamper({TamperReport::Kind::DecryptionFailure, desc->dst_file,
                              "descriptor names missing function " + desc->dst_file + "." +
                                  desc->method});
    }
    return invoke_prepared(prepared, std::move(runtime_args), caller_file);
}

minilang::Value RouterState::forward_call(const std::string& caller_file,
                                          const std::string& sealed_envelope,
                                          std::vector<minilang::Value> runtime_args,
                                          const std::string* callee_hint) {
    if (response_ == ResponseStrategy::Terminate &&
        terminated_.load(std::memory_order_acquire)) {
        std::lock_guard lock(tamper_mutex_);
        throw TamperSignal{*first_report_};
    }
    if (passthrough_)
        return dispatch_passthrough(caller_file, sealed_envelope, std::move(runtime_args));

    {
        auto expected = expected_closed_.find(caller_file);
        auto runtime = runtime_.closed.find(caller_file);
        if (expected == expected_closed_.end() || runtime == runtime_.closed.end() ||
            !(expected->second == runtime->second)) {
            return handle_tamper({TamperReport::Kind::HashMismatch, caller_file,
                                  "caller hash check before dispatch"});
        }
    }

    bool use_cache = cache_enabled_.load(std::memory_order_relaxed);
    if (use_cache) {
        if (auto prepared = cache_.find_sealed(sealed_envelope)) {
            cache_.record_hit();
            return invoke_prepared(*prepared, std::move(runtime_args), caller_file);
        }
    }

    auto sealed = cryptobox::SealedDescriptor::decode(sealed_envelope);
    if (!sealed) {
        return handle_tamper({TamperReport::Kind::DecryptionFailure, caller_file,
                              "malformed sealed envelope"});
    }

    cryptobox::OpenResult opened;
    std::string key_file;
    {
        std::lock_guard lock(tamper_mutex_);
        auto try_key = [&](const std::string& file_id,
                           const closedhash::SymmetricKey& key) {
            auto result = cryptobox::open(key, *sealed);
            if (!result.ok()) return false;
            opened = std::move(result);
            key_file = file_id;
            return true;
        };
        bool found = false;
        if (callee_hint) {
            auto it = keys_.find(*callee_hint);
            if (it != keys_.end()) found = try_key(it->first, it->second);
        }
        if (!found) {
            for (const auto& [file_id, key] : keys_) {
                if (callee_hint && file_id == *callee_hint) continue;
                if (try_key(file_id, key)) {
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            key_file.clear();
        }
    }
    if (key_file.empty()) {
        return handle_tamper({TamperReport::Kind::DecryptionFailure, caller_file,
                              "no derived key authenticates the envelope"});
    }

    auto desc = descriptor::decode_descriptor(opened.plaintext_string());
    if (!desc || desc->dst_file != key_file) {
        return handle_tamper({TamperReport::Kind::DecryptionFailure, caller_file,
                              "descriptor does not parse under its key"});
    }

    auto prepared = std::make_shared<DispatchCache::Prepared>();
    for (std::size_t i = 0; i < desc->literal_types.size(); ++i) {
        auto v = literal_to_value(desc->literal_types[i], desc->literal_values[i]);
        if (!v) {
            return handle_tamper({TamperReport::Kind::DecryptionFailure, caller_file,
                                  "descriptor literal does not parse"});
        }
        prepared->literal_args.push_back(std::move(*v));
    }

    std::size_t arity = prepared->literal_args.size() + runtime_args.size();
    if (use_cache) prepared->fn = cache_.find_handle(desc->dst_file, desc->method, arity);
    bool handle_cached = prepared->fn != nullptr;
    if (!prepared->fn) {
        if (!registry_) throw Error("router has no attached registry");
        prepared->fn = registry_->lookup(desc->dst_file, desc->method, arity);
    }
    if (!prepared->fn) {
        return handle_tamper({TamperReport::Kind::DecryptionFailure, desc->dst_file,
                              "descriptor names missing function " + desc->dst_file + "." +
                                  desc->method});
    }

    if (use_cache) {
        if (handle_cached) {
            cache_.record_hit();
        } else {
            cache_.record_miss();
            cache_.insert_handle(desc->dst_file, desc->method, arity, prepared->fn);
        }
        cache_.insert_sealed(sealed_envelope, prepared);
    }
    return invoke_prepared(*prepared, std::move(runtime_args), caller_file);
}

}  // namespace routeseal::router
