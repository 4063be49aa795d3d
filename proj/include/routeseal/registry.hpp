#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "routeseal/ast.hpp"

namespace routeseal::minilang {

// Total map (file_id, name, arity) -> FunctionDef, replacing the reflection
// lookup a managed runtime would provide. Lookup of an absent key returns
// nullptr rather than failing.
class FunctionRegistry {
public:
    FunctionRegistry() = default;

    void insert(const FunctionDef& fn) {
        map_.emplace(key_of(fn.file_id, fn.name, fn.params.size()), &fn);
    }

    const FunctionDef* lookup(std::string_view file_id, std::string_view name,
                              std::size_t arity) const {
        auto it = map_.find(key_of(file_id, name, arity));
        return it == map_.end() ? nullptr : it->second;
    }

    std::size_t size() const { return map_.size(); }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (const auto& [key, def] : map_) fn(*def);
    }

private:
    static std::string key_of(std::string_view file_id, std::string_view name,
                              std::size_t arity) {
        std::string k;
        k.reserve(file_id.size() + name.size() + 8);
        k.append(file_id);
        k.push_back('\x1f');
        k.append(name);
        k.push_back('\x1f');
        k.append(std::to_string(arity));
        return k;
    }

    std::unordered_map<std::string, const FunctionDef*> map_;
};

// Builds the registry over every function in the program. The program must
// outlive the registry.
FunctionRegistry build_registry(const Program& program);

}  // namespace routeseal::minilang
