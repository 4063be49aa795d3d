#include "routeseal/depgraph.hpp"

#include <functional>
#include <map>
#include <sstream>

#include "routeseal/errors.hpp"

namespace routeseal::depgraph {

DependencyGraph build_graph(const minilang::Program& program) {
    DependencyGraph g;
    for (const auto& f : program.files) g.nodes.insert(f.file_id);
    for (const auto& site : program.call_sites) {
        if (site.cross_file()) g.arcs.emplace(site.caller_file, site.callee_file);
    }
    return g;
}

DependencyGraph break_cycles(DependencyGraph g) {
    enum class Color { White, Gray, Black };
    std::map<std::string, Color> color;
    for (const auto& n : g.nodes) color[n] = Color::White;

    // Successor lists in ascending order; arcs mutate as back edges are dropped.
    auto successors = [&g](const std::string& n) {
        std::vector<Arc> out;
        for (auto it = g.arcs.lower_bound({n, ""}); it != g.arcs.end() && it->first == n; ++it) {
            out.push_back(*it);
        }
        return out;
    };

    std::function<void(const std::string&)> visit = [&](const std::string& n) {
        color[n] = Color::Gray;
        for (const Arc& arc : successors(n)) {
            if (!g.arcs.count(arc)) continue;  // dropped earlier in this walk
            Color c = color[arc.second];
            if (c == Color::Gray) {
                g.arcs.erase(arc);
                g.removed_arcs.insert(arc);
            } else if (c == Color::White) {
                visit(arc.second);
            }
        }
        color[n] = Color::Black;
    };

    for (const auto& n : g.nodes) {
        if (color[n] == Color::White) visit(n);
    }
    return g;
}

std::vector<std::string> topo_sort(const DependencyGraph& g) {
    // Kahn over dependency counts: a node is ready once all files it depends
    // on have been emitted, so dependencies always precede dependents.
    std::map<std::string, std::size_t> pending;
    std::map<std::string, std::vector<std::string>> dependents;
    for (const auto& n : g.nodes) pending[n] = 0;
    for (const auto& [from, to] : g.arcs) {
        ++pending[from];
        dependents[to].push_back(from);
    }

    std::set<std::string> ready;
    for (const auto& [n, count] : pending) {
        if (count == 0) ready.insert(n);
    }

    std::vector<std::string> order;
    order.reserve(g.nodes.size());
    while (!ready.empty()) {
        std::string n = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(n);
        for (const auto& dep : dependents[n]) {
            if (--pending[dep] == 0) ready.insert(dep);
        }
    }
    if (order.size() != g.nodes.size()) {
        throw CycleError("dependency graph still contains a cycle");
    }
    return order;
}

std::string format_adjacency(const DependencyGraph& g) {
    std::ostringstream out;
    for (const auto& n : g.nodes) {
        out << n << ":";
        bool first = true;
        for (auto it = g.arcs.lower_bound({n, ""}); it != g.arcs.end() && it->first == n; ++it) {
            out << (first ? " " : ",") << it->second;
            first = false;
        }
        out << "\n";
    }
    out << "removed:\n";
    for (const auto& [from, to] : g.removed_arcs) {
        out << from << " -> " << to << "\n";
    }
    return out.str();
}

std::string format_dot(const DependencyGraph& g) {
    std::ostringstream out;
    out << "digraph deps {\n";
    for (const auto& n : g.nodes) out << "  \"" << n << "\";\n";
    for (const auto& [from, to] : g.arcs) {
        out << "  \"" << from << "\" -> \"" << to << "\";\n";
    }
    for (const auto& [from, to] : g.removed_arcs) {
        out << "  \"" << from << "\" -> \"" << to << "\" [style=dashed];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace routeseal::depgraph
