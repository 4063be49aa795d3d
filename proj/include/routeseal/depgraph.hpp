#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "routeseal/ast.hpp"

namespace routeseal::depgraph {

using Arc = std::pair<std::string, std::string>;  // (dependent, dependency)

// Directed graph over file ids. An arc (f_i, f_j) means some function in f_i
// calls a function defined in f_j. Cycle breaking moves arcs into
// removed_arcs; arcs + removed_arcs always equals the extracted set.
struct DependencyGraph {
    std::set<std::string> nodes;
    std::set<Arc> arcs;
    std::set<Arc> removed_arcs;

    bool operator==(const DependencyGraph&) const = default;
};

// One arc per cross-file (caller, callee) pair, however many call sites exist.
// Self-dependencies are never recorded.
DependencyGraph build_graph(const minilang::Program& program);

// Deterministic cycle breaking: depth-first from nodes in ascending
// lexicographic order, successors visited in ascending order, every back edge
// moved to removed_arcs. Identity on acyclic input.
DependencyGraph break_cycles(DependencyGraph g);

// Dependencies-first order: for every arc (f_i, f_j), f_j precedes f_i.
// Ties broken lexicographically. Throws CycleError if the graph is cyclic.
std::vector<std::string> topo_sort(const DependencyGraph& g);

// Text adjacency list used by `inspect-graph`.
std::string format_adjacency(const DependencyGraph& g);

// Graphviz form; removed arcs are dashed.
std::string format_dot(const DependencyGraph& g);

}  // namespace routeseal::depgraph
