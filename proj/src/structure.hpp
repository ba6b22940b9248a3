#pragma once

#include <vector>

#include "graph.hpp"

namespace gca {

struct StructureReport {
    bool is_cofinal = false;
    bool every_loop_has_exit = false;
    bool is_simple = false;
    std::vector<int> nw_vertices;               // ascending vertex indices
    std::vector<int> nw_arrows;                 // arrows with source in NW
    std::vector<int> sinks;
    std::vector<std::vector<int>> scc_partition;  // reverse-topological order
    bool nw_hereditary = false;                 // checked directly on arrows
};

// Smallest superset of seed closed under the hereditary rule
// (s(a) in H => r(a) in H) and the saturation rule (v not a sink and all
// ranges of its out-arrows in H => v in H). Fixed-point iteration.
std::vector<int> hereditary_saturated_closure(const Graph& g, const std::vector<int>& seed);

// For finite graphs: no proper nonempty hereditary saturated subset exists
// iff every singleton closure is the whole vertex set.
bool is_cofinal(const Graph& g);

// True iff no directed cycle lies entirely inside the out-degree-1 vertices.
bool every_loop_has_exit(const Graph& g);

bool is_simple(const Graph& g);

// Vertices lying on at least one directed cycle.
std::vector<int> non_wandering(const Graph& g);

// Strongly connected components; every arrow goes from a later component in
// the list to an earlier or equal one.
std::vector<std::vector<int>> scc_condensation(const Graph& g);

StructureReport analyze_structure(const Graph& g);

}  // namespace gca
