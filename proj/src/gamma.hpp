#pragma once

#include <vector>

#include "graph.hpp"
#include "subgroup.hpp"

namespace gca {

// F-weights of an integer basis of the circulation lattice of the
// non-wandering subgraph (kernel of the vertex-arrow incidence map over Z,
// by exact integer column elimination). The subgroup of R these generate is
// the one generated by differences of closed-walk weights at any NW vertex.
// Requires NW nonempty and strongly connected.
std::vector<PotValue> cycle_lattice_generators(const Graph& g);

// Structural preconditions shared by the invariant and its dissipative
// upper bound: the algebra must be simple and the non-wandering set
// nonempty. Throws precondition_error naming the failing predicate.
void require_invariant_context(const Graph& g);

// The invariant group at inverse temperature beta. Preconditions, each with
// its own diagnostic: the algebra must be simple, NW nonempty, and the
// weight conservative at beta (|rho - 1| <= 1e-9).
RealSubgroup connes_invariant(const Graph& g, double beta);

// Same group without the conservativity requirement. For dissipative weights
// this is only an upper bound on the invariant; callers must say so.
RealSubgroup connes_upper_bound(const Graph& g, double beta);

// Brute-force cross-check: enumerates closed walks at `base` (a vertex
// index) of length <= max_len, collects differences of their F-values and
// closes the generated subgroup with beta = 1. Requires base non-wandering.
RealSubgroup closed_walk_oracle(const Graph& g, int base, int max_len);

// Tag equality, with Cyclic steps compared exactly (up to sign).
bool groups_equal(const RealSubgroup& a, const RealSubgroup& b);

}  // namespace gca
