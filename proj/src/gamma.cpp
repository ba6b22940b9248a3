#include "gamma.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include "errors.hpp"
#include "spectral.hpp"
#include "structure.hpp"
#include "util.hpp"

namespace gca {

std::vector<PotValue> cycle_lattice_generators(const Graph& g) {
    NwInfo info = nw_blocks(g);
    if (info.vertices.empty())
        throw precondition_error("the non-wandering set is empty: there are no cycles");
    if (info.blocks.size() != 1)
        throw precondition_error(
            "the non-wandering set is not strongly connected: the circulation lattice "
            "reduction needs a single block");

    std::vector<char> in_nw(g.vertex_count(), 0);
    for (int v : info.vertices) in_nw[v] = 1;
    std::vector<int> row_of(g.vertex_count(), -1);
    for (int i = 0; i < int(info.vertices.size()); ++i) row_of[info.vertices[i]] = i;

    // Columns of the incidence matrix: +1 at the source, -1 at the range,
    // zero for self-loops. Only arrows internal to NW can circulate.
    std::vector<int> internal;
    for (int ai = 0; ai < int(g.arrows().size()); ++ai) {
        const Arrow& a = g.arrows()[ai];
        if (in_nw[a.src] && in_nw[a.dst]) internal.push_back(ai);
    }
    const int m = int(info.vertices.size());
    const int n = int(internal.size());
    std::vector<std::vector<long long>> d(n, std::vector<long long>(m, 0));
    std::vector<std::vector<long long>> u(n, std::vector<long long>(n, 0));
    for (int j = 0; j < n; ++j) {
        const Arrow& a = g.arrows()[internal[j]];
        int s = row_of[a.src];
        int r = row_of[a.dst];
        if (s != r) {
            d[j][s] += 1;
            d[j][r] -= 1;
        }
        u[j][j] = 1;
    }

    // Unimodular column elimination: after processing all rows, the columns
    // of U beyond `lead` span the integer kernel.
    int lead = 0;
    for (int r = 0; r < m && lead < n; ++r) {
        for (;;) {
            int pivot = -1;
            for (int j = lead; j < n; ++j) {
                if (d[j][r] == 0) continue;
                if (pivot < 0 || std::llabs(d[j][r]) < std::llabs(d[pivot][r])) pivot = j;
            }
            if (pivot < 0) break;
            bool reduced_all = true;
            for (int j = lead; j < n; ++j) {
                if (j == pivot || d[j][r] == 0) continue;
                long long q = d[j][r] / d[pivot][r];
                if (q != 0) {
                    for (int i = 0; i < m; ++i) d[j][i] -= q * d[pivot][i];
                    for (int i = 0; i < n; ++i) u[j][i] -= q * u[pivot][i];
                }
                if (d[j][r] != 0) reduced_all = false;
            }
            if (reduced_all) {
                std::swap(d[pivot], d[lead]);
                std::swap(u[pivot], u[lead]);
                ++lead;
                break;
            }
        }
    }

    std::vector<PotValue> gens;
    for (int j = lead; j < n; ++j) {
        PotValue w{};
        for (int i = 0; i < n; ++i) {
            if (u[j][i] == 0) continue;
            w += Rational(u[j][i]) * g.arrows()[internal[i]].pot;
        }
        gens.push_back(w);
    }
    return gens;
}

void require_invariant_context(const Graph& g) {
    StructureReport sr = analyze_structure(g);
    if (!sr.is_simple) {
        std::string why = sr.is_cofinal ? "a loop without exit" : "a non-cofinal vertex";
        throw precondition_error("the algebra is not simple (" + why +
                                 "): the invariant theorem does not apply");
    }
    if (sr.nw_vertices.empty())
        throw precondition_error(
            "the non-wandering set is empty: no conservative weight exists at any beta");
}

RealSubgroup connes_invariant(const Graph& g, double beta) {
    require_invariant_context(g);
    Classification c = classify(g, beta);
    if (c.verdict != KmsVerdict::conservative)
        throw precondition_error(
            "the weight at this beta is not conservative (rho = " + fmt15(c.rho) +
            "); the invariant is computed for conservative weights only");
    return subgroup_closure(cycle_lattice_generators(g), beta, g.omega_witness());
}

RealSubgroup connes_upper_bound(const Graph& g, double beta) {
    return subgroup_closure(cycle_lattice_generators(g), beta, g.omega_witness());
}

RealSubgroup closed_walk_oracle(const Graph& g, int base, int max_len) {
    if (base < 0 || base >= g.vertex_count())
        throw invalid_argument("closed_walk_oracle: vertex index out of range");
    std::vector<int> nw = non_wandering(g);
    if (!std::binary_search(nw.begin(), nw.end(), base))
        throw precondition_error("the base vertex '" + g.vertex_id(base) +
                                 "' is wandering: it carries no closed walks");
    if (max_len < 1) throw invalid_argument("closed_walk_oracle: max_len must be >= 1");

    // Distinct F-values of walks base -> v per length; sets keep the
    // enumeration polynomial when many walks share a value.
    const int n = g.vertex_count();
    std::vector<std::set<PotValue>> cur(n), nxt(n);
    cur[base].insert(PotValue{});
    std::set<PotValue> closed;
    closed.insert(PotValue{});  // the length-0 path at base closes trivially
    for (int len = 1; len <= max_len; ++len) {
        for (auto& s : nxt) s.clear();
        for (int v = 0; v < n; ++v) {
            if (cur[v].empty()) continue;
            for (int ai : g.out_arrows(v)) {
                const Arrow& a = g.arrows()[ai];
                for (const PotValue& x : cur[v]) nxt[a.dst].insert(x + a.pot);
            }
        }
        cur.swap(nxt);
        for (const PotValue& x : cur[base]) closed.insert(x);
    }

    std::vector<PotValue> diffs;
    if (!closed.empty()) {
        const PotValue& anchor = *closed.begin();
        for (const PotValue& x : closed)
            diffs.push_back(x - anchor);
    }
    return subgroup_closure(diffs, 1.0, g.omega_witness());
}

bool groups_equal(const RealSubgroup& a, const RealSubgroup& b) {
    if (a.kind != b.kind) return false;
    if (a.kind != RealSubgroup::Kind::cyclic) return true;
    const PotValue& x = *a.step;
    const PotValue& y = *b.step;
    return x == y || x == -y;
}

}  // namespace gca
