#include "structure.hpp"

#include <algorithm>

#include "errors.hpp"

namespace gca {

std::vector<int> hereditary_saturated_closure(const Graph& g, const std::vector<int>& seed) {
    const int n = g.vertex_count();
    std::vector<char> in(n, 0);
    for (int v : seed) {
        if (v < 0 || v >= n) throw invalid_argument("closure seed vertex out of range");
        in[v] = 1;
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Arrow& a : g.arrows()) {
            if (in[a.src] && !in[a.dst]) {
                in[a.dst] = 1;
                changed = true;
            }
        }
        for (int v = 0; v < n; ++v) {
            if (in[v] || g.is_sink(v)) continue;
            bool all = true;
            for (int a : g.out_arrows(v))
                if (!in[g.arrow(a).dst]) { all = false; break; }
            if (all) {
                in[v] = 1;
                changed = true;
            }
        }
    }
    std::vector<int> out;
    for (int v = 0; v < n; ++v)
        if (in[v]) out.push_back(v);
    return out;
}

bool is_cofinal(const Graph& g) {
    const int n = g.vertex_count();
    for (int v = 0; v < n; ++v)
        if (static_cast<int>(hereditary_saturated_closure(g, {v}).size()) != n) return false;
    return true;
}

bool every_loop_has_exit(const Graph& g) {
    // Walk the unique out-arrow from each out-degree-1 vertex; a cycle that
    // never meets a vertex of out-degree >= 2 is an exit-less loop.
    const int n = g.vertex_count();
    std::vector<char> state(n, 0);  // 0 unvisited, 1 on current walk, 2 done
    for (int start = 0; start < n; ++start) {
        if (state[start] != 0 || g.out_arrows(start).size() != 1) continue;
        std::vector<int> walk;
        int v = start;
        while (g.out_arrows(v).size() == 1 && state[v] == 0) {
            state[v] = 1;
            walk.push_back(v);
            v = g.arrow(g.out_arrows(v)[0]).dst;
        }
        if (state[v] == 1) return false;  // closed up within the walk
        for (int w : walk) state[w] = 2;
    }
    return true;
}

bool is_simple(const Graph& g) { return is_cofinal(g) && every_loop_has_exit(g); }

std::vector<std::vector<int>> scc_condensation(const Graph& g) {
    // Iterative Tarjan; components are emitted callees-first, which is
    // exactly the reverse-topological order the callers rely on.
    const int n = g.vertex_count();
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::vector<int>> sccs;
    int next_index = 0;

    struct Frame {
        int v;
        std::size_t edge;
    };
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& out = g.out_arrows(f.v);
            if (f.edge < out.size()) {
                int w = g.arrow(out[f.edge++]).dst;
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    std::vector<int> scc;
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = static_cast<int>(sccs.size());
                        scc.push_back(w);
                    } while (w != f.v);
                    std::sort(scc.begin(), scc.end());
                    sccs.push_back(std::move(scc));
                }
                int v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            }
        }
    }
    return sccs;
}

std::vector<int> non_wandering(const Graph& g) {
    auto sccs = scc_condensation(g);
    std::vector<char> has_loop(g.vertex_count(), 0);
    for (const Arrow& a : g.arrows())
        if (a.src == a.dst) has_loop[a.src] = 1;
    std::vector<int> nw;
    for (const auto& scc : sccs) {
        if (scc.size() >= 2 || has_loop[scc[0]])
            nw.insert(nw.end(), scc.begin(), scc.end());
    }
    std::sort(nw.begin(), nw.end());
    return nw;
}

StructureReport analyze_structure(const Graph& g) {
    StructureReport r;
    r.is_cofinal = is_cofinal(g);
    r.every_loop_has_exit = every_loop_has_exit(g);
    r.is_simple = r.is_cofinal && r.every_loop_has_exit;
    r.nw_vertices = non_wandering(g);
    std::vector<char> in_nw(g.vertex_count(), 0);
    for (int v : r.nw_vertices) in_nw[v] = 1;
    for (int a = 0; a < g.arrow_count(); ++a)
        if (in_nw[g.arrow(a).src]) r.nw_arrows.push_back(a);
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_sink(v)) r.sinks.push_back(v);
    r.scc_partition = scc_condensation(g);
    r.nw_hereditary = true;
    for (int a : r.nw_arrows)
        if (!in_nw[g.arrow(a).dst]) r.nw_hereditary = false;
    return r;
}

}  // namespace gca
