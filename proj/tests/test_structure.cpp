#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "graph.hpp"
#include "structure.hpp"
#include "test_support.hpp"

using gca::Graph;

namespace {

Graph load(const std::string& name) {
    std::ifstream in(std::string(GCA_GRAPHS_DIR) + "/" + name);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return Graph::parse(ss.str());
}

bool subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TEST_SUITE("structure") {

TEST_CASE("bundled examples get the right verdicts") {
    Graph e1 = load("e1.graph");
    gca::StructureReport r1 = gca::analyze_structure(e1);
    CHECK(r1.is_cofinal);
    CHECK(r1.every_loop_has_exit);
    CHECK(r1.is_simple);
    CHECK(r1.nw_vertices == std::vector<int>{0});
    CHECK(r1.nw_hereditary);
    CHECK(r1.sinks.empty());

    Graph e2 = load("e2.graph");
    gca::StructureReport r2 = gca::analyze_structure(e2);
    CHECK(r2.is_simple);
    CHECK(r2.nw_vertices == std::vector<int>{0, 1});
    CHECK(r2.nw_arrows.size() == 3);

    gca::StructureReport nc = gca::analyze_structure(load("noncofinal.graph"));
    CHECK_FALSE(nc.is_cofinal);
    CHECK(nc.every_loop_has_exit);
    CHECK_FALSE(nc.is_simple);
    CHECK(nc.nw_vertices.empty());

    gca::StructureReport ex = gca::analyze_structure(load("exitless.graph"));
    CHECK(ex.is_cofinal);
    CHECK_FALSE(ex.every_loop_has_exit);
    CHECK_FALSE(ex.is_simple);
    CHECK(ex.nw_vertices == std::vector<int>{0, 1});

    gca::StructureReport ac = gca::analyze_structure(load("acyclic.graph"));
    CHECK(ac.is_simple);  // simple, but nothing recurs
    CHECK(ac.nw_vertices.empty());
    CHECK(ac.sinks.size() == 1);
}

TEST_CASE("closure is extensive, idempotent, and monotone over 1000 seeds") {
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        CAPTURE(seed);
        Graph g = testgen::random_graph(seed * 2654435761ULL);
        testgen::Rng rng(seed);
        std::vector<int> s;
        for (int v = 0; v < g.vertex_count(); ++v)
            if (rng.below(3) == 0) s.push_back(v);
        std::vector<int> cs = gca::hereditary_saturated_closure(g, s);
        REQUIRE(std::is_sorted(cs.begin(), cs.end()));
        CHECK(subset(s, cs));
        CHECK(gca::hereditary_saturated_closure(g, cs) == cs);
        // enlarge the seed set: the closure can only grow
        std::vector<int> t = s;
        int extra = int(rng.below(std::uint64_t(g.vertex_count())));
        if (!std::binary_search(t.begin(), t.end(), extra)) {
            t.insert(std::lower_bound(t.begin(), t.end(), extra), extra);
            CHECK(subset(cs, gca::hereditary_saturated_closure(g, t)));
        }
    }
}

TEST_CASE("closure is hereditary and saturated pointwise") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        CAPTURE(seed);
        Graph g = testgen::random_graph(seed * 0x9e3779b9ULL + 17);
        std::vector<int> s;
        if (g.vertex_count() > 0) s.push_back(0);
        std::vector<int> c = gca::hereditary_saturated_closure(g, s);
        std::set<int> in(c.begin(), c.end());
        for (const gca::Arrow& a : g.arrows())
            if (in.count(a.src)) CHECK(in.count(a.dst));
        for (int v = 0; v < g.vertex_count(); ++v) {
            if (g.is_sink(v) || in.count(v)) continue;
            bool all_in = true;
            for (int a : g.out_arrows(v))
                if (!in.count(g.arrow(a).dst)) all_in = false;
            CHECK_FALSE(all_in);  // else v should have been absorbed
        }
    }
}

TEST_CASE("non-wandering vertices are exactly those on cycles") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        CAPTURE(seed);
        Graph g = testgen::random_graph(seed * 918273645ULL);
        std::vector<int> nw = gca::non_wandering(g);
        std::set<int> in(nw.begin(), nw.end());
        int n = g.vertex_count();
        // brute-force: v is on a cycle iff v reaches itself in >= 1 step
        std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
        for (const gca::Arrow& a : g.arrows()) reach[a.src][a.dst] = true;
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (reach[i][k] && reach[k][j]) reach[i][j] = true;
        for (int v = 0; v < n; ++v) CHECK(reach[v][v] == bool(in.count(v)));
    }
}

TEST_CASE("condensation order puts successors first") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        CAPTURE(seed);
        Graph g = testgen::random_graph(seed * 1234567ULL + 3);
        std::vector<std::vector<int>> sccs = gca::scc_condensation(g);
        std::vector<int> comp(g.vertex_count(), -1);
        int total = 0;
        for (std::size_t i = 0; i < sccs.size(); ++i)
            for (int v : sccs[i]) {
                CHECK(comp[v] == -1);
                comp[v] = int(i);
                ++total;
            }
        CHECK(total == g.vertex_count());
        for (const gca::Arrow& a : g.arrows()) CHECK(comp[a.dst] <= comp[a.src]);
    }
}

TEST_CASE("a cycle leaking into a sink is not hereditary") {
    Graph g = Graph::parse(
        "vertex u\n"
        "vertex v\n"
        "vertex z\n"
        "arrow a u v F=1\n"
        "arrow b v u F=1\n"
        "arrow c v z F=1\n");
    gca::StructureReport r = gca::analyze_structure(g);
    CHECK(r.nw_vertices == std::vector<int>{0, 1});
    CHECK_FALSE(r.nw_hereditary);
    CHECK(r.sinks == std::vector<int>{2});
}

}  // TEST_SUITE
