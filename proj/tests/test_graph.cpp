#include <doctest.h>

#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "util.hpp"

using gca::Graph;
using gca::Path;
using gca::PotValue;
using gca::Rational;

namespace {

const char* kE2 =
    "vertex u\n"
    "vertex v\n"
    "arrow l u u F=1\n"
    "arrow a u v F=1\n"
    "arrow b v u F=1\n";

std::string line_of(const gca::parse_error& e) { return e.what(); }

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("parse builds indices in declaration order") {
    Graph g = Graph::parse(kE2);
    CHECK(g.vertex_count() == 2);
    CHECK(g.arrow_count() == 3);
    CHECK(g.vertex_id(0) == "u");
    CHECK(g.vertex_id(1) == "v");
    CHECK(g.arrow(0).id == "l");
    CHECK(g.arrow(1).src == 0);
    CHECK(g.arrow(1).dst == 1);
    CHECK(g.arrow(2).pot == PotValue::integer(1));
    CHECK(g.out_arrows(0) == std::vector<int>{0, 1});
    CHECK(g.out_arrows(1) == std::vector<int>{2});
    CHECK_FALSE(g.is_sink(0));
    CHECK(g.vertex_index("v") == 1);
    CHECK(g.arrow_index("b") == 2);
    CHECK_FALSE(g.find_vertex("zz").has_value());
    CHECK_THROWS_AS(g.vertex_index("zz"), gca::invalid_argument);
}

TEST_CASE("comments, blank lines, and rational potentials") {
    Graph g = Graph::parse(
        "# a comment\n"
        "\n"
        "vertex v\n"
        "arrow a v v F=-3/2   # trailing comment\n");
    CHECK(g.arrow(0).pot == PotValue(Rational(-3, 2)));
}

TEST_CASE("omega declaration and mixed literals") {
    Graph g = Graph::parse(
        "omega s = 1.7320508075688772\n"
        "vertex v\n"
        "arrow a v v F=1/2+2s\n"
        "arrow b v v F=0+-1/3s\n");
    REQUIRE(g.omega().has_value());
    CHECK(g.omega()->name == "s");
    CHECK(g.omega_witness() == 1.7320508075688772);
    CHECK(g.arrow(0).pot == PotValue(Rational(1, 2), Rational(2)));
    CHECK(g.arrow(1).pot == PotValue(Rational(0), Rational(-1, 3)));
}

TEST_CASE("parse errors carry 1-based line numbers") {
    auto expect_line = [](const char* text, const char* needle) {
        try {
            Graph::parse(text);
            FAIL_CHECK("expected parse_error for: " << text);
        } catch (const gca::parse_error& e) {
            CHECK(line_of(e).find(needle) != std::string::npos);
        }
    };
    expect_line("vertex v\nvertex v\n", "line 2");
    expect_line("vertex v\narrow a v w F=1\n", "line 2");
    expect_line("vertex v\narrow a v v F=oops\n", "line 2");
    expect_line("vertex v\narrow a v v F=1\narrow a v v F=1\n", "line 3");
    expect_line("vertex v\narrow a v v F=1+2q\n", "line 2");
    expect_line("omega w = 1.0\nomega w = 2.0\nvertex v\n", "line 2");
    expect_line("bogus line here\n", "line 1");
    expect_line("vertex v\narrow a v v\n", "line 2");
}

TEST_CASE("serialize round trips to an identical graph") {
    Graph g = Graph::parse(kE2);
    std::string s = g.serialize();
    Graph h = Graph::parse(s);
    CHECK(g.same_as(h));
    CHECK(h.serialize() == s);

    Graph d = Graph::parse(
        "omega w = 1.4142135623730951\n"
        "vertex v\n"
        "arrow p v v F=1\n"
        "arrow q v v F=0+1w\n");
    Graph d2 = Graph::parse(d.serialize());
    CHECK(d.same_as(d2));
    CHECK(d2.omega_witness() == d.omega_witness());
}

TEST_CASE("digest tracks content") {
    Graph g1 = Graph::parse(kE2);
    Graph g2 = Graph::parse(kE2);
    CHECK(g1.digest() == g2.digest());
    CHECK(g1.digest().rfind("fnv1a64:", 0) == 0);
    Graph g3 = Graph::parse(
        "vertex u\n"
        "vertex v\n"
        "arrow l u u F=1\n"
        "arrow a u v F=1\n"
        "arrow b v u F=2\n");
    CHECK(g1.digest() != g3.digest());
    CHECK_FALSE(g1.same_as(g3));
}

TEST_CASE("paths parse, render, and locate") {
    Graph g = Graph::parse(kE2);
    Path p = gca::parse_path(g, "l.a");
    CHECK(p.length() == 2);
    CHECK(gca::path_source(g, p) == 0);
    CHECK(gca::path_range(g, p) == 1);
    CHECK(gca::path_str(g, p) == "l.a");

    Path v = gca::parse_path(g, "@v");
    CHECK(v.empty());
    CHECK(gca::path_source(g, v) == 1);
    CHECK(gca::path_range(g, v) == 1);

    CHECK_THROWS_AS(gca::parse_path(g, "a.l"), gca::invalid_argument);  // not composable
    CHECK_THROWS_AS(gca::parse_path(g, "zz"), gca::invalid_argument);
    CHECK_THROWS_AS(gca::parse_path(g, "@zz"), gca::invalid_argument);
}

TEST_CASE("path potential is additive under concatenation") {
    Graph g = Graph::parse(
        "vertex u\n"
        "vertex v\n"
        "arrow l u u F=1/2\n"
        "arrow a u v F=2\n"
        "arrow b v u F=-1/3\n");
    Path lab = gca::make_path(g, {"l", "a", "b"});
    CHECK(gca::path_potential(g, lab) == PotValue(Rational(1, 2) + Rational(2) + Rational(-1, 3)));
    // splitting anywhere preserves the sum exactly
    Path l = gca::make_path(g, {"l"});
    Path ab = gca::make_path(g, {"a", "b"});
    CHECK(gca::path_potential(g, lab) ==
          gca::path_potential(g, l) + gca::path_potential(g, ab));
    // length-0 paths carry zero potential
    CHECK(gca::path_potential(g, gca::vertex_path(g, "u")).is_zero());
}

TEST_CASE("path potential over omega terms stays exact") {
    Graph g = Graph::parse(
        "omega w = 1.4142135623730951\n"
        "vertex v\n"
        "arrow p v v F=1\n"
        "arrow q v v F=0+1w\n");
    Path pq = gca::make_path(g, {"p", "q", "q"});
    CHECK(gca::path_potential(g, pq) == PotValue(Rational(1), Rational(2)));
}

}  // TEST_SUITE
