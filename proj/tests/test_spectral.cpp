#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "spectral.hpp"
#include "structure.hpp"
#include "test_support.hpp"

using gca::Graph;
using gca::Rational;

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kLnPhi = 0.48121182505960347;
constexpr double kInvPhi = 0.6180339887498949;
constexpr double kPhi = 1.618033988749895;
// root of e^{-b} + e^{-b sqrt(2)} = 1 (independent bisection)
constexpr double kDenseBeta0 = 0.5801882726692211;

Graph load(const std::string& name) {
    std::ifstream in(std::string(GCA_GRAPHS_DIR) + "/" + name);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return Graph::parse(ss.str());
}

const char* kE1 =
    "vertex v\n"
    "arrow a v v F=1\n"
    "arrow b v v F=1\n";

const char* kE2 =
    "vertex u\n"
    "vertex v\n"
    "arrow l u u F=1\n"
    "arrow a u v F=1\n"
    "arrow b v u F=1\n";

// 4 vertices, 8 arrows; rho(A(0.7)) and the Perron vector frozen from an
// independent dense eigensolver.
const char* kFourVertex =
    "vertex a\n"
    "vertex b\n"
    "vertex c\n"
    "vertex d\n"
    "arrow e0 a b F=1/2\n"
    "arrow e1 b c F=1\n"
    "arrow e2 c a F=2\n"
    "arrow e3 a a F=1\n"
    "arrow e4 c d F=1/3\n"
    "arrow e5 d a F=3/2\n"
    "arrow e6 b d F=2\n"
    "arrow e7 d d F=1\n";

// 3 vertices with a double edge; rho(A(0.3)) frozen the same way.
const char* kMultiEdge =
    "vertex u\n"
    "vertex v\n"
    "vertex w\n"
    "arrow e0 u v F=1\n"
    "arrow e1 u v F=1/2\n"
    "arrow e2 v u F=1\n"
    "arrow e3 v w F=2\n"
    "arrow e4 w u F=1/6\n"
    "arrow e5 u u F=5/6\n";

std::vector<int> all_vertices(const Graph& g) {
    std::vector<int> s;
    for (int v = 0; v < g.vertex_count(); ++v) s.push_back(v);
    return s;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("matrix entries sum e^{-beta F} over parallel arrows") {
    Graph g = Graph::parse(kMultiEdge);
    gca::BetaMatrix m = gca::build_beta_matrix(g, 0.3);
    CHECK(m.at(0, 1) == std::exp(-0.3) + std::exp(-0.3 * 0.5));  // sorted-sum order
    CHECK(m.at(0, 0) == std::exp(-0.3 * (5.0 / 6.0)));
    CHECK(m.at(2, 1) == 0.0);
    CHECK(m.dim() == 3);
    CHECK(m.beta() == 0.3);
}

TEST_CASE("closed-form spectral radii") {
    Graph e1 = Graph::parse(kE1);
    gca::PerronResult r = gca::perron_eigen(gca::build_beta_matrix(e1, 0.5), {0});
    CHECK(r.converged);
    CHECK(std::abs(r.rho - 1.2130613194252668) < 1e-12);
    CHECK(r.residual <= 1e-13 * std::max(1.0, r.rho));

    Graph e2 = Graph::parse(kE2);
    gca::PerronResult p = gca::perron_eigen(gca::build_beta_matrix(e2, 0.0), {0, 1});
    CHECK(std::abs(p.rho - kPhi) < 1e-12);
    CHECK(p.vec[0] == 1.0);  // sup-norm normalization hits the top entry
    CHECK(std::abs(p.vec[1] - kInvPhi) < 1e-12);
}

TEST_CASE("radii match an independent eigensolver") {
    Graph g4 = Graph::parse(kFourVertex);
    gca::PerronResult r = gca::perron_eigen(gca::build_beta_matrix(g4, 0.7), all_vertices(g4));
    CHECK(r.converged);
    CHECK(std::abs(r.rho - 0.9576837391384819) < 1e-10);
    REQUIRE(r.vec.size() == 4);
    CHECK(std::abs(r.vec[0] - 1.0) < 1e-9);
    CHECK(std::abs(r.vec[1] - 0.6543298263081571) < 1e-9);
    CHECK(std::abs(r.vec[2] - 0.8850305657499764) < 1e-9);
    CHECK(std::abs(r.vec[3] - 0.7589220051196971) < 1e-9);

    Graph g3 = Graph::parse(kMultiEdge);
    gca::PerronResult s = gca::perron_eigen(gca::build_beta_matrix(g3, 0.3), all_vertices(g3));
    CHECK(std::abs(s.rho - 1.738135999495487) < 1e-10);
}

TEST_CASE("perron preconditions") {
    Graph e2 = Graph::parse(kE2);
    gca::BetaMatrix m = gca::build_beta_matrix(e2, 1.0);
    CHECK_THROWS_AS(gca::perron_eigen(m, {}), gca::invalid_argument);
    // {v} alone has no loop: the block is zero, not irreducible
    CHECK_THROWS_AS(gca::perron_eigen(m, {1}), gca::precondition_error);
    Graph two = Graph::parse(
        "vertex u\nvertex v\narrow a u u F=1\narrow b v v F=1\n");
    CHECK_THROWS_AS(gca::perron_eigen(gca::build_beta_matrix(two, 1.0), {0, 1}),
                    gca::precondition_error);
}

TEST_CASE("unit potential makes rho scale by e^{-beta}") {
    int used = 0;
    for (std::uint64_t seed = 1; used < 20; ++seed) {
        Graph g = testgen::random_graph(seed * 77771ULL);
        if (gca::non_wandering(g).empty()) continue;
        ++used;
        CAPTURE(seed);
        double r0 = gca::nw_rho(g, 0.0);
        for (double beta : {0.25, 1.0, 3.0}) {
            double rb = gca::nw_rho(g, beta);
            CHECK(std::abs(rb - std::exp(-beta) * r0) <= 1e-9 * r0);
        }
    }
}

TEST_CASE("scaling the potential rescales beta inversely") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        CAPTURE(seed);
        Graph g = testgen::random_strongly_connected(seed * 424243ULL);
        double beta = 0.9;
        double base = gca::nw_rho(g, beta);
        for (auto [num, den] : {std::pair{1, 2}, std::pair{3, 1}}) {
            Rational c(num, den);
            Graph h = testgen::scaled(g, c);
            double other = gca::nw_rho(h, beta / c.to_double());
            CHECK(std::abs(other - base) <= 1e-10 * std::max(1.0, base));
        }
    }
}

TEST_CASE("critical beta on the bundled examples") {
    gca::CriticalResult c1 = gca::critical_beta(Graph::parse(kE1));
    CHECK(std::abs(c1.beta0 - kLn2) < 1e-12);
    CHECK(std::abs(c1.rho_at_beta0 - 1.0) < 1e-9);
    CHECK(c1.monotone_route);
    CHECK(c1.sign_change_cells == 1);
    CHECK(c1.warnings.empty());

    gca::CriticalResult c2 = gca::critical_beta(Graph::parse(kE2));
    CHECK(std::abs(c2.beta0 - kLnPhi) < 1e-12);

    gca::CriticalResult cd = gca::critical_beta(load("dense.graph"));
    CHECK(std::abs(cd.beta0 - kDenseBeta0) < 1e-12);
    CHECK(cd.monotone_route);
}

TEST_CASE("mixed-sign potentials fall back to the grid scan") {
    // loop weight 1 and two-cycle weight 3 + (-1) = 2: same critical point
    // as two loops with weights 1 and 2, which is ln((1+sqrt 5)/2)
    Graph g = Graph::parse(
        "vertex u\n"
        "vertex v\n"
        "arrow l u u F=1\n"
        "arrow a u v F=3\n"
        "arrow b v u F=-1\n");
    gca::CriticalResult c = gca::critical_beta(g);
    CHECK_FALSE(c.monotone_route);
    CHECK(std::abs(c.beta0 - kLnPhi) < 1e-12);
    CHECK(c.sign_change_cells == 1);
}

TEST_CASE("critical search failures are preconditions") {
    // acyclic: NW empty
    CHECK_THROWS_AS(gca::critical_beta(load("acyclic.graph")), gca::precondition_error);
    // single negative loop: rho = e^{beta} > 1 on the whole interval
    Graph neg = Graph::parse("vertex v\narrow a v v F=-1\n");
    CHECK_THROWS_AS(gca::critical_beta(neg), gca::precondition_error);
}

TEST_CASE("custom search interval") {
    gca::CriticalOptions opts;
    opts.beta_min = 0.5;
    opts.beta_max = 1.0;
    gca::CriticalResult c = gca::critical_beta(Graph::parse(kE1), opts);
    CHECK(std::abs(c.beta0 - kLn2) < 1e-12);
}

TEST_CASE("harmonic vector on the golden-ratio example") {
    gca::HarmonicResult h = gca::harmonic_vector(Graph::parse(kE2), kLnPhi);
    CHECK(h.kind == gca::HarmonicKind::harmonic);
    CHECK(h.strictly_positive);
    CHECK(h.values[0] == 1.0);  // normalized at the first NW vertex
    CHECK(std::abs(h.values[1] - kInvPhi) < 1e-12);
    CHECK(h.max_residual <= 1e-12);

    gca::VerifyOutcome v = gca::verify_almost_harmonic(Graph::parse(kE2), kLnPhi,
                                                       h.values, 1e-9);
    CHECK(v.verdict == gca::VerifyVerdict::harmonic);
    CHECK(v.violations.empty());
}

TEST_CASE("sinks force zeros and downgrade the vector") {
    Graph g = Graph::parse(
        "vertex u\n"
        "vertex s\n"
        "arrow a u u F=1\n"
        "arrow b u u F=1\n"
        "arrow c u s F=1\n");
    gca::HarmonicResult h = gca::harmonic_vector(g, kLn2);
    CHECK(h.kind == gca::HarmonicKind::almost_harmonic);
    CHECK(h.values[0] == 1.0);
    CHECK(h.values[1] == 0.0);
    CHECK_FALSE(h.strictly_positive);
    CHECK_FALSE(h.notes.empty());
}

TEST_CASE("wandering vertices extend in dependency order") {
    Graph g = Graph::parse(
        "vertex w\n"
        "vertex v\n"
        "arrow a v v F=1\n"
        "arrow b v v F=1\n"
        "arrow c w v F=1\n");
    gca::HarmonicResult h = gca::harmonic_vector(g, kLn2);
    CHECK(h.kind == gca::HarmonicKind::harmonic);
    CHECK(h.values[1] == 1.0);                    // NW base
    CHECK(std::abs(h.values[0] - 0.5) < 1e-12);   // e^{-ln 2} psi_v
    CHECK(h.strictly_positive);
}

TEST_CASE("harmonic preconditions each have their own diagnostic") {
    // dissipative beta
    CHECK_THROWS_AS(gca::harmonic_vector(Graph::parse(kE1), 2.0), gca::precondition_error);
    // NW empty
    CHECK_THROWS_AS(gca::harmonic_vector(load("acyclic.graph"), 1.0),
                    gca::precondition_error);
    // two NW blocks
    Graph two = Graph::parse(
        "vertex u\nvertex v\narrow a u u F=1\narrow b v v F=1\n");
    CHECK_THROWS_AS(gca::harmonic_vector(two, kLn2), gca::precondition_error);
}

TEST_CASE("verify distinguishes the three verdicts") {
    Graph g = Graph::parse(
        "vertex u\n"
        "vertex s\n"
        "arrow a u u F=1\n"
        "arrow b u u F=1\n"
        "arrow c u s F=1\n");
    // at beta = ln 3, psi = (1, 1) balances row u exactly: 2/3 + 1/3 = 1,
    // and the sink keeps a strictly positive value => properly almost harmonic
    double ln3 = 1.0986122886681098;
    std::vector<double> psi = {1.0, 1.0};
    gca::VerifyOutcome proper = gca::verify_almost_harmonic(g, ln3, psi, 1e-9);
    CHECK(proper.verdict == gca::VerifyVerdict::proper_almost_harmonic);

    // equality off sinks fails at u when beta is wrong
    gca::VerifyOutcome bad = gca::verify_almost_harmonic(g, 2.0, psi, 1e-9);
    CHECK(bad.verdict == gca::VerifyVerdict::not_almost_harmonic);
    CHECK_FALSE(bad.violations.empty());

    // the zero vector is rejected outright
    std::vector<double> zero = {0.0, 0.0};
    gca::VerifyOutcome z = gca::verify_almost_harmonic(g, ln3, zero, 1e-9);
    CHECK(z.verdict == gca::VerifyVerdict::not_almost_harmonic);
    CHECK_FALSE(z.notes.empty());

    std::vector<double> wrong_dim = {1.0};
    CHECK_THROWS_AS(gca::verify_almost_harmonic(g, ln3, wrong_dim, 1e-9),
                    gca::invalid_argument);
}

TEST_CASE("trichotomy at, below, and above the critical point") {
    Graph e1 = Graph::parse(kE1);

    gca::Classification at = gca::classify(e1, kLn2);
    CHECK(at.verdict == gca::KmsVerdict::conservative);
    CHECK(std::abs(at.rho - 1.0) <= 1e-12);
    CHECK(at.base_vertex == 0);
    REQUIRE(at.partial_sums.size() == 65);
    CHECK(at.partial_sums.back() > 60.0);  // S_N ~ N + 1 when rho = 1
    CHECK(std::abs(at.partial_sums.back() - 65.0) < 1e-9);
    CHECK(std::abs(at.root_seq.back() - 1.0) < 1e-12);
    CHECK(at.gate_warnings.empty());

    gca::Classification below = gca::classify(e1, 2.0);
    CHECK(below.verdict == gca::KmsVerdict::dissipative);
    REQUIRE(below.tail_limit_estimate.has_value());
    CHECK(std::abs(*below.tail_limit_estimate - 1.3711225051817255) < 1e-6);
    CHECK(below.partial_sums.back() < *below.tail_limit_estimate + 1e-6);

    gca::Classification above = gca::classify(e1, 0.5);
    CHECK(above.verdict == gca::KmsVerdict::no_kms_weight_from_nw);
    CHECK(std::abs(above.rho - 1.2130613194252668) < 1e-12);

    gca::Classification empty = gca::classify(load("acyclic.graph"), 1.0);
    CHECK(empty.verdict == gca::KmsVerdict::nw_empty);
    CHECK(empty.base_vertex == -1);
    CHECK_FALSE(empty.notes.empty());
}

TEST_CASE("gate margins under 10x produce warnings") {
    Graph e1 = Graph::parse(kE1);
    gca::Classification near = gca::classify(e1, kLn2 + 5e-10);
    CHECK(near.verdict == gca::KmsVerdict::conservative);
    CHECK_FALSE(near.gate_warnings.empty());

    gca::Classification miss = gca::classify(e1, kLn2 + 5e-9);
    CHECK(miss.verdict == gca::KmsVerdict::dissipative);
    CHECK_FALSE(miss.gate_warnings.empty());

    gca::Classification clear = gca::classify(e1, 2.0);
    CHECK(clear.gate_warnings.empty());
}

TEST_CASE("nw blocks are listed successors-first") {
    Graph g = Graph::parse(
        "vertex u\n"
        "vertex v\n"
        "arrow a u u F=1\n"
        "arrow b v v F=1\n"
        "arrow c u v F=1\n");
    gca::NwInfo info = gca::nw_blocks(g);
    CHECK(info.vertices == std::vector<int>{0, 1});
    REQUIRE(info.blocks.size() == 2);
    CHECK(info.blocks[0] == std::vector<int>{1});  // v receives, so it comes first
    CHECK(info.blocks[1] == std::vector<int>{0});
    // max over blocks: both loops F=1, so rho = e^{-beta}
    CHECK(std::abs(gca::nw_rho(g, 0.25) - std::exp(-0.25)) < 1e-12);
}

}  // TEST_SUITE
