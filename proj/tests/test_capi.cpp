#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include <json.hpp>

#include "gca/gca.h"

namespace {

const char* kE1 =
    "vertex v\n"
    "arrow a v v F=1\n"
    "arrow b v v F=1\n";

struct GraphHandle {
    gca_graph* g = nullptr;
    ~GraphHandle() {
        if (g) gca_graph_free(g);
    }
};

struct ReportHandle {
    gca_report* r = nullptr;
    ~ReportHandle() {
        if (r) gca_report_free(r);
    }
};

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version string is present") {
    const char* v = gca_version();
    REQUIRE(v != nullptr);
    CHECK(std::strlen(v) > 0);
}

TEST_CASE("parse, serialize, and reparse through the C surface") {
    char err[256] = {0};
    GraphHandle g;
    REQUIRE(gca_graph_parse(kE1, &g.g, err, sizeof err) == GCA_OK);
    char* text = nullptr;
    REQUIRE(gca_graph_serialize(g.g, &text, err, sizeof err) == GCA_OK);
    REQUIRE(text != nullptr);
    GraphHandle h;
    CHECK(gca_graph_parse(text, &h.g, err, sizeof err) == GCA_OK);
    char* text2 = nullptr;
    REQUIRE(gca_graph_serialize(h.g, &text2, err, sizeof err) == GCA_OK);
    CHECK(std::string(text) == std::string(text2));
    gca_string_free(text);
    gca_string_free(text2);
}

TEST_CASE("each failure class maps to its own status") {
    char err[256] = {0};
    gca_graph* g = nullptr;
    CHECK(gca_graph_parse("vertex v\narrow a v w F=1\n", &g, err, sizeof err) ==
          GCA_ERR_PARSE);
    CHECK(std::string(err).find("line 2") != std::string::npos);
    CHECK(g == nullptr);

    CHECK(gca_graph_read_file("/nonexistent/x.graph", &g, err, sizeof err) ==
          GCA_ERR_INVALID);

    GraphHandle e1;
    REQUIRE(gca_graph_parse(kE1, &e1.g, err, sizeof err) == GCA_OK);

    gca_report* rep = nullptr;
    // dissipative beta: harmonic vector precondition
    CHECK(gca_run_harmonic(e1.g, 2.0, &rep, err, sizeof err) == GCA_ERR_PRECONDITION);
    CHECK(rep == nullptr);
    CHECK(std::strlen(err) > 0);

    // malformed path spec: invalid argument
    CHECK(gca_run_measure(e1.g, 0.6931471805599453, "zz", &rep, err, sizeof err) ==
          GCA_ERR_INVALID);

    // unknown start vertex for simulation
    CHECK(gca_run_simulate(e1.g, 0.6931471805599453, "nope", 10, 10, 1, 1, &rep, err,
                           sizeof err) == GCA_ERR_INVALID);
}

TEST_CASE("error messages truncate safely into small buffers") {
    char tiny[8];
    std::memset(tiny, 'x', sizeof tiny);
    gca_graph* g = nullptr;
    CHECK(gca_graph_parse("broken", &g, tiny, sizeof tiny) == GCA_ERR_PARSE);
    CHECK(tiny[sizeof tiny - 1] == '\0');
}

TEST_CASE("classify through the C API yields the expected verdict") {
    char err[256] = {0};
    GraphHandle g;
    REQUIRE(gca_graph_parse(kE1, &g.g, err, sizeof err) == GCA_OK);
    ReportHandle rep;
    REQUIRE(gca_run_classify(g.g, 0.6931471805599453, &rep.r, err, sizeof err) == GCA_OK);
    gca_report_set_command(rep.r, "test classify");
    const char* body = gca_report_json(rep.r);
    REQUIRE(body != nullptr);
    nlohmann::json doc = nlohmann::json::parse(body);
    CHECK(doc["classification"]["verdict"] == "Conservative");
    CHECK(doc["command"] == "test classify");
}

TEST_CASE("full pipeline and oinf through the C API") {
    char err[256] = {0};
    GraphHandle g;
    REQUIRE(gca_graph_parse(kE1, &g.g, err, sizeof err) == GCA_OK);
    ReportHandle full;
    REQUIRE(gca_run_full(g.g, &full.r, err, sizeof err) == GCA_OK);
    nlohmann::json doc = nlohmann::json::parse(gca_report_json(full.r));
    CHECK(doc["gamma"]["factor"]["type"] == "III_lambda");

    gca_oinf* s = nullptr;
    REQUIRE(gca_oinf_parse("", "c=1,d=0", "", &s, err, sizeof err) == GCA_OK);
    ReportHandle rep;
    REQUIRE(gca_run_oinf(s, 1, 0, 0.0, 1, &rep.r, err, sizeof err) == GCA_OK);
    nlohmann::json odoc = nlohmann::json::parse(gca_report_json(rep.r));
    CHECK(std::abs(double(odoc["oinf"]["critical_beta"]) - 0.6931471805599453) < 1e-9);
    CHECK(std::abs(double(odoc["gamma"]["factor"]["lambda"]) - 0.5) < 1e-9);

    // the finite redirect produces a loop graph
    gca_oinf* fin = nullptr;
    REQUIRE(gca_oinf_parse("1,1", "none", "", &fin, err, sizeof err) == GCA_OK);
    GraphHandle fg;
    CHECK(gca_oinf_finite_graph(fin, &fg.g, err, sizeof err) == GCA_OK);
    // and refuses when a tail is present
    gca_graph* no = nullptr;
    CHECK(gca_oinf_finite_graph(s, &no, err, sizeof err) == GCA_ERR_PRECONDITION);
    gca_oinf_free(s);
    gca_oinf_free(fin);
}

TEST_CASE("report renderings are cached until the command changes") {
    char err[256] = {0};
    GraphHandle g;
    REQUIRE(gca_graph_parse(kE1, &g.g, err, sizeof err) == GCA_OK);
    ReportHandle rep;
    REQUIRE(gca_run_check(g.g, &rep.r, err, sizeof err) == GCA_OK);
    gca_report_set_command(rep.r, "one");
    const char* j1 = gca_report_json(rep.r);
    const char* j2 = gca_report_json(rep.r);
    CHECK(j1 == j2);  // borrowed pointer, stable between renders
    std::string before(j1);
    gca_report_set_command(rep.r, "two");
    std::string after(gca_report_json(rep.r));
    CHECK(before != after);
    CHECK(after.find("\"two\"") != std::string::npos);
    const char* t = gca_report_text(rep.r);
    REQUIRE(t != nullptr);
    CHECK(std::string(t).rfind("command: two", 0) == 0);
}

TEST_CASE("null handles are tolerated by the free functions") {
    gca_graph_free(nullptr);
    gca_report_free(nullptr);
    gca_oinf_free(nullptr);
    gca_string_free(nullptr);
}

}  // TEST_SUITE
