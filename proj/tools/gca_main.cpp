#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gca/gca.h"

namespace {

constexpr size_t kErrLen = 1024;

int status_to_exit(gca_status st) {
    switch (st) {
        case GCA_OK: return 0;
        case GCA_ERR_PARSE:
        case GCA_ERR_INVALID: return 2;
        case GCA_ERR_PRECONDITION: return 3;
        default: return 4;
    }
}

int fail(gca_status st, const char* err) {
    std::fprintf(stderr, "error: %s\n", err);
    return status_to_exit(st);
}

std::string rebuild_echo(int argc, char** argv) {
    std::string echo = "gca";
    for (int i = 1; i < argc; ++i) {
        echo += ' ';
        echo += argv[i];
    }
    return echo;
}

int emit(gca_report* rep, bool json, const std::string& echo) {
    gca_report_set_command(rep, echo.c_str());
    const char* body = json ? gca_report_json(rep) : gca_report_text(rep);
    std::fputs(body ? body : "", stdout);
    gca_report_free(rep);
    return 0;
}

struct GraphHandle {
    gca_graph* g = nullptr;
    ~GraphHandle() { gca_graph_free(g); }
};

struct OinfHandle {
    gca_oinf* s = nullptr;
    ~OinfHandle() { gca_oinf_free(s); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"KMS weights, conformal measures and type III invariants of finite "
                 "graph algebras"};
    app.require_subcommand(1);
    app.fallthrough();
    bool json = false;
    app.add_flag("--json", json, "machine-readable report");
    app.set_version_flag("--version", []() { return std::string(gca_version()); });

    std::string file, path_spec, vertex, head, tail, omega;
    double beta = 0.0, bmin = 1e-6, bmax = 50.0, tol = 0.0;
    int steps = 0, workers = 1;
    long long samples = 0;
    unsigned long long seed = 0;
    bool verify = false, at_critical = false, with_gamma = false;

    auto* c_check = app.add_subcommand("check", "structure predicates: simplicity, NW set");
    c_check->add_option("file", file, "graph file")->required();

    auto* c_spectral = app.add_subcommand("spectral", "spectral radius of A(beta) on NW");
    c_spectral->add_option("file", file)->required();
    c_spectral->add_option("--beta", beta)->required();

    auto* c_critical = app.add_subcommand("critical", "solve rho(A(beta)|NW) = 1");
    c_critical->add_option("file", file)->required();
    c_critical->add_option("--min", bmin, "search interval start");
    c_critical->add_option("--max", bmax, "search interval end");
    c_critical->add_option("--tol", tol, "bisection tolerance (0: floating-point resolution)");

    auto* c_harmonic = app.add_subcommand("harmonic", "harmonic vector at beta");
    c_harmonic->add_option("file", file)->required();
    c_harmonic->add_option("--beta", beta)->required();

    auto* c_classify = app.add_subcommand("classify",
                                          "conservative/dissipative trichotomy at beta");
    c_classify->add_option("file", file)->required();
    c_classify->add_option("--beta", beta)->required();

    auto* c_gamma = app.add_subcommand("gamma", "invariant group and factor type");
    c_gamma->add_option("file", file)->required();
    auto* gamma_beta = c_gamma->add_option("--beta", beta, "evaluate at this beta");
    auto* gamma_crit = c_gamma->add_flag("--critical", at_critical,
                                         "evaluate at the critical beta (default)");
    gamma_beta->excludes(gamma_crit);
    c_gamma->add_flag("--verify", verify, "cross-check against the closed-walk oracle");

    auto* c_measure = app.add_subcommand("measure", "conformal measure of one cylinder");
    c_measure->add_option("file", file)->required();
    c_measure->add_option("--beta", beta)->required();
    c_measure->add_option("--path", path_spec, "arrow path 'a.b.c' or vertex '@v'")
        ->required();

    auto* c_simulate = app.add_subcommand("simulate", "sample paths under the kernel");
    c_simulate->add_option("file", file)->required();
    c_simulate->add_option("--beta", beta)->required();
    c_simulate->add_option("--vertex", vertex)->required();
    c_simulate->add_option("--steps", steps)->required();
    c_simulate->add_option("--samples", samples)->required();
    c_simulate->add_option("--seed", seed)->required();
    c_simulate->add_option("--workers", workers);

    auto* c_oinf = app.add_subcommand("oinf", "single-vertex infinite-emitter model");
    c_oinf->add_option("--head", head, "explicit terms, e.g. '1,3/2'");
    c_oinf->add_option("--tail", tail, "'c=<rat>,d=<rat>' or 'none'");
    c_oinf->add_option("--omega", omega, "irrational symbol '<name>=<decimal>'");
    auto* oinf_beta = c_oinf->add_option("--beta", beta);
    auto* oinf_crit = c_oinf->add_flag("--critical", at_critical);
    oinf_beta->excludes(oinf_crit);
    c_oinf->add_flag("--gamma", with_gamma, "include the invariant group");

    auto* c_full = app.add_subcommand("full", "whole pipeline to the factor type");
    c_full->add_option("file", file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string echo = rebuild_echo(argc, argv);
    char err[kErrLen] = {0};
    gca_status st = GCA_OK;
    gca_report* rep = nullptr;

    if (c_oinf->parsed()) {
        OinfHandle s;
        st = gca_oinf_parse(head.c_str(), tail.c_str(), omega.c_str(), &s.s, err, kErrLen);
        if (st != GCA_OK) return fail(st, err);
        const bool finite = tail.empty() || tail == "none";
        if (finite) {
            // Finite emitter: hand the equivalent loop graph to the graph
            // pipeline, honoring whichever question was asked.
            GraphHandle g;
            st = gca_oinf_finite_graph(s.s, &g.g, err, kErrLen);
            if (st != GCA_OK) return fail(st, err);
            if (with_gamma)
                st = gca_run_gamma(g.g, at_critical || oinf_beta->count() == 0, beta, 0, &rep, err,
                                   kErrLen);
            else if (at_critical)
                st = gca_run_critical(g.g, 1e-6, 50.0, 0.0, &rep, err, kErrLen);
            else if (oinf_beta->count() > 0)
                st = gca_run_classify(g.g, beta, &rep, err, kErrLen);
            else
                st = gca_run_full(g.g, &rep, err, kErrLen);
        } else {
            st = gca_run_oinf(s.s, at_critical ? 1 : 0, oinf_beta->count() > 0 ? 1 : 0, beta,
                              with_gamma ? 1 : 0, &rep, err, kErrLen);
        }
        if (st != GCA_OK) return fail(st, err);
        return emit(rep, json, echo);
    }

    GraphHandle g;
    st = gca_graph_read_file(file.c_str(), &g.g, err, kErrLen);
    if (st != GCA_OK) return fail(st, err);

    if (c_check->parsed()) {
        st = gca_run_check(g.g, &rep, err, kErrLen);
    } else if (c_spectral->parsed()) {
        st = gca_run_spectral(g.g, beta, &rep, err, kErrLen);
    } else if (c_critical->parsed()) {
        st = gca_run_critical(g.g, bmin, bmax, tol, &rep, err, kErrLen);
    } else if (c_harmonic->parsed()) {
        st = gca_run_harmonic(g.g, beta, &rep, err, kErrLen);
    } else if (c_classify->parsed()) {
        st = gca_run_classify(g.g, beta, &rep, err, kErrLen);
    } else if (c_gamma->parsed()) {
        st = gca_run_gamma(g.g, gamma_beta->count() > 0 ? 0 : 1, beta, verify ? 1 : 0, &rep, err,
                           kErrLen);
    } else if (c_measure->parsed()) {
        st = gca_run_measure(g.g, beta, path_spec.c_str(), &rep, err, kErrLen);
    } else if (c_simulate->parsed()) {
        st = gca_run_simulate(g.g, beta, vertex.c_str(), steps, samples, seed, workers,
                              &rep, err, kErrLen);
    } else if (c_full->parsed()) {
        st = gca_run_full(g.g, &rep, err, kErrLen);
    } else {
        std::fprintf(stderr, "error: no subcommand\n");
        return 2;
    }
    if (st != GCA_OK) return fail(st, err);
    return emit(rep, json, echo);
}
