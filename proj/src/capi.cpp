#include "gca/gca.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "graph.hpp"
#include "oinf.hpp"
#include "pipeline.hpp"
#include "report.hpp"

struct gca_graph {
    gca::Graph g;
};

struct gca_oinf {
    gca::SequenceSpec s;
};

struct gca_report {
    gca::Report r;
    std::string json_cache;
    std::string text_cache;
};

namespace {

void put_err(char* err, size_t err_len, const char* msg) {
    if (!err || err_len == 0) return;
    std::snprintf(err, err_len, "%s", msg);
}

template <typename F>
gca_status guarded(char* err, size_t err_len, F&& body) noexcept {
    try {
        body();
        return GCA_OK;
    } catch (const gca::parse_error& e) {
        put_err(err, err_len, e.what());
        return GCA_ERR_PARSE;
    } catch (const gca::invalid_argument& e) {
        put_err(err, err_len, e.what());
        return GCA_ERR_INVALID;
    } catch (const gca::precondition_error& e) {
        put_err(err, err_len, e.what());
        return GCA_ERR_PRECONDITION;
    } catch (const std::bad_alloc&) {
        put_err(err, err_len, "out of memory");
        return GCA_ERR_INTERNAL;
    } catch (const std::exception& e) {
        put_err(err, err_len, e.what());
        return GCA_ERR_INTERNAL;
    } catch (...) {
        put_err(err, err_len, "unknown error");
        return GCA_ERR_INTERNAL;
    }
}

gca_status wrap_report(gca::Report rep, gca_report** out) {
    auto* r = new gca_report{std::move(rep), {}, {}};
    *out = r;
    return GCA_OK;
}

}  // namespace

extern "C" {

const char* gca_version(void) { return "0.1.0"; }

gca_status gca_graph_parse(const char* text, gca_graph** out, char* err, size_t err_len) {
    if (!text || !out) {
        put_err(err, err_len, "null argument");
        return GCA_ERR_INVALID;
    }
    return guarded(err, err_len, [&] {
        auto* h = new gca_graph{gca::Graph::parse(text)};
        *out = h;
    });
}

gca_status gca_graph_read_file(const char* path, gca_graph** out, char* err, size_t err_len) {
    if (!path || !out) {
        put_err(err, err_len, "null argument");
        return GCA_ERR_INVALID;
    }
    return guarded(err, err_len, [&] {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw gca::invalid_argument(std::string("cannot read '") + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        auto* h = new gca_graph{gca::Graph::parse(buf.str())};
        *out = h;
    });
}

void gca_graph_free(gca_graph* g) { delete g; }

gca_status gca_graph_serialize(const gca_graph* g, char** out, char* err, size_t err_len) {
    if (!g || !out) {
        put_err(err, err_len, "null argument");
        return GCA_ERR_INVALID;
    }
    return guarded(err, err_len, [&] {
        std::string s = g->g.serialize();
        char* buf = static_cast<char*>(std::malloc(s.size() + 1));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, s.c_str(), s.size() + 1);
        *out = buf;
    });
}

void gca_string_free(char* s) { std::free(s); }

gca_status gca_run_check(const gca_graph* g, gca_report** out, char* err, size_t err_len) {
    if (!g || !out) {
        put_err(err, err_len, "null argument");
        return GCA_ERR_INVALID;
    }
    return guarded(err, err_len, [&] { wrap_report(gca::run_check(g->g), out); });
}

gca_status gca_run_spectral(const gca_graph* g, double beta, gca_report** out, char* err,
                            size_t err_len) {
    if (!g || !out) {
        put_err(err, err_len, "null argument");
        return GCA_ERR_INVALID;
    }
    return guarded(err, err_len, [&] { wrap_report(gca::run_spectral(g->g, beta), out); });
}

gca_status gca_run_critical(const gca_graph* g, double beta_min, double beta_max, double tol,
                            gca_report** out, char* err, size_t err_len) {
    if (!g || !out) {
        put_err(err, err_len, "null argument");
        return GCA_ERR_INVALID;
    }
    return guarded(err, err_len, [&] {
        gca::CriticalOptions opts;
        opts.beta_min = beta_min;
        opts.beta_max = beta_max;
        opts.tol = tol;
        wrap_report(gca::run_critical(g->g, opts), out);
    });
}

gca_status gca_run_harmonic(const gca_graph* g, double beta, gca_report** out, char* err,
                            size_t err_len) {
    if (!g || !out) {
        put_err(err, err_len, "null argument");
        return GCA_ERR_INVALID;
    }
    return guarded(err, err_len, [&] { wrap_report(gca::run_harmonic(g->g, beta), out); });
}

gca_status gca_run_classify(const gca_graph* g, double beta, gca_report** out, char* err,
                            size_t err_len) {
    if (!g || !out) {
        put_err(err, err_len, "null argument");
        return GCA_ERR_INVALID;
    }
    return guarded(err, err_len, [&] { wrap_report(gca::run_classify(g->g, beta), out); });
}

gca_status gca_run_gamma(const gca_graph* g, int use_critical, double beta, int verify,
                         gca_report** out, char* err, size_t err_len) {
    if (!g || !out) {
        put_err(err, err_len, "null argument");
        return GCA_ERR_INVALID;
    }
    return guarded(err, err_len, [&] {
        std::optional<double> b;
        if (!use_critical) b = beta;
        wrap_report(gca::run_gamma(g->g, b, verify != 0), out);
    });
}

gca_status gca_run_measure(const gca_graph* g, double beta, const char* path,
                           gca_report** out, char* err, size_t err_len) {
    if (!g || !out || !path) {
        put_err(err, err_len, "null argument");
        return GCA_ERR_INVALID;
    }
    return guarded(err, err_len,
                   [&] { wrap_report(gca::run_measure(g->g, beta, path), out); });
}

gca_status gca_run_simulate(const gca_graph* g, double beta, const char* vertex, int steps,
                            long long samples, unsigned long long seed, int workers,
                            gca_report** out, char* err, size_t err_len) {
    if (!g || !out || !vertex) {
        put_err(err, err_len, "null argument");
        return GCA_ERR_INVALID;
    }
    return guarded(err, err_len, [&] {
        wrap_report(gca::run_simulate(g->g, beta, vertex, steps, samples, seed, workers),
                    out);
    });
}

gca_status gca_run_full(const gca_graph* g, gca_report** out, char* err, size_t err_len) {
    if (!g || !out) {
        put_err(err, err_len, "null argument");
        return GCA_ERR_INVALID;
    }
    return guarded(err, err_len, [&] { wrap_report(gca::run_full(g->g), out); });
}

gca_status gca_oinf_parse(const char* head, const char* tail, const char* omega,
                          gca_oinf** out, char* err, size_t err_len) {
    if (!out) {
        put_err(err, err_len, "null argument");
        return GCA_ERR_INVALID;
    }
    return guarded(err, err_len, [&] {
        auto* h = new gca_oinf{gca::parse_sequence(head ? head : "", tail ? tail : "",
                                                   omega ? omega : "")};
        *out = h;
    });
}

void gca_oinf_free(gca_oinf* s) { delete s; }

gca_status gca_run_oinf(const gca_oinf* s, int at_critical, int have_beta, double beta,
                        int with_gamma, gca_report** out, char* err, size_t err_len) {
    if (!s || !out) {
        put_err(err, err_len, "null argument");
        return GCA_ERR_INVALID;
    }
    return guarded(err, err_len, [&] {
        std::optional<double> b;
        if (have_beta && !at_critical) b = beta;
        wrap_report(gca::run_oinf(s->s, b, at_critical != 0, with_gamma != 0), out);
    });
}

gca_status gca_oinf_finite_graph(const gca_oinf* s, gca_graph** out, char* err,
                                 size_t err_len) {
    if (!s || !out) {
        put_err(err, err_len, "null argument");
        return GCA_ERR_INVALID;
    }
    return guarded(err, err_len, [&] {
        auto* h = new gca_graph{gca::oinf_to_graph(s->s)};
        *out = h;
    });
}

void gca_report_set_command(gca_report* r, const char* command) {
    if (!r || !command) return;
    gca::set_command(r->r, command);
    r->json_cache.clear();
    r->text_cache.clear();
}

const char* gca_report_json(gca_report* r) {
    if (!r) return nullptr;
    if (r->json_cache.empty()) r->json_cache = r->r.to_json();
    return r->json_cache.c_str();
}

const char* gca_report_text(gca_report* r) {
    if (!r) return nullptr;
    if (r->text_cache.empty()) r->text_cache = r->r.to_text();
    return r->text_cache.c_str();
}

void gca_report_free(gca_report* r) { delete r; }

}  // extern "C"
