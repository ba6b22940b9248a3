#ifndef GCA_H
#define GCA_H

/* Graph KMS analyzer: C interface to the analysis library.
 *
 * Every entry point returns a gca_status; on failure a message is copied
 * into the caller-supplied error buffer (always NUL-terminated, possibly
 * truncated). Out-parameters are written only on GCA_OK. All handles are
 * opaque and must be released with the matching *_free function; the
 * library keeps no global state and handles are independent.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct gca_graph gca_graph;
typedef struct gca_oinf gca_oinf;
typedef struct gca_report gca_report;

typedef enum gca_status {
    GCA_OK = 0,
    GCA_ERR_PARSE = 1,        /* malformed input text (line info in message) */
    GCA_ERR_INVALID = 2,      /* bad arguments: unknown ids, bad dimensions */
    GCA_ERR_PRECONDITION = 3, /* a mathematical precondition does not hold */
    GCA_ERR_INTERNAL = 4      /* unexpected failure */
} gca_status;

const char* gca_version(void);

/* ---- graphs ---- */

gca_status gca_graph_parse(const char* text, gca_graph** out,
                           char* err, size_t err_len);
gca_status gca_graph_read_file(const char* path, gca_graph** out,
                               char* err, size_t err_len);
void gca_graph_free(gca_graph* g);

/* Canonical text rendering; free with gca_string_free. */
gca_status gca_graph_serialize(const gca_graph* g, char** out,
                               char* err, size_t err_len);
void gca_string_free(char* s);

/* ---- analyses; each yields a report handle ---- */

gca_status gca_run_check(const gca_graph* g, gca_report** out,
                         char* err, size_t err_len);
gca_status gca_run_spectral(const gca_graph* g, double beta, gca_report** out,
                            char* err, size_t err_len);
gca_status gca_run_critical(const gca_graph* g, double beta_min, double beta_max,
                            double tol, gca_report** out, char* err, size_t err_len);
gca_status gca_run_harmonic(const gca_graph* g, double beta, gca_report** out,
                            char* err, size_t err_len);
gca_status gca_run_classify(const gca_graph* g, double beta, gca_report** out,
                            char* err, size_t err_len);
/* use_critical != 0 ignores beta and solves for the critical value first. */
gca_status gca_run_gamma(const gca_graph* g, int use_critical, double beta,
                         int verify, gca_report** out, char* err, size_t err_len);
gca_status gca_run_measure(const gca_graph* g, double beta, const char* path,
                           gca_report** out, char* err, size_t err_len);
gca_status gca_run_simulate(const gca_graph* g, double beta, const char* vertex,
                            int steps, long long samples, unsigned long long seed,
                            int workers, gca_report** out, char* err, size_t err_len);
gca_status gca_run_full(const gca_graph* g, gca_report** out,
                        char* err, size_t err_len);

/* ---- the single-vertex infinite-emitter model ---- */

/* head: "1,3/2,..." (may be empty); tail: "c=1,d=0" or "none"/"";
 * omega: "name=decimal" or "" when no irrational symbol is used. */
gca_status gca_oinf_parse(const char* head, const char* tail, const char* omega,
                          gca_oinf** out, char* err, size_t err_len);
void gca_oinf_free(gca_oinf* s);

/* at_critical != 0 solves Z(beta0) = 1 first; otherwise have_beta selects
 * whether beta is evaluated at all. with_gamma adds the invariant group. */
gca_status gca_run_oinf(const gca_oinf* s, int at_critical, int have_beta,
                        double beta, int with_gamma, gca_report** out,
                        char* err, size_t err_len);

/* Finite-emitter redirect: the equivalent one-vertex loop graph. Fails for
 * specs with an infinite tail. */
gca_status gca_oinf_finite_graph(const gca_oinf* s, gca_graph** out,
                                 char* err, size_t err_len);

/* ---- reports ---- */

void gca_report_set_command(gca_report* r, const char* command);
/* Borrowed pointers, valid until the report is freed or re-rendered. */
const char* gca_report_json(gca_report* r);
const char* gca_report_text(gca_report* r);
void gca_report_free(gca_report* r);

#ifdef __cplusplus
}
#endif

#endif /* GCA_H */
