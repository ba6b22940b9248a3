#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "potential.hpp"
#include "subgroup.hpp"

namespace gca {

// A single vertex emitting one loop per term of a sequence {t_n}: finitely
// many explicit head terms, optionally followed by the arithmetic tail
// t_n = c n + d. The partition function Z(beta) = sum_n e^{-beta t_n} then
// has a closed-form geometric tail.
struct SequenceSpec {
    std::vector<PotValue> head;  // t_1..t_N
    bool has_tail = false;
    Rational tail_c;
    Rational tail_d;
    std::string omega_name = "w";
    double omega_witness = 0.0;
    bool omega_declared = false;
    std::vector<std::string> warnings;
};

// "--head 1,3/2,1+1/2w" and "--tail c=1,d=0" (or "none"). A non-positive c
// is accepted with a warning; the partition function then diverges at every
// beta, matching the constant-sequence verdict.
SequenceSpec parse_sequence(const std::string& head, const std::string& tail,
                            const std::string& omega = "");

// The n-th term (1-based), exact.
PotValue sequence_term(const SequenceSpec& s, long long n);

// Z(beta); +infinity when an arithmetic tail is present and beta <= 0 or
// c <= 0. Without a tail this is a finite sum for every beta.
double partition_value(const SequenceSpec& s, double beta);

// Truncation bound |Z(beta) - sum_{n<=M}| <= e^{-beta t_M} / (1 - e^{-beta c})
// for arithmetic tails with c > 0, beta > 0 and M >= N.
double tail_truncation_bound(const SequenceSpec& s, double beta, long long m);

struct OinfCritical {
    double beta0 = 0.0;
    double z_at_beta0 = 0.0;
    std::vector<std::string> warnings;
};

// Solves Z(beta) = 1 on [1e-6, 50]. Returns nothing when Z never crosses 1
// there (divergent tails included). Requires an arithmetic tail.
std::optional<OinfCritical> critical_beta0(const SequenceSpec& s, double tol = 0.0);

struct KmsExistence {
    bool exists = false;
    bool conservative = false;
    double z = 0.0;  // +infinity when divergent
    std::vector<std::string> notes;
};

// Z <= 1 decides existence (unique state); Z = 1 within 1e-9 makes it
// conservative; Z < 1 gives a properly almost harmonic (degenerate) state.
KmsExistence kms_existence(const SequenceSpec& s, double beta);

// Invariant group generated by {beta0 t_n} and its factor type. An
// arithmetic tail reduces exactly to its first two terms beyond the head.
// Requires the state at beta0 to be conservative.
std::pair<RealSubgroup, FactorType> oinf_connes_group(const SequenceSpec& s, double beta0);

// The finite-emitter case (no tail) as a one-vertex loop graph, so the
// graph pipeline can take over.
Graph oinf_to_graph(const SequenceSpec& s);

}  // namespace gca
