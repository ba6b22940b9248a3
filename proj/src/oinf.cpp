#include "oinf.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "errors.hpp"
#include "util.hpp"

namespace gca {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

}  // namespace

SequenceSpec parse_sequence(const std::string& head, const std::string& tail,
                            const std::string& omega) {
    SequenceSpec s;
    std::optional<OmegaDecl> decl;
    if (!omega.empty()) {
        std::size_t eq = omega.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= omega.size())
            throw parse_error(0, "expected omega declaration '<name>=<decimal>'");
        OmegaDecl d;
        d.name = omega.substr(0, eq);
        char* end = nullptr;
        std::string w = omega.substr(eq + 1);
        d.witness = std::strtod(w.c_str(), &end);
        if (end == w.c_str() || *end != '\0' || !std::isfinite(d.witness))
            throw parse_error(0, "malformed omega witness '" + w + "'");
        decl = d;
        s.omega_name = d.name;
        s.omega_witness = d.witness;
        s.omega_declared = true;
    }
    if (!head.empty()) {
        for (const std::string& term : split_commas(head)) {
            if (term.empty()) throw parse_error(0, "empty term in head list");
            s.head.push_back(parse_pot_literal(term, decl, 0));
        }
    }
    if (!tail.empty() && tail != "none") {
        // "c=<rat>,d=<rat>", d optional (defaults to 0).
        bool saw_c = false;
        for (const std::string& part : split_commas(tail)) {
            if (part.rfind("c=", 0) == 0) {
                s.tail_c = Rational::parse(part.substr(2));
                saw_c = true;
            } else if (part.rfind("d=", 0) == 0) {
                s.tail_d = Rational::parse(part.substr(2));
            } else {
                throw parse_error(0, "expected 'c=<rat>' or 'd=<rat>' in tail spec, got '" +
                                         part + "'");
            }
        }
        if (!saw_c) throw parse_error(0, "tail spec must set c");
        s.has_tail = true;
        if (s.tail_c.sign() <= 0)
            s.warnings.push_back(
                "tail slope c = " + s.tail_c.str() +
                " is not positive: the emitted sequence does not diverge, so the "
                "partition function is infinite at every beta and no KMS states exist");
    }
    return s;
}

PotValue sequence_term(const SequenceSpec& s, long long n) {
    if (n < 1) throw invalid_argument("sequence_term: n must be >= 1");
    if (n <= (long long)s.head.size()) return s.head[std::size_t(n - 1)];
    if (!s.has_tail) throw invalid_argument("sequence_term: index beyond the finite head");
    return PotValue(s.tail_c * Rational(n) + s.tail_d);
}

double partition_value(const SequenceSpec& s, double beta) {
    std::vector<double> terms;
    for (const PotValue& t : s.head)
        terms.push_back(std::exp(-beta * t.numeric(s.omega_witness)));
    double head = terms.empty() ? 0.0 : stable_sum(terms);
    if (!s.has_tail) return head;
    if (beta <= 0.0 || s.tail_c.sign() <= 0) return kInf;
    // sum_{n > N} e^{-beta (c n + d)} = e^{-beta d} q^{N+1} / (1 - q), q = e^{-beta c}.
    const double q = std::exp(-beta * s.tail_c.to_double());
    const double n1 = double(s.head.size()) + 1.0;
    const double tail =
        std::exp(-beta * s.tail_d.to_double()) * std::pow(q, n1) / (1.0 - q);
    return head + tail;
}

double tail_truncation_bound(const SequenceSpec& s, double beta, long long m) {
    if (!s.has_tail || s.tail_c.sign() <= 0 || beta <= 0.0)
        throw precondition_error("truncation bound needs an arithmetic tail with c > 0 "
                                 "and beta > 0");
    if (m < (long long)s.head.size())
        throw invalid_argument("truncation point must cover the whole head");
    const double tm = sequence_term(s, std::max<long long>(m, 1)).numeric(s.omega_witness);
    const double q = std::exp(-beta * s.tail_c.to_double());
    return std::exp(-beta * tm) / (1.0 - q);
}

std::optional<OinfCritical> critical_beta0(const SequenceSpec& s, double tol) {
    if (!s.has_tail)
        throw precondition_error(
            "no tail: the finite-emitter case belongs to the graph pipeline");
    if (s.tail_c.sign() <= 0) return std::nullopt;  // Z is infinite everywhere

    const double lo0 = 1e-6, hi0 = 50.0;
    auto f = [&](double b) { return partition_value(s, b) - 1.0; };

    bool all_positive = true;
    for (const PotValue& t : s.head)
        if (!(t.numeric(s.omega_witness) > 0.0)) all_positive = false;
    if (sequence_term(s, (long long)s.head.size() + 1).numeric(s.omega_witness) <= 0.0)
        all_positive = false;

    double lo = lo0, hi = hi0, flo = f(lo), fhi = f(hi);
    OinfCritical res;
    if (all_positive) {
        // Z strictly decreasing: a root exists iff the signs straddle.
        if (flo == 0.0) { res.beta0 = lo; res.z_at_beta0 = 1.0; return res; }
        if (fhi == 0.0) { res.beta0 = hi; res.z_at_beta0 = 1.0; return res; }
        if (!(flo > 0.0 && fhi < 0.0)) return std::nullopt;
    } else {
        const int cells = 256;
        int first = -1, count = 0;
        double prev_b = lo, prev_f = flo;
        double fa = flo, fb = fhi, a = lo, b = hi;
        for (int i = 1; i <= cells; ++i) {
            double x = lo0 + (hi0 - lo0) * double(i) / cells;
            double fx = (i == cells) ? fhi : f(x);
            bool bracket = (prev_f == 0.0) || (std::isfinite(prev_f) && prev_f * fx < 0.0);
            if (bracket) {
                ++count;
                if (first < 0) { first = i; a = prev_b; b = x; fa = prev_f; fb = fx; }
            }
            prev_b = x;
            prev_f = fx;
        }
        if (first < 0) return std::nullopt;
        if (count > 1)
            res.warnings.push_back("Z(beta) - 1 changes sign in " + std::to_string(count) +
                                   " grid cells; reporting the smallest root");
        lo = a; hi = b; flo = fa; fhi = fb;
        if (flo == 0.0) { res.beta0 = lo; res.z_at_beta0 = 1.0; return res; }
    }

    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm = f(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if ((fm > 0.0) == (flo > 0.0)) { lo = mid; flo = fm; }
        else { hi = mid; fhi = fm; }
    }
    res.beta0 = 0.5 * (lo + hi);
    res.z_at_beta0 = partition_value(s, res.beta0);
    return res;
}

KmsExistence kms_existence(const SequenceSpec& s, double beta) {
    KmsExistence k;
    k.z = partition_value(s, beta);
    if (!std::isfinite(k.z)) {
        k.exists = false;
        k.notes.push_back("the partition function diverges at beta = " + fmt15(beta) +
                          ": no KMS states");
        return k;
    }
    k.conservative = std::abs(k.z - 1.0) <= 1e-9;
    k.exists = k.conservative || k.z < 1.0;
    if (k.exists && !k.conservative)
        k.notes.push_back("Z = " + fmt15(k.z) +
                          " < 1: the unique state comes from a properly almost harmonic "
                          "vector (a degenerate, non-conservative one)");
    if (!k.exists)
        k.notes.push_back("Z = " + fmt15(k.z) + " > 1: no KMS state at this beta");
    return k;
}

std::pair<RealSubgroup, FactorType> oinf_connes_group(const SequenceSpec& s, double beta0) {
    KmsExistence k = kms_existence(s, beta0);
    if (!k.conservative)
        throw precondition_error(
            "the state at beta = " + fmt15(beta0) + " is not conservative (Z = " + fmt15(k.z) +
            "): the invariant group is computed for conservative states only");
    std::vector<PotValue> gens = s.head;
    if (s.has_tail) {
        const long long n1 = (long long)s.head.size() + 1;
        gens.push_back(sequence_term(s, n1));
        gens.push_back(sequence_term(s, n1 + 1));
    }
    RealSubgroup group = subgroup_closure(gens, beta0, s.omega_witness);
    return {group, factor_type(group)};
}

Graph oinf_to_graph(const SequenceSpec& s) {
    if (s.has_tail)
        throw precondition_error("infinite emitters have no finite-graph counterpart");
    std::string text;
    if (s.omega_declared)
        text += "omega " + s.omega_name + " = " + fmt17(s.omega_witness) + "\n";
    text += "vertex v\n";
    for (std::size_t i = 0; i < s.head.size(); ++i)
        text += "arrow t" + std::to_string(i + 1) + " v v F=" + s.head[i].str(s.omega_name) +
                "\n";
    return Graph::parse(text);
}

}  // namespace gca
