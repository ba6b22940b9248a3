#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "errors.hpp"
#include "structure.hpp"
#include "util.hpp"

namespace gca {

namespace {

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, x);
    return buf;
}

}  // namespace

BetaMatrix build_beta_matrix(const Graph& g, double beta) {
    const int n = g.vertex_count();
    BetaMatrix m(beta, n);
    // Collect the terms per entry first so parallel arrows are summed in a
    // declaration-independent order.
    std::vector<std::vector<double>> terms(std::size_t(n) * n);
    for (const Arrow& a : g.arrows()) {
        const int v = a.src;
        const int w = a.dst;
        terms[std::size_t(v) * n + w].push_back(
            std::exp(-beta * a.pot.numeric(g.omega_witness())));
    }
    for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w) {
            auto& t = terms[std::size_t(v) * n + w];
            if (!t.empty()) m.at(v, w) = stable_sum(t);
        }
    return m;
}

namespace {

// Strong connectivity of the positive-entry digraph on `idx` (iterative
// double reachability: from idx[0] forwards and backwards).
bool block_irreducible(const BetaMatrix& m, const std::vector<int>& idx) {
    const int k = int(idx.size());
    if (k == 1) return true;
    auto reach = [&](bool forward) {
        std::vector<char> seen(k, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < k; ++j) {
                if (seen[j]) continue;
                double e = forward ? m.at(idx[i], idx[j]) : m.at(idx[j], idx[i]);
                if (e > 0.0) {
                    seen[j] = 1;
                    ++count;
                    stack.push_back(j);
                }
            }
        }
        return count == k;
    };
    return reach(true) && reach(false);
}

}  // namespace

PerronResult perron_eigen(const BetaMatrix& m, const std::vector<int>& restrict_set) {
    if (restrict_set.empty())
        throw invalid_argument("perron_eigen: empty vertex block");
    const int k = int(restrict_set.size());
    for (int i : restrict_set)
        if (i < 0 || i >= m.dim()) throw invalid_argument("perron_eigen: vertex index out of range");

    // Copy the block and find its largest entry.
    std::vector<double> s(std::size_t(k) * k);
    double max_entry = 0.0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            double e = m.at(restrict_set[i], restrict_set[j]);
            s[std::size_t(i) * k + j] = e;
            max_entry = std::max(max_entry, e);
        }
    if (max_entry == 0.0)
        throw precondition_error("perron_eigen: block matrix is zero (no arrows inside the block)");
    if (!block_irreducible(m, restrict_set))
        throw precondition_error("perron_eigen: block is not irreducible");

    PerronResult r;
    if (k == 1) {
        // A single vertex: the loop weight itself is the root, exactly.
        r.rho = s[0];
        r.vec = {1.0};
        r.residual = 0.0;
        r.iterations = 0;
        r.converged = true;
        return r;
    }

    // Balance by powers of two (an exact diagonal similarity). Entries
    // e^{-beta F} can span hundreds of orders of magnitude when F takes both
    // signs, and an unbalanced iteration then loses the spectral radius to
    // cancellation against the dominant entries.
    std::vector<double> dscale(k, 1.0);
    for (int pass = 0; pass < 200; ++pass) {
        bool changed = false;
        for (int i = 0; i < k; ++i) {
            double col = 0.0, row = 0.0;
            for (int j = 0; j < k; ++j) {
                if (j == i) continue;
                col = std::max(col, s[std::size_t(j) * k + i]);
                row = std::max(row, s[std::size_t(i) * k + j]);
            }
            if (col == 0.0 || row == 0.0) continue;
            double f = 1.0;
            while (col * f * 2.0 <= row / f && f < 1e140) f *= 2.0;
            while (row / f * 2.0 <= col * f && f > 1e-140) f *= 0.5;
            if (f == 1.0 || dscale[i] * f > 1e280 || dscale[i] * f < 1e-280) continue;
            for (int j = 0; j < k; ++j) {
                if (j == i) continue;
                s[std::size_t(i) * k + j] /= f;
                s[std::size_t(j) * k + i] *= f;
            }
            dscale[i] *= f;
            changed = true;
        }
        if (!changed) break;
    }
    max_entry = 0.0;
    for (double e : s) max_entry = std::max(max_entry, e);
    int expo = 0;
    std::frexp(max_entry, &expo);
    const double alpha = std::ldexp(1.0, expo);  // power of two >= max entry
    for (double& e : s) e /= alpha;              // exact: entries land in [0, 1]

    // Power iteration on M + I. The unit shift keeps periodic blocks (whose
    // peripheral spectrum defeats the plain iteration) converging, and after
    // balancing it is commensurate with the spectral radius, so the Rayleigh
    // quotient keeps its precision.
    std::vector<double> x(k, 1.0), y(k), mx(k);
    std::vector<double> terms;
    terms.reserve(k + 1);
    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (int i = 0; i < k; ++i) {
            terms.clear();
            for (int j = 0; j < k; ++j) {
                double e = s[std::size_t(i) * k + j];
                if (e != 0.0) terms.push_back(e * in[j]);
            }
            out[i] = stable_sum(terms);
        }
    };
    auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
        terms.clear();
        for (int i = 0; i < k; ++i) terms.push_back(a[i] * b[i]);
        return stable_sum(terms);
    };
    auto residual_at = [&](double lam) {
        apply(x, mx);
        double res = 0.0;
        for (int i = 0; i < k; ++i) res = std::max(res, std::abs(mx[i] - lam * x[i]));
        return res;
    };

    double lambda = 0.0, prev = std::numeric_limits<double>::infinity();
    const int max_iter = 200000;
    int it = 0;
    for (; it < max_iter; ++it) {
        apply(x, mx);
        lambda = dot(x, mx) / dot(x, x);
        for (int i = 0; i < k; ++i) y[i] = mx[i] + x[i];
        double norm = 0.0;
        for (double v : y) norm = std::max(norm, std::abs(v));
        for (int i = 0; i < k; ++i) x[i] = y[i] / norm;
        bool quotient_ok = std::abs(lambda - prev) <= 1e-12 * std::abs(lambda);
        prev = lambda;
        if (quotient_ok && it >= 1) {
            // Require the eigen residual itself to settle before accepting.
            double res = residual_at(lambda);
            if (res <= 1e-13 * lambda) {
                r.residual = alpha * res;
                r.converged = true;
                break;
            }
        }
    }
    r.rho = alpha * lambda;
    r.iterations = std::min(it + 1, max_iter);
    if (!r.converged) {
        // Cap reached: report the last residual honestly.
        r.residual = alpha * residual_at(lambda);
    }
    // Undo the balancing and renormalize to sup-norm 1.
    double sup = 0.0;
    for (int i = 0; i < k; ++i) {
        x[i] *= dscale[i];
        sup = std::max(sup, std::abs(x[i]));
    }
    for (int i = 0; i < k; ++i) x[i] /= sup;
    r.vec = x;
    return r;
}

double perron_root(const BetaMatrix& m, const std::vector<int>& restrict_set) {
    return perron_eigen(m, restrict_set).rho;
}

NwInfo nw_blocks(const Graph& g) {
    NwInfo info;
    info.vertices = non_wandering(g);
    std::vector<char> in_nw(g.vertex_count(), 0);
    for (int v : info.vertices) in_nw[v] = 1;
    for (const auto& scc : scc_condensation(g)) {
        if (!scc.empty() && in_nw[scc.front()]) info.blocks.push_back(scc);
    }
    return info;
}

double nw_rho(const Graph& g, double beta) {
    NwInfo info = nw_blocks(g);
    if (info.vertices.empty())
        throw precondition_error("the non-wandering set is empty: no cycles, so rho is undefined");
    BetaMatrix m = build_beta_matrix(g, beta);
    double rho = 0.0;
    for (const auto& block : info.blocks) rho = std::max(rho, perron_root(m, block));
    return rho;
}

CriticalResult critical_beta(const Graph& g, const CriticalOptions& opts) {
    NwInfo info = nw_blocks(g);
    if (info.vertices.empty())
        throw precondition_error(
            "the non-wandering set is empty: rho(beta) is undefined, no critical value exists");
    if (!(opts.beta_min < opts.beta_max))
        throw invalid_argument("critical_beta: need beta_min < beta_max");

    std::vector<char> in_nw(g.vertex_count(), 0);
    for (int v : info.vertices) in_nw[v] = 1;
    bool all_positive = true;
    for (const Arrow& a : g.arrows()) {
        if (!in_nw[a.src]) continue;
        if (!(a.pot.numeric(g.omega_witness()) > 0.0)) {
            all_positive = false;
            break;
        }
    }

    auto f = [&](double beta) {
        BetaMatrix m = build_beta_matrix(g, beta);
        double rho = 0.0;
        for (const auto& block : info.blocks) rho = std::max(rho, perron_root(m, block));
        return rho - 1.0;
    };

    CriticalResult r;
    double lo = opts.beta_min, hi = opts.beta_max;
    double flo = f(lo), fhi = f(hi);
    if (all_positive) {
        r.monotone_route = true;
        if (flo == 0.0) { r.beta0 = lo; r.rho_at_beta0 = 1.0; return r; }
        if (fhi == 0.0) { r.beta0 = hi; r.rho_at_beta0 = 1.0; return r; }
        if (!(flo > 0.0 && fhi < 0.0))
            throw precondition_error(
                "no critical value in [" + fmt("%.6g", lo) + ", " + fmt("%.6g", hi) +
                "]: rho - 1 = " + fmt("%.6g", flo) + " at the left end and " + fmt("%.6g", fhi) +
                " at the right end");
    } else {
        // rho(beta) need not be monotone; scan a uniform grid for brackets.
        const int cells = std::max(1, opts.grid);
        std::vector<double> grid(cells + 1), val(cells + 1);
        for (int i = 0; i <= cells; ++i) {
            grid[i] = lo + (hi - lo) * double(i) / cells;
            val[i] = (i == 0) ? flo : (i == cells ? fhi : f(grid[i]));
        }
        int first = -1, count = 0;
        for (int i = 0; i < cells; ++i) {
            bool bracket = (val[i] == 0.0) || (val[i] * val[i + 1] < 0.0);
            if (bracket) {
                ++count;
                if (first < 0) first = i;
            }
        }
        if (val[cells] == 0.0) {
            ++count;
            if (first < 0) { r.beta0 = grid[cells]; r.rho_at_beta0 = 1.0; r.sign_change_cells = count; return r; }
        }
        if (first < 0)
            throw precondition_error(
                "no critical value found in [" + fmt("%.6g", lo) + ", " + fmt("%.6g", hi) +
                "]: rho - 1 does not change sign on a " + std::to_string(cells) + "-cell grid");
        r.sign_change_cells = count;
        if (count > 1)
            r.warnings.push_back(
                "rho(beta) - 1 changes sign in " + std::to_string(count) +
                " grid cells; reporting the smallest root, others may exist");
        if (val[first] == 0.0) { r.beta0 = grid[first]; r.rho_at_beta0 = 1.0; return r; }
        lo = grid[first];
        hi = grid[first + 1];
        flo = val[first];
        fhi = val[first + 1];
    }

    // Bisection: flo and fhi have opposite signs here.
    for (int it = 0; it < 200 && (hi - lo) > opts.tol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at floating-point resolution
        double fm = f(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    r.beta0 = 0.5 * (lo + hi);
    r.rho_at_beta0 = f(r.beta0) + 1.0;
    return r;
}

HarmonicResult harmonic_vector(const Graph& g, double beta) {
    NwInfo info = nw_blocks(g);
    if (info.vertices.empty())
        throw precondition_error("the non-wandering set is empty: no harmonic vector exists");
    if (info.blocks.size() != 1)
        throw precondition_error(
            "the non-wandering set splits into " + std::to_string(info.blocks.size()) +
            " strongly connected blocks; a unique harmonic vector needs exactly one");

    BetaMatrix m = build_beta_matrix(g, beta);
    PerronResult p = perron_eigen(m, info.blocks[0]);
    if (std::abs(p.rho - 1.0) > kRhoGate)
        throw precondition_error(
            "rho(A(beta)|NW) = " + fmt("%.17g", p.rho) +
            " is not 1 within 1e-9: not in the conservative regime at beta = " +
            fmt("%.17g", beta));

    const int n = g.vertex_count();
    HarmonicResult r;
    r.beta = beta;
    r.values.assign(n, 0.0);

    const auto& block = info.blocks[0];
    for (int i = 0; i < int(block.size()); ++i) r.values[block[i]] = p.vec[i];
    std::vector<char> in_nw(n, 0);
    for (int v : block) in_nw[v] = 1;

    // Extend over wandering vertices, successors first (the condensation is
    // emitted in reverse-topological order, so every out-neighbour of a
    // wandering vertex is already assigned when its turn comes).
    bool sink_forced = false;
    std::vector<double> terms;
    for (const auto& scc : scc_condensation(g)) {
        if (in_nw[scc.front()]) continue;
        int v = scc.front();
        const auto& out = g.out_arrows(v);
        if (out.empty()) {
            r.values[v] = 0.0;
            sink_forced = true;
            continue;
        }
        terms.clear();
        for (int ai : out) {
            const Arrow& a = g.arrows()[ai];
            terms.push_back(std::exp(-beta * a.pot.numeric(g.omega_witness())) *
                            r.values[a.dst]);
        }
        r.values[v] = stable_sum(terms);
    }

    // Normalize so the first non-wandering vertex carries value 1.
    const double pivot = r.values[block.front()];
    for (double& x : r.values) x /= pivot;

    double sup = 0.0;
    for (double x : r.values) sup = std::max(sup, std::abs(x));
    r.strictly_positive = true;
    for (double x : r.values)
        if (!(x > 0.0)) r.strictly_positive = false;

    double worst = 0.0;
    for (int v = 0; v < n; ++v) {
        if (g.is_sink(v)) continue;
        terms.clear();
        for (int ai : g.out_arrows(v)) {
            const Arrow& a = g.arrows()[ai];
            terms.push_back(std::exp(-beta * a.pot.numeric(g.omega_witness())) *
                            r.values[a.dst]);
        }
        terms.push_back(-r.values[v]);
        worst = std::max(worst, std::abs(stable_sum(terms)));
    }
    r.max_residual = worst / std::max(sup, 1e-300);

    if (sink_forced) {
        r.kind = HarmonicKind::almost_harmonic;
        r.notes.push_back(
            "sinks force zero values, so no strictly positive harmonic vector exists; "
            "the vector satisfies A(beta) psi <= psi with equality away from sinks");
    } else if (!r.strictly_positive) {
        r.kind = HarmonicKind::almost_harmonic;
        r.notes.push_back("some vertices receive value 0 (unreachable from cycles)");
    } else if (r.max_residual > kRhoGate) {
        r.kind = HarmonicKind::almost_harmonic;
        r.notes.push_back("residual " + fmt("%.3g", r.max_residual) +
                          " exceeds the harmonicity gate 1e-9");
    } else {
        r.kind = HarmonicKind::harmonic;
    }
    return r;
}

VerifyOutcome verify_almost_harmonic(const Graph& g, double beta,
                                     std::span<const double> psi, double tol) {
    const int n = g.vertex_count();
    if (int(psi.size()) != n)
        throw invalid_argument("vector has " + std::to_string(psi.size()) +
                               " entries but the graph has " + std::to_string(n) + " vertices");

    VerifyOutcome out;
    double sup = 0.0;
    bool negative = false;
    for (double x : psi) {
        sup = std::max(sup, std::abs(x));
        if (x < 0.0) negative = true;
    }
    if (sup == 0.0) {
        out.verdict = VerifyVerdict::not_almost_harmonic;
        out.notes.push_back("the zero vector is excluded");
        return out;
    }
    if (negative) {
        out.verdict = VerifyVerdict::not_almost_harmonic;
        out.notes.push_back("negative entries are excluded");
        return out;
    }

    BetaMatrix m = build_beta_matrix(g, beta);
    const double slack = tol * sup;
    bool ineq_bad = false, eq_bad = false, strict_drop = false;
    std::vector<double> terms;
    for (int v = 0; v < n; ++v) {
        terms.clear();
        for (int w = 0; w < n; ++w)
            if (m.at(v, w) != 0.0) terms.push_back(m.at(v, w) * psi[w]);
        double row = terms.empty() ? 0.0 : stable_sum(terms);
        if (row > psi[v] + slack) {
            ineq_bad = true;
            out.violations.push_back({v, row, psi[v], "inequality"});
        } else if (!g.is_sink(v) && std::abs(row - psi[v]) > slack) {
            eq_bad = true;
            out.violations.push_back({v, row, psi[v], "equality"});
        } else if (row < psi[v] - slack) {
            strict_drop = true;  // allowed at sinks only; makes the vector non-harmonic
        }
    }
    if (ineq_bad || eq_bad) {
        out.verdict = VerifyVerdict::not_almost_harmonic;
    } else if (strict_drop) {
        out.verdict = VerifyVerdict::proper_almost_harmonic;
        out.notes.push_back("strict inequality at one or more sinks");
    } else {
        out.verdict = VerifyVerdict::harmonic;
    }
    return out;
}

Classification classify(const Graph& g, double beta) {
    Classification c;
    NwInfo info = nw_blocks(g);
    if (info.vertices.empty()) {
        c.verdict = KmsVerdict::nw_empty;
        c.notes.push_back(
            "the graph has no cycles: every vertex is wandering and the trichotomy is vacuous");
        return c;
    }
    BetaMatrix m = build_beta_matrix(g, beta);
    double rho = 0.0;
    for (const auto& block : info.blocks) rho = std::max(rho, perron_root(m, block));
    c.rho = rho;
    c.base_vertex = info.vertices.front();

    if (std::abs(rho - 1.0) <= kRhoGate) {
        c.verdict = KmsVerdict::conservative;
        if (std::abs(rho - 1.0) > kRhoGate / 10.0)
            c.gate_warnings.push_back("|rho - 1| = " + fmt("%.3g", std::abs(rho - 1.0)) +
                                      " passes the 1e-9 gate with less than a 10x margin");
    } else if (rho < 1.0) {
        c.verdict = KmsVerdict::dissipative;
        if (1.0 - rho <= 10.0 * kRhoGate)
            c.gate_warnings.push_back("1 - rho = " + fmt("%.3g", 1.0 - rho) +
                                      " clears the 1e-9 gate with less than a 10x margin");
    } else {
        c.verdict = KmsVerdict::no_kms_weight_from_nw;
        if (rho - 1.0 <= 10.0 * kRhoGate)
            c.gate_warnings.push_back("rho - 1 = " + fmt("%.3g", rho - 1.0) +
                                      " clears the 1e-9 gate with less than a 10x margin");
    }

    // Return-series diagnostics at the base vertex: partial sums of A^n_{vv}
    // and the n-th root sequence, stopping early if entries overflow.
    const int n = m.dim();
    const int base = c.base_vertex;
    std::vector<double> pw(std::size_t(n) * n, 0.0), nxt(std::size_t(n) * n);
    for (int i = 0; i < n; ++i) pw[std::size_t(i) * n + i] = 1.0;
    c.partial_sums.push_back(1.0);  // S_0 = A^0_{vv}
    std::vector<double> terms;
    double running = 1.0;
    int last_nz = -1, prev_nz = -1;
    double last_nz_val = 0.0;
    bool overflow = false;
    for (int step = 1; step <= kDiagnosticDepth && !overflow; ++step) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                terms.clear();
                for (int k = 0; k < n; ++k) {
                    double t = pw[std::size_t(i) * n + k] * m.at(k, j);
                    if (t != 0.0) terms.push_back(t);
                }
                nxt[std::size_t(i) * n + j] = terms.empty() ? 0.0 : stable_sum(terms);
            }
        pw.swap(nxt);
        double d = pw[std::size_t(base) * n + base];
        if (!(d < 1e300)) {
            overflow = true;
            c.notes.push_back("return series truncated at n = " + std::to_string(step) +
                              ": A^n_{vv} exceeded 1e300");
            break;
        }
        running += d;
        c.partial_sums.push_back(running);
        c.root_seq.push_back(d > 0.0 ? std::pow(d, 1.0 / step) : 0.0);
        if (d > 0.0) {
            prev_nz = last_nz;
            last_nz = step;
            last_nz_val = d;
        }
    }
    if (c.verdict == KmsVerdict::dissipative && last_nz > 0) {
        // Tail bound: later returns decay like rho^period per period.
        int period = (prev_nz > 0) ? last_nz - prev_nz : 1;
        double ratio = std::pow(rho, period);
        if (ratio < 1.0)
            c.tail_limit_estimate = running + last_nz_val * ratio / (1.0 - ratio);
    }
    return c;
}

}  // namespace gca
