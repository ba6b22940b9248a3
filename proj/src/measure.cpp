#include "measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <thread>

#include "errors.hpp"
#include "util.hpp"

namespace gca {

namespace {

bool paths_equal(const Graph& g, const Path& mu, const Path& nu) {
    if (mu.arrows.size() != nu.arrows.size()) return false;
    if (mu.empty()) return path_source(g, mu) == path_source(g, nu);
    return mu.arrows == nu.arrows;
}

}  // namespace

double cylinder_measure(const Graph& g, double beta, std::span<const double> psi,
                        const Path& mu) {
    if (int(psi.size()) != g.vertex_count())
        throw invalid_argument("vector has " + std::to_string(psi.size()) +
                               " entries but the graph has " +
                               std::to_string(g.vertex_count()) + " vertices");
    const double f = path_potential(g, mu).numeric(g.omega_witness());
    return std::exp(-beta * f) * psi[path_range(g, mu)];
}

double weight_value(const Graph& g, double beta, std::span<const double> psi,
                    const Path& mu, const Path& nu) {
    if (!paths_equal(g, mu, nu)) {
        path_potential(g, mu);  // still validate both operands
        path_potential(g, nu);
        return 0.0;
    }
    return cylinder_measure(g, beta, psi, mu);
}

double corner_state_value(const Graph& g, double beta, std::span<const double> psi,
                          int base, const Path& mu, const Path& nu) {
    if (base < 0 || base >= g.vertex_count())
        throw invalid_argument("corner_state_value: vertex index out of range");
    if (path_source(g, mu) != base || path_source(g, nu) != base)
        throw invalid_argument("corner_state_value: both paths must start at '" +
                               g.vertex_id(base) + "'");
    if (int(psi.size()) != g.vertex_count())
        throw invalid_argument("corner_state_value: vector dimension mismatch");
    if (!(psi[base] > 0.0))
        throw precondition_error("the corner at '" + g.vertex_id(base) +
                                 "' carries value 0: no state lives there");
    return weight_value(g, beta, psi, mu, nu) / psi[base];
}

MarkovKernel markov_kernel(const Graph& g, double beta, std::span<const double> psi) {
    const int n = g.vertex_count();
    if (int(psi.size()) != n)
        throw invalid_argument("vector has " + std::to_string(psi.size()) +
                               " entries but the graph has " + std::to_string(n) +
                               " vertices");
    MarkovKernel k;
    k.beta = beta;
    k.psi.assign(psi.begin(), psi.end());
    k.rows.resize(n);
    k.absorbing.assign(n, 0);
    std::vector<double> terms;
    for (int v = 0; v < n; ++v) {
        if (g.is_sink(v)) {
            k.absorbing[v] = 1;
            continue;
        }
        if (!(psi[v] > 0.0))
            throw precondition_error("vertex '" + g.vertex_id(v) +
                                     "' is not a sink but carries value " + fmt15(psi[v]) +
                                     ": transition probabilities are undefined there");
        auto& row = k.rows[v];
        terms.clear();
        for (int ai : g.out_arrows(v)) {
            const Arrow& a = g.arrows()[ai];
            double p = std::exp(-beta * a.pot.numeric(g.omega_witness())) * psi[a.dst] / psi[v];
            row.push_back(p);
            terms.push_back(p);
        }
        double sum = stable_sum(terms);
        if (std::abs(sum - 1.0) > 1e-6)
            throw precondition_error("row sum at vertex '" + g.vertex_id(v) + "' is " +
                                     fmt15(sum) +
                                     ": the vector is not harmonic there (gate 1e-6)");
    }
    return k;
}

std::vector<Path> enumerate_paths(const Graph& g, int start, int max_len) {
    if (start < 0 || start >= g.vertex_count())
        throw invalid_argument("enumerate_paths: vertex index out of range");
    std::vector<Path> out;
    Path root;
    root.anchor = start;
    out.push_back(root);
    std::vector<int> arrows;
    std::vector<std::pair<int, int>> frames{{start, 0}};  // (vertex, next out idx)
    while (!frames.empty()) {
        auto& [cur, next] = frames.back();
        const auto& outs = g.out_arrows(cur);
        if (int(arrows.size()) >= max_len || next >= int(outs.size())) {
            frames.pop_back();
            if (!arrows.empty()) arrows.pop_back();
            continue;
        }
        int ai = outs[next++];
        arrows.push_back(ai);
        Path p;
        p.anchor = start;
        p.arrows = arrows;
        out.push_back(p);
        frames.push_back({g.arrows()[ai].dst, 0});
    }
    return out;
}

namespace {

// Prefix trie over the cylinders of length 1..3 rooted at the start vertex.
// Node 0 is the empty prefix; cylinder i maps to node i + 1.
struct PrefixTrie {
    std::vector<Path> cylinders;
    std::vector<std::vector<std::pair<int, int>>> child;  // node -> (arrow, node)

    explicit PrefixTrie(const Graph& g, int start) {
        std::map<std::vector<int>, int> node_of;
        node_of[{}] = 0;
        child.emplace_back();
        for (const Path& p : enumerate_paths(g, start, 3)) {
            if (p.empty()) continue;
            std::vector<int> parent(p.arrows.begin(), p.arrows.end() - 1);
            int pn = node_of.at(parent);
            int node = int(cylinders.size()) + 1;
            cylinders.push_back(p);
            node_of[p.arrows] = node;
            child.emplace_back();
            child[pn].push_back({p.arrows.back(), node});
        }
    }

    int descend(int node, int arrow) const {
        for (auto& [a, n] : child[node])
            if (a == arrow) return n;
        return -1;
    }
};

struct WorkerSummary {
    std::vector<std::int64_t> visits;
    std::int64_t return_events = 0;
    std::int64_t paths_with_return = 0;
    std::vector<std::int64_t> prefix_counts;
};

void run_worker(const Graph& g, const MarkovKernel& kernel, const PrefixTrie& trie,
                int start, int steps, std::int64_t lo, std::int64_t hi,
                std::uint64_t stream_seed, WorkerSummary& out) {
    out.visits.assign(g.vertex_count(), 0);
    out.prefix_counts.assign(trie.cylinders.size(), 0);
    std::mt19937_64 rng(stream_seed);
    for (std::int64_t s = lo; s < hi; ++s) {
        int v = start;
        int node = 0;
        bool returned = false;
        for (int t = 1; t <= steps; ++t) {
            if (kernel.absorbing[v]) break;
            // 53 uniform bits; explicit mapping keeps streams portable.
            double u = double(rng() >> 11) * 0x1.0p-53;
            const auto& row = kernel.rows[v];
            const auto& outs = g.out_arrows(v);
            int pick = int(row.size()) - 1;
            double acc = 0.0;
            for (int j = 0; j < int(row.size()); ++j) {
                acc += row[j];
                if (u < acc) {
                    pick = j;
                    break;
                }
            }
            int ai = outs[pick];
            v = g.arrows()[ai].dst;
            ++out.visits[v];
            if (node >= 0 && t <= 3) {
                node = trie.descend(node, ai);
                if (node > 0) ++out.prefix_counts[node - 1];
            }
            if (v == start) {
                ++out.return_events;
                returned = true;
            }
        }
        if (returned) ++out.paths_with_return;
    }
}

}  // namespace

PathSample sample_paths(const Graph& g, const MarkovKernel& kernel, int start,
                        int steps, std::int64_t count, std::uint64_t seed,
                        int workers) {
    const int n = g.vertex_count();
    if (start < 0 || start >= n)
        throw invalid_argument("sample_paths: vertex index out of range");
    if (g.is_sink(start))
        throw invalid_argument("sample_paths: start vertex '" + g.vertex_id(start) +
                               "' is a sink");
    if (steps < 1) throw invalid_argument("sample_paths: steps must be >= 1");
    if (count < 1) throw invalid_argument("sample_paths: count must be >= 1");
    if (workers < 1) throw invalid_argument("sample_paths: workers must be >= 1");
    if (int(kernel.rows.size()) != n)
        throw invalid_argument("sample_paths: kernel does not match the graph");

    PrefixTrie trie(g, start);
    std::vector<WorkerSummary> parts(workers);
    std::vector<std::thread> threads;
    const std::int64_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        std::int64_t lo = std::min<std::int64_t>(count, w * chunk);
        std::int64_t hi = std::min<std::int64_t>(count, lo + chunk);
        std::uint64_t stream = splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * std::uint64_t(w + 1)));
        threads.emplace_back(run_worker, std::cref(g), std::cref(kernel), std::cref(trie),
                             start, steps, lo, hi, stream, std::ref(parts[w]));
    }
    for (auto& t : threads) t.join();

    PathSample s;
    s.samples = count;
    s.steps = steps;
    s.start = start;
    s.seed = seed;
    s.workers = workers;
    s.visit_counts.assign(n, 0);
    std::vector<std::int64_t> prefix(trie.cylinders.size(), 0);
    for (const WorkerSummary& p : parts) {
        for (int v = 0; v < n; ++v) s.visit_counts[v] += p.visits[v];
        s.return_events += p.return_events;
        s.paths_with_return += p.paths_with_return;
        for (std::size_t i = 0; i < prefix.size(); ++i) prefix[i] += p.prefix_counts[i];
    }
    s.return_fraction = double(s.paths_with_return) / double(count);
    for (std::size_t i = 0; i < trie.cylinders.size(); ++i)
        s.cylinder_counts.push_back({path_str(g, trie.cylinders[i]), prefix[i]});
    return s;
}

ConformalityReport conformality_test(const Graph& g, double beta,
                                     std::span<const double> psi, int arrow,
                                     std::int64_t samples, std::uint64_t seed) {
    if (arrow < 0 || arrow >= g.arrow_count())
        throw invalid_argument("conformality_test: arrow index out of range");
    const Arrow& a = g.arrows()[arrow];
    ConformalityReport rep;
    rep.arrow_id = a.id;
    rep.samples = samples;

    const double scale = std::exp(-beta * a.pot.numeric(g.omega_witness()));
    for (const Path& mu : enumerate_paths(g, a.dst, 2)) {
        Path amu;
        amu.anchor = a.src;
        amu.arrows.push_back(arrow);
        amu.arrows.insert(amu.arrows.end(), mu.arrows.begin(), mu.arrows.end());
        double lhs = cylinder_measure(g, beta, psi, amu);
        double rhs = scale * cylinder_measure(g, beta, psi, mu);
        double dev = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
        rep.max_exact_deviation = std::max(rep.max_exact_deviation, dev);
        ++rep.cylinders_checked;
    }
    rep.exact_pass = rep.max_exact_deviation <= 1e-12;

    if (samples > 0) {
        MarkovKernel kernel = markov_kernel(g, beta, psi);
        PathSample ps = sample_paths(g, kernel, a.src, 3, samples, seed, 1);
        std::map<std::string, std::int64_t> counts(ps.cylinder_counts.begin(),
                                                   ps.cylinder_counts.end());
        for (const Path& mu : enumerate_paths(g, a.dst, 2)) {
            Path amu;
            amu.anchor = a.src;
            amu.arrows.push_back(arrow);
            amu.arrows.insert(amu.arrows.end(), mu.arrows.begin(), mu.arrows.end());
            double p = cylinder_measure(g, beta, psi, amu) / psi[a.src];
            auto it = counts.find(path_str(g, amu));
            double phat = it == counts.end() ? 0.0 : double(it->second) / double(samples);
            double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / double(samples));
            rep.max_mc_sigmas = std::max(rep.max_mc_sigmas, std::abs(phat - p) / se);
        }
        rep.mc_pass = rep.max_mc_sigmas <= 3.0;
    }
    return rep;
}

}  // namespace gca
