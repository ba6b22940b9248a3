#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace gca {

// Transition probabilities induced by a harmonic vector:
// P(a | v) = e^{-beta F(a)} psi_{r(a)} / psi_v. Sinks carry empty rows and
// are flagged absorbing.
struct MarkovKernel {
    double beta = 0.0;
    std::vector<double> psi;
    std::vector<std::vector<double>> rows;  // aligned with out_arrows(v)
    std::vector<char> absorbing;            // sinks
};

// Weight of the spanning element indexed by the path pair (mu, nu): zero off
// the diagonal, e^{-beta F(mu)} psi_{r(mu)} on it.
double weight_value(const Graph& g, double beta, std::span<const double> psi,
                    const Path& mu, const Path& nu);

// Measure of the cylinder Z(mu): e^{-beta F(mu)} psi_{r(mu)}.
double cylinder_measure(const Graph& g, double beta, std::span<const double> psi,
                        const Path& mu);

// The state on the corner at `base`: weight_value normalized by psi_base.
// Both paths must start at base and psi_base must be positive.
double corner_state_value(const Graph& g, double beta, std::span<const double> psi,
                          int base, const Path& mu, const Path& nu);

// Builds the kernel; throws precondition_error when a non-sink row sum
// strays from 1 by more than 1e-6 (psi is not harmonic there) or when a
// non-sink vertex carries a non-positive value.
MarkovKernel markov_kernel(const Graph& g, double beta, std::span<const double> psi);

struct PathSample {
    std::int64_t samples = 0;
    int steps = 0;
    int start = -1;
    std::uint64_t seed = 0;
    int workers = 1;
    std::vector<std::int64_t> visit_counts;   // per vertex, across all steps
    std::int64_t return_events = 0;           // total visits to start after step 0
    std::int64_t paths_with_return = 0;       // samples visiting start again
    double return_fraction = 0.0;
    // Empirical counts of "path begins with mu" for every cylinder of
    // length 1..3 rooted at start, keyed by the dotted arrow-id path.
    std::vector<std::pair<std::string, std::int64_t>> cylinder_counts;
};

// Simulates `count` paths of `steps` steps from `start` under the kernel.
// Work splits into contiguous blocks over `workers` threads, each with an
// RNG stream derived from (seed, worker); the merged summary is
// bit-identical for a fixed (seed, workers) pair. Throws invalid_argument
// for a sink start or non-positive steps/count.
PathSample sample_paths(const Graph& g, const MarkovKernel& kernel, int start,
                        int steps, std::int64_t count, std::uint64_t seed,
                        int workers = 1);

struct ConformalityReport {
    std::string arrow_id;
    int cylinders_checked = 0;
    double max_exact_deviation = 0.0;  // relative, over exact cylinder identities
    bool exact_pass = false;           // <= 1e-12
    std::int64_t samples = 0;
    double max_mc_sigmas = 0.0;        // worst |phat - p| in standard errors
    bool mc_pass = false;              // <= 3 standard errors
};

// Checks m(Z(a mu)) = e^{-beta F(a)} m(Z(mu)) for every path mu of length
// <= 2 starting at r(a): exactly via the closed-form measure, and
// empirically from sampled prefix frequencies at s(a).
ConformalityReport conformality_test(const Graph& g, double beta,
                                     std::span<const double> psi, int arrow,
                                     std::int64_t samples, std::uint64_t seed);

// All paths of length 0..max_len starting at `start`, in depth-first
// declaration order (the enumeration order used for cylinder reports).
std::vector<Path> enumerate_paths(const Graph& g, int start, int max_len);

}  // namespace gca
