#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graph.hpp"

namespace gca {

// Dense nonnegative matrix A(beta) over the vertex list: entry (v,w) is the
// sum of e^{-beta F(a)} over arrows a from v to w.
class BetaMatrix {
public:
    BetaMatrix(double beta, int n) : beta_(beta), n_(n), a_(std::size_t(n) * n, 0.0) {}

    double beta() const { return beta_; }
    int dim() const { return n_; }
    double at(int v, int w) const { return a_[std::size_t(v) * n_ + w]; }
    double& at(int v, int w) { return a_[std::size_t(v) * n_ + w]; }

private:
    double beta_;
    int n_;
    std::vector<double> a_;
};

BetaMatrix build_beta_matrix(const Graph& g, double beta);

struct PerronResult {
    double rho = 0.0;
    std::vector<double> vec;   // indexed like `restrict`, sup-norm 1
    double residual = 0.0;     // ||A x - rho x||_inf on the balanced block, <= 1e-13 rho
    int iterations = 0;
    bool converged = false;
};

// Spectral radius and Perron vector of the submatrix on `restrict`, which
// must induce an irreducible (strongly connected) block. Deterministic
// shifted power iteration from the all-ones vector; successive Rayleigh
// quotients within 1e-12 of each other terminate the loop.
PerronResult perron_eigen(const BetaMatrix& m, const std::vector<int>& restrict_set);
double perron_root(const BetaMatrix& m, const std::vector<int>& restrict_set);

// The non-wandering vertices together with their strongly connected blocks
// (ascending inside each block, blocks in reverse-topological order).
struct NwInfo {
    std::vector<int> vertices;
    std::vector<std::vector<int>> blocks;
};
NwInfo nw_blocks(const Graph& g);

// Spectral radius of A(beta) restricted to NW: the max of the Perron roots
// of its strongly connected blocks. Throws precondition_error when NW = {}.
double nw_rho(const Graph& g, double beta);

struct CriticalOptions {
    double beta_min = 1e-6;
    double beta_max = 50.0;
    double tol = 0.0;  // 0: bisect down to floating-point resolution
    int grid = 256;
};

struct CriticalResult {
    double beta0 = 0.0;
    double rho_at_beta0 = 0.0;
    bool monotone_route = false;  // all NW potentials positive: rho is decreasing
    int sign_change_cells = 1;    // >1 means additional roots may exist
    std::vector<std::string> warnings;
};

// Solves rho(A(beta)|NW) = 1 on [beta_min, beta_max] by bisection, with a
// uniform grid scan first whenever monotonicity of rho is not guaranteed.
// Throws precondition_error when NW is empty or no sign change is found.
CriticalResult critical_beta(const Graph& g, const CriticalOptions& opts = {});

enum class HarmonicKind { harmonic, almost_harmonic };

struct HarmonicResult {
    double beta = 0.0;
    std::vector<double> values;  // per vertex, first NW vertex normalized to 1
    HarmonicKind kind = HarmonicKind::harmonic;
    bool strictly_positive = true;
    double max_residual = 0.0;   // over non-sink vertices, relative to sup norm
    std::vector<std::string> notes;
};

// Perron vector on NW extended to the wandering vertices in
// reverse-topological order. Requires NW nonempty and strongly connected and
// |rho - 1| <= 1e-9. Sinks force zeros; when that happens the result is
// flagged almost_harmonic and a note explains that no strictly positive
// harmonic vector exists.
HarmonicResult harmonic_vector(const Graph& g, double beta);

enum class VerifyVerdict { harmonic, proper_almost_harmonic, not_almost_harmonic };

struct VerifyViolation {
    int vertex;
    double row_sum;
    double value;
    std::string constraint;  // "inequality" or "equality"
};

struct VerifyOutcome {
    VerifyVerdict verdict = VerifyVerdict::not_almost_harmonic;
    std::vector<VerifyViolation> violations;
    std::vector<std::string> notes;
};

// Classifies a user-supplied nonnegative vector against the (almost-)
// harmonic conditions at the given tolerance (relative to sup norm).
VerifyOutcome verify_almost_harmonic(const Graph& g, double beta,
                                     std::span<const double> psi, double tol);

enum class KmsVerdict { conservative, dissipative, no_kms_weight_from_nw, nw_empty };

struct Classification {
    KmsVerdict verdict = KmsVerdict::nw_empty;
    double rho = 0.0;          // meaningful unless nw_empty
    int base_vertex = -1;
    std::vector<double> partial_sums;  // S_N = sum_{n<=N} A^n_{vv}, N = 0..64
    std::vector<double> root_seq;      // (A^n_{vv})^{1/n}, n = 1..64
    std::optional<double> tail_limit_estimate;  // geometric bound, rho < 1 only
    std::vector<std::string> notes;
    std::vector<std::string> gate_warnings;
};

// The conservative / dissipative / no-weight trichotomy, decided from the
// Perron root of A(beta)|NW with the 1e-9 gate around rho = 1.
Classification classify(const Graph& g, double beta);

inline constexpr double kRhoGate = 1e-9;
inline constexpr int kDiagnosticDepth = 64;

}  // namespace gca
