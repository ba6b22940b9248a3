#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "potential.hpp"

namespace gca {

struct Arrow {
    std::string id;
    int src = -1;
    int dst = -1;
    PotValue pot;
};

struct OmegaDecl {
    std::string name;
    double witness = 0.0;
};

// A finite directed multigraph with an exact potential on each arrow.
// Immutable after construction; every analysis in this library is a pure
// function of one of these.
class Graph {
public:
    // Parses the line-oriented graph file format:
    //   # comment
    //   omega <name> = <decimal>          (at most once, before first use)
    //   vertex <id>
    //   arrow <id> <src> <dst> F=<rat>[+<rat><omega-name>]
    // Throws parse_error with a 1-based line number on malformed input.
    static Graph parse(std::string_view text);

    // Canonical rendering; parsing it back yields an identical graph.
    std::string serialize() const;

    int vertex_count() const { return static_cast<int>(vertex_ids_.size()); }
    int arrow_count() const { return static_cast<int>(arrows_.size()); }

    const std::string& vertex_id(int v) const { return vertex_ids_.at(v); }
    const Arrow& arrow(int a) const { return arrows_.at(a); }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    const std::vector<std::string>& vertex_ids() const { return vertex_ids_; }

    // Index lookups throw invalid_argument for unknown ids.
    int vertex_index(std::string_view id) const;
    int arrow_index(std::string_view id) const;
    std::optional<int> find_vertex(std::string_view id) const;
    std::optional<int> find_arrow(std::string_view id) const;

    // Arrow indices with source v, in declaration order.
    const std::vector<int>& out_arrows(int v) const { return out_.at(v); }
    bool is_sink(int v) const { return out_.at(v).empty(); }

    const std::optional<OmegaDecl>& omega() const { return omega_; }
    double omega_witness() const { return omega_ ? omega_->witness : 0.0; }

    // Digest of the text this graph was parsed from; graphs built by
    // re-parsing a serialization carry the digest of that serialization.
    const std::string& digest() const { return digest_; }

    bool same_as(const Graph& other) const;

private:
    std::vector<std::string> vertex_ids_;
    std::vector<Arrow> arrows_;
    std::vector<std::vector<int>> out_;
    std::optional<OmegaDecl> omega_;
    std::string digest_;
};

// A finite path: a composable arrow sequence, or a single anchor vertex for
// the length-0 case.
struct Path {
    int anchor = -1;                // meaningful only when arrows is empty
    std::vector<int> arrows;

    int length() const { return static_cast<int>(arrows.size()); }
    bool empty() const { return arrows.empty(); }
};

// Builds a path from arrow ids ("a.b.c") or an anchored vertex ("@v"),
// validating composability.
Path make_path(const Graph& g, const std::vector<std::string>& arrow_ids);
Path vertex_path(const Graph& g, std::string_view vertex_id);
Path parse_path(const Graph& g, std::string_view spec);

int path_source(const Graph& g, const Path& p);
int path_range(const Graph& g, const Path& p);
std::string path_str(const Graph& g, const Path& p);

// Exact sum of arrow potentials; zero for a length-0 path. Validates the
// composability invariant and throws invalid_argument when it fails.
PotValue path_potential(const Graph& g, const Path& p);

// Potential literal "<rat>[+<rat><omega-name>]" as used after "F=" in graph
// files; `line` seeds the parse_error location (0 for non-file contexts).
PotValue parse_pot_literal(std::string_view text, const std::optional<OmegaDecl>& omega,
                           int line);

}  // namespace gca
