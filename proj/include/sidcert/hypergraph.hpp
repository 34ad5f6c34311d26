#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sidcert/errors.hpp"

namespace sidcert {

/// An r-uniform hypergraph on vertices 0..n-1. Edges are strictly increasing
/// r-tuples, stored lexicographically sorted without duplicates. Isolated
/// vertices are permitted; all values are immutable after construction.
struct Hypergraph {
    int r = 2;
    int n = 0;
    std::vector<std::vector<int>> edges;

    Hypergraph() = default;
    Hypergraph(int uniformity, int vertex_count, std::vector<std::vector<int>> edge_list);

    int vertex_count() const { return n; }
    int edge_count() const { return static_cast<int>(edges.size()); }

    std::vector<int> degrees() const;

    bool operator==(const Hypergraph&) const = default;
};

// Named families.
Hypergraph make_tight_cycle(int ell, int r);
Hypergraph make_loose_cycle(int g, int r);
Hypergraph make_grid(int r);
Hypergraph make_half_octahedron();
Hypergraph make_single_edge(int r);

// Structural operations. All pure; vertex set conventions follow the ctor.
Hypergraph remove_edge(const Hypergraph& h, int index);
Hypergraph disjoint_union(const std::vector<Hypergraph>& parts);
Hypergraph levi_graph(const Hypergraph& h);
Hypergraph skeleton(const Hypergraph& h, int s);

// Subgraph on the full vertex set keeping the edges at the given indices.
Hypergraph edge_subset(const Hypergraph& h, const std::vector<int>& edge_indices);

bool is_linear(const Hypergraph& h);
bool is_connected(const Hypergraph& h);
bool is_two_connected(const Hypergraph& h);

struct GirthReport {
    int girth = 0;                   // edges in a shortest Berge cycle
    long long shortest_cycle_count = 0;
    bool all_shortest_loose = true;  // flags pathological inputs where Berge != loose
};

// Berge girth of a linear hypergraph with at least one cycle, computed on the
// Levi graph (a Berge cycle of g edges is a 2g-cycle there). Throws
// std::invalid_argument on non-linear input and ResourceError-free
// std::invalid_argument on acyclic input.
GirthReport berge_girth(const Hypergraph& h);

// Brute-force isomorphism for small fixtures (v <= 12).
bool is_isomorphic(const Hypergraph& a, const Hypergraph& b);

// If every edge of h is a window {i,...,i+r-1} mod n of the tight cycle on
// its own vertex set, returns the sorted list of window start indices.
std::optional<std::vector<int>> tight_cycle_window_starts(const Hypergraph& h);

// JSON file format: {"r": int, "n": int, "edges": [[int,...],...]}.
std::string hypergraph_to_json(const Hypergraph& h);
Hypergraph hypergraph_from_json(const std::string& text);

}  // namespace sidcert
