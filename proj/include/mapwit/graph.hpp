#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mapwit {

// Simple undirected graph on dense vertex ids 0..n-1.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // normalized u < v, sorted, unique
    std::vector<std::vector<int>> adj;

    Graph() = default;
    explicit Graph(int n_) : n(n_), adj(n_) {}

    void add_edge(int u, int v);
    bool has_edge(int u, int v) const;
    int degree(int v) const { return static_cast<int>(adj[v].size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    bool is_connected() const;
    std::vector<int> component_of(int v) const;

    // Canonical text form (PACE .gr), used for fingerprints.
    std::string to_gr() const;
    uint64_t fingerprint() const;
};

struct ParseError {
    std::string message;
    int line = 0;
};

// PACE-style edge list: "p tw <n> <m>", then "<u> <v>" lines, 1-indexed.
// Comment lines start with 'c'. Duplicate edges collapse.
Graph parse_graph(const std::string& text);

// Bipartite witness graph in adjacency form: real vertices 0..real_count-1,
// intersection vertices indexed 0..intersection_count-1 with neighbor lists
// over the reals.
struct BipartiteWitnessGraph {
    int real_count = 0;
    std::vector<std::vector<int>> intersection_neighbors;

    int intersection_count() const { return static_cast<int>(intersection_neighbors.size()); }
    int total() const { return real_count + intersection_count(); }
    int edge_count() const;
};

// Half-square on the real vertices: u,v adjacent iff they share an
// intersection neighbor.
Graph half_square(const BipartiteWitnessGraph& w);

struct Block {
    std::vector<int> vertices;              // original vertex ids
    std::vector<std::pair<int, int>> edges; // original ids
};

struct BlockDecomposition {
    std::vector<Block> blocks;        // isolated vertices appear as edgeless blocks
    std::vector<int> cut_vertices;
};

BlockDecomposition biconnected_components(const Graph& g);

bool is_biconnected(const Graph& g);  // connected and no cut vertex; K1, K2 count

// All cliques with size in [min_size, max_size], each listed once, vertices
// ascending, output ordered lexicographically.
std::vector<std::vector<int>> enumerate_cliques(const Graph& g, int min_size, int max_size);

bool is_clique(const Graph& g, const std::vector<int>& vs);

}  // namespace mapwit
