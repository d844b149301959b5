#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mapwit/embedded.hpp"
#include "mapwit/graph.hpp"

namespace mapwit {

struct OracleResult {
    bool yes = false;
    std::optional<EmbeddedGraph> witness;
};

// Exhaustive recognizer over clique covers: yes iff some choice of cliques of
// size <= k covering every edge has a planar vertex-clique incidence graph.
OracleResult brute_force_is_k_map(const Graph& g, int k, int limit = 6);

// Hole-free variant: searches clique multisets whose incidence graph is a
// connected biconnected planar bipartite graph with |A| = 2n-4. Graphs with
// fewer than three vertices are handled by a fixed table.
OracleResult brute_force_is_hole_free_k_map(const Graph& g, int k, int limit = 6);

// All sketches of compact witnesses of the induced subgraph g[vs], w.r.t. a
// bag of labels, as canonical keys. Enumerates clique multisets within the
// size bounds, then every rotation and position system, keeping compact
// embeddings only.
std::set<std::string> enumerate_compact_witness_sketch_keys(const Graph& g,
                                                            const std::vector<int>& vs,
                                                            const std::set<int>& bag,
                                                            int limit = 5);

}  // namespace mapwit
