#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "mapwit/embedded.hpp"
#include "mapwit/graph.hpp"

namespace mapwit {

// Rotation system realizing a sphere embedding: rot[v] lists darts 2e / 2e+1
// (tail v) in cyclic order, indices into the given edge list.
struct Rotations {
    std::vector<std::vector<int>> rot;
};

// Planarity with embedding extraction (Demoucron-Malgrange-Pertuiset per
// block, blocks glued at cut vertices). Accepts multigraphs; self-loops are
// not supported.
std::optional<Rotations> planar_embed(int n, const std::vector<std::pair<int, int>>& edges);

inline bool is_planar_graph(int n, const std::vector<std::pair<int, int>>& edges) {
    return planar_embed(n, edges).has_value();
}

// Builds an embedded graph from a rotation system: traces faces per component
// and nests every component's first face into a common outer face.
// labels[v] >= 0 marks a real vertex, -1 an intersection vertex.
EmbeddedGraph assemble_embedded(const std::vector<int>& labels,
                                const std::vector<std::pair<int, int>>& edges,
                                const std::vector<std::vector<int>>& rot, bool track_counters);

// Enumerates every position system (component nesting) for a rotation system
// that is planar per component; skips non-planar rotations silently.
void enumerate_position_systems(const std::vector<int>& labels,
                                const std::vector<std::pair<int, int>>& edges,
                                const std::vector<std::vector<int>>& rot,
                                const std::function<void(EmbeddedGraph&)>& sink);

// All cyclic orders of the given items with the first element pinned.
void cyclic_permutations(const std::vector<int>& items, std::vector<std::vector<int>>& out);

}  // namespace mapwit
