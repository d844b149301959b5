#pragma once

#include <string>
#include <vector>

#include "mapwit/graph.hpp"

namespace mapwit {

struct TreeDecomposition {
    std::vector<std::vector<int>> bags;          // sorted vertex lists
    std::vector<std::pair<int, int>> tree_edges; // bag indices
    int width() const;

    // throws ParseError with the violated condition
    void validate(const Graph& g) const;
};

// PACE .td format: "s td <#bags> <width+1> <n>", "b <id> <v...>", edges.
TreeDecomposition parse_td(const std::string& text, const Graph& g);

enum class NodeKind { Leaf, Introduce, Forget, Join };

struct NiceNode {
    NodeKind kind;
    int vertex = -1;           // introduced/forgotten/leaf vertex
    std::vector<int> bag;      // sorted
    std::vector<int> children; // node indices
};

struct NiceTreeDecomposition {
    std::vector<NiceNode> nodes;
    int root = -1;

    int width() const;
    void validate(const Graph& g) const;
    std::vector<int> topo_order() const;  // children before parents
};

// Nice form of a valid decomposition; the root is normalized to a single
// vertex by a forget chain.
NiceTreeDecomposition make_nice(const TreeDecomposition& td);

// Exact for n <= 20 (subset dynamic programming over elimination orders),
// min-fill heuristic above that. Always valid.
TreeDecomposition compute_td(const Graph& g);

}  // namespace mapwit
