#pragma once

#include <optional>
#include <set>
#include <string>

#include "mapwit/embedded.hpp"
#include "mapwit/graph.hpp"

namespace mapwit {

struct VerificationReport {
    bool is_witness = false;
    bool is_compact = false;
    int max_intersection_degree = 0;
    bool is_biconnected_quadrangulation = false;
    std::string first_failure;
};

// abstract <-> embedded conversions
std::optional<EmbeddedGraph> embed_witness(const BipartiteWitnessGraph& w);
BipartiteWitnessGraph abstract_witness(const EmbeddedGraph& w);
Graph half_square_of(const EmbeddedGraph& w);

// Full check: bipartite, simple, planar, labels = V(G), half-square equals G.
// Re-embeds the abstract graph when the given embedding is inconsistent.
VerificationReport verify_witness(const Graph& g, const EmbeddedGraph& w);

struct CompactnessResult {
    bool compact = true;
    std::string offender;  // description of the failing vertex/pair
};
CompactnessResult is_compact_witness(const EmbeddedGraph& w);

// Removes degenerate (degree <= 1) and inessential intersection vertices and
// one member per twin-pair until none remain; keeps the embedding.
EmbeddedGraph compactify(const EmbeddedGraph& w);

// One removal step of the loop above, in place; false when already compact.
bool compactify_step(EmbeddedGraph& w);

// connected + biconnected + quadrangulation
bool check_hole_free(const EmbeddedGraph& w);

// Restriction to a set of real labels: other reals removed with their edges,
// then compactified.
EmbeddedGraph restrict_witness(const EmbeddedGraph& w, const std::set<int>& keep_labels);

}  // namespace mapwit
