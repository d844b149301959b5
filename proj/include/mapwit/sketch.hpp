#pragma once

#include <set>
#include <string>
#include <vector>

#include "mapwit/embedded.hpp"
#include "mapwit/graph.hpp"

namespace mapwit {

// Anchor vertex ids of an embedded witness w.r.t. a bag of real labels:
// reals whose label is in the bag, plus intersections all of whose neighbors
// carry bag labels.
std::set<int> anchors(const EmbeddedGraph& w, const std::set<int>& bag);

// Marks face activity on a witness w.r.t. the bag: a face is active iff its
// boundary carries at least two distinct anchors, or the graph is one
// isolated anchor vertex.
void mark_active_faces(EmbeddedGraph& w, const std::set<int>& bag);

// Shared cleanup establishing the sketch invariants: drops edges with no
// active side, parks stranded bag reals in limbo, deletes stranded
// intersections, deduplicates non-extensible parallel boundaries.
void sketch_cleanup(EmbeddedGraph& g, const std::set<int>& bag);

struct SketchResult {
    EmbeddedGraph sketch;  // compacted and validated
    std::string key;
    // maps into the source witness (present when with_maps was requested)
    std::vector<int> vertex_to_witness;      // per sketch vertex id
    std::vector<int> face_to_witness_face;   // per sketch face id (-1: sliver)
    std::vector<int> dart_first_witness;     // per sketch dart
    std::vector<int> dart_last_witness;
};

// The embedding sketch of a compact witness w.r.t. a bag. Counters are
// tracked when hole_free is set.
SketchResult compute_sketch(const EmbeddedGraph& witness, const std::set<int>& bag,
                            bool hole_free, bool with_maps = false);

// Standalone Remark-10 style reduction (also applied inside compute_sketch
// and the forget operation).
EmbeddedGraph dedup_nonextensible(const EmbeddedGraph& sketch);

}  // namespace mapwit
