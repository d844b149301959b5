#pragma once

#include <optional>
#include <string>

#include "mapwit/embedded.hpp"
#include "mapwit/graph.hpp"

namespace mapwit {

// Certificate JSON: n, k, hole_free, fingerprint, intersections with neighbor
// lists, rotation system as ordered neighbor lists, position system as
// face -> walks. Real vertices are 1-indexed as in the .gr file; intersection
// ids follow from n+1 upward.
std::string certificate_to_json(const Graph& g, const EmbeddedGraph& w, int k, bool hole_free);

struct ParsedCertificate {
    int n = 0;
    int k = 0;
    bool hole_free = false;
    uint64_t fingerprint = 0;
    EmbeddedGraph witness;
};

ParsedCertificate certificate_from_json(const std::string& text);

// Planar straight-line drawing respecting the rotation system; reals drawn as
// disks, intersections as squares. Throws on inconsistent embeddings.
std::string render_svg(const EmbeddedGraph& w);

// segment end-points of the drawing, exposed for crossing-freeness tests
struct Drawing {
    std::vector<std::pair<double, double>> pos;        // per vertex id
    std::vector<std::pair<int, int>> segments;         // edges as vertex pairs
    std::vector<int> vertex_ids;
};
Drawing layout_witness(const EmbeddedGraph& w);

}  // namespace mapwit
