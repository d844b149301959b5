#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mapwit {

// Embedded multigraph on the sphere. Edge e owns darts 2e (u->v) and 2e+1
// (v->u). rot[v] is the cyclic order of out-darts around v. Faces are stored
// explicitly: a face holds one boundary walk per incident component (several
// walks when components share the face), where a walk is either a closed dart
// sequence or a single isolated vertex. Per-dart counters carry the number of
// original witness edges a (possibly shortcut) dart stands for.
struct EmbeddedGraph {
    struct Vertex {
        int label = -1;  // >=0: real vertex label; -1: intersection vertex
        bool alive = true;
    };
    struct Edge {
        int u = -1, v = -1;
        bool alive = true;
    };
    struct Walk {
        std::vector<int> darts;  // empty => isolated-vertex walk
        int isolated = -1;       // vertex id when darts is empty
        bool is_isolated() const { return darts.empty(); }
    };
    struct Face {
        std::vector<Walk> walks;
        bool active = false;
        bool alive = true;
        // scratch flags used by vertex-removal surgery, cleared on compact()
        bool lost_loop = false;
        bool lost_walk = false;
    };

    std::vector<Vertex> verts;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> rot;
    std::vector<Face> faces;
    bool track_counters = false;
    std::vector<uint8_t> counter;  // per dart; meaningful when track_counters
    std::vector<int> limbo;        // sorted real labels parked outside the sketch
    // optional per-dart provenance into an original witness: first/last
    // original dart of the run a dart stands for (identity for genuine darts)
    std::vector<int> prov_first, prov_last;

    void enable_provenance();
    bool provenance_on() const { return !prov_first.empty(); }

    int add_vertex(int label);
    // appends an edge; caller wires rotations/faces (or uses builders below)
    int add_edge(int u, int v);

    int tail(int d) const { return (d & 1) ? edges[d >> 1].v : edges[d >> 1].u; }
    int head(int d) const { return (d & 1) ? edges[d >> 1].u : edges[d >> 1].v; }
    static int alpha(int d) { return d ^ 1; }
    int dart_count() const { return static_cast<int>(edges.size()) * 2; }
    bool dart_alive(int d) const { return edges[d >> 1].alive; }
    int degree(int v) const { return static_cast<int>(rot[v].size()); }
    uint8_t dart_counter(int d) const { return track_counters ? counter[d] : 1; }
    static uint8_t sat_add(int a, int b) { return static_cast<uint8_t>(std::min(a + b, 5)); }

    // successor of out-dart d in the rotation at tail(d)
    int sigma_next(int d) const;
    // next dart along the face: sigma_next(alpha(d))
    int phi(int d) const { return sigma_next(alpha(d)); }

    std::vector<int> alive_vertices() const;
    std::vector<int> component_ids() const;  // per vertex, -1 for dead
    int vertex_of_label(int label) const;    // -1 if absent

    // --- structure checks ---
    // sketch_mode additionally requires every live edge to lie on at least one
    // active face and counter invariants to hold.
    void validate(bool sketch_mode) const;  // throws std::logic_error
    bool coherent(bool sketch_mode) const noexcept;

    // --- whole-graph transforms ---
    EmbeddedGraph mirrored() const;
    // renumber, drop dead entries, clear scratch; optionally reports the
    // old->new vertex and face index maps
    EmbeddedGraph compacted(std::vector<int>* vmap_out = nullptr,
                            std::vector<int>* fmap_out = nullptr) const;

    // --- canonical key ---
    // Equal keys iff equal up to intersection relabeling and global mirror,
    // preserving real labels, rotations, faces, active marks, counters, limbo.
    std::string canonical_key() const;

    // --- queries ---
    bool is_connected_embedded() const;
    bool is_biconnected_graph() const;
    bool is_quadrangulation() const;  // every face a single 4-dart walk
    // pairs of parallel edges bounding a 2-dart face
    std::vector<std::pair<int, int>> homotopic_pairs() const;

    // --- mutation primitives (keep faces coherent) ---
    // Removes edge e. If its darts lie on different walks the two faces merge
    // (activity = OR); if on the same walk the walk splits in place.
    void delete_edge(int e);
    // Shortcut-removal of one vertex: every walk transit through y collapses
    // to a single dart whose counter is the saturated sum; self-loop arcs are
    // deleted (flagging lost_loop); the vacated region becomes non-active
    // sliver faces. Isolated y just leaves its face (flagging lost_walk).
    void remove_vertex_shortcut(int y);
    // Removes vertex with all incident edges (restriction semantics).
    void delete_vertex_with_edges(int v);
    // Keep one representative per group of active two-dart parallel boundaries
    // sharing endpoints (and counter signature when tracking counters).
    void dedup_nonextensible_boundaries();

    int face_of_walk_dart(int d) const;      // face index containing dart d
    int face_of_isolated(int v) const;       // face index of vertex v's walk
    int distinct_vertices_on_face(int f) const;
    std::set<int> vertices_on_face(int f) const;
    void clear_active_marks();
};

// Closed walks traced from the rotation system alone (one per local face).
std::vector<std::vector<int>> trace_face_cycles(const EmbeddedGraph& g);

// Single-vertex embedded graph with one active face <label>.
EmbeddedGraph single_vertex_sketch(int label, bool track_counters);

}  // namespace mapwit
