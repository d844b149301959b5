#include "mapwit/witness.hpp"

#include <algorithm>
#include <map>

#include "mapwit/planarity.hpp"

namespace mapwit {

std::optional<EmbeddedGraph> embed_witness(const BipartiteWitnessGraph& w) {
    std::vector<int> labels;
    for (int v = 0; v < w.real_count; ++v) labels.push_back(v);
    for (int i = 0; i < w.intersection_count(); ++i) labels.push_back(-1);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < w.intersection_count(); ++i)
        for (int r : w.intersection_neighbors[i]) edges.push_back({r, w.real_count + i});
    auto rot = planar_embed(static_cast<int>(labels.size()), edges);
    if (!rot) return std::nullopt;
    return assemble_embedded(labels, edges, rot->rot, false);
}

BipartiteWitnessGraph abstract_witness(const EmbeddedGraph& w) {
    BipartiteWitnessGraph out;
    int maxlbl = -1;
    for (const auto& v : w.verts)
        if (v.alive && v.label >= 0) maxlbl = std::max(maxlbl, v.label);
    out.real_count = maxlbl + 1;
    for (int v = 0; v < static_cast<int>(w.verts.size()); ++v) {
        if (!w.verts[v].alive || w.verts[v].label >= 0) continue;
        std::vector<int> ns;
        for (int d : w.rot[v]) ns.push_back(w.verts[w.head(d)].label);
        std::sort(ns.begin(), ns.end());
        out.intersection_neighbors.push_back(std::move(ns));
    }
    std::sort(out.intersection_neighbors.begin(), out.intersection_neighbors.end());
    return out;
}

Graph half_square_of(const EmbeddedGraph& w) { return half_square(abstract_witness(w)); }

namespace {

// intersection neighborhoods as label sets, by vertex id
std::map<int, std::set<int>> intersection_nbhds(const EmbeddedGraph& w) {
    std::map<int, std::set<int>> out;
    for (int v = 0; v < static_cast<int>(w.verts.size()); ++v) {
        if (!w.verts[v].alive || w.verts[v].label >= 0) continue;
        std::set<int> ns;
        for (int d : w.rot[v]) ns.insert(w.verts[w.head(d)].label);
        out[v] = std::move(ns);
    }
    return out;
}

// twin-pairs visible in the current embedding: faces with a single 4-dart walk
// through v,u1,w,u2 where u1,u2 are distinct degree-2 intersections with equal
// neighborhoods
std::vector<std::pair<int, int>> find_twin_pairs(const EmbeddedGraph& w) {
    std::vector<std::pair<int, int>> out;
    for (const auto& fc : w.faces) {
        if (!fc.alive || fc.walks.size() != 1 || fc.walks[0].darts.size() != 4) continue;
        const auto& ds = fc.walks[0].darts;
        int t0 = w.tail(ds[0]), t1 = w.tail(ds[1]), t2 = w.tail(ds[2]), t3 = w.tail(ds[3]);
        for (auto [a, b] : {std::pair{t0, t2}, std::pair{t1, t3}}) {
            if (a == b) continue;
            if (w.verts[a].label >= 0 || w.verts[b].label >= 0) continue;
            if (w.degree(a) != 2 || w.degree(b) != 2) continue;
            std::set<int> na, nbs;
            for (int d : w.rot[a]) na.insert(w.head(d));
            for (int d : w.rot[b]) nbs.insert(w.head(d));
            if (na == nbs && na.size() == 2) out.push_back({std::min(a, b), std::max(a, b)});
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

CompactnessResult is_compact_witness(const EmbeddedGraph& w) {
    auto nbh = intersection_nbhds(w);
    for (auto& [v, ns] : nbh)
        if (ns.size() <= 1)
            return {false, "intersection vertex of degree <= 1 (id " + std::to_string(v) + ")"};
    for (auto& [u, nu] : nbh) {
        if (w.degree(u) != 2) continue;
        for (auto& [u2, nu2] : nbh) {
            if (u2 == u) continue;
            if (nu != nu2 && std::includes(nu2.begin(), nu2.end(), nu.begin(), nu.end()))
                return {false, "inessential intersection vertex (id " + std::to_string(u) + ")"};
        }
    }
    auto twins = find_twin_pairs(w);
    if (!twins.empty())
        return {false, "twin-pair (ids " + std::to_string(twins[0].first) + "," +
                           std::to_string(twins[0].second) + ")"};
    return {true, ""};
}

bool compactify_step(EmbeddedGraph& w) {
    // degenerate intersections
    for (int v = 0; v < static_cast<int>(w.verts.size()); ++v)
        if (w.verts[v].alive && w.verts[v].label < 0 && w.degree(v) <= 1) {
            w.delete_vertex_with_edges(v);
            return true;
        }
    // inessential
    auto nbh = intersection_nbhds(w);
    for (auto& [u, nu] : nbh) {
        if (w.degree(u) != 2) continue;
        for (auto& [u2, nu2] : nbh) {
            if (u2 == u) continue;
            if (nu != nu2 && std::includes(nu2.begin(), nu2.end(), nu.begin(), nu.end())) {
                w.delete_vertex_with_edges(u);
                return true;
            }
        }
    }
    // twin-pairs: remove the larger id
    auto twins = find_twin_pairs(w);
    if (!twins.empty()) {
        w.delete_vertex_with_edges(twins[0].second);
        return true;
    }
    return false;
}

EmbeddedGraph compactify(const EmbeddedGraph& w_in) {
    EmbeddedGraph w = w_in;
    while (compactify_step(w)) {
    }
    return w.compacted();
}

bool check_hole_free(const EmbeddedGraph& w) {
    return w.is_connected_embedded() && w.is_biconnected_graph() && w.is_quadrangulation();
}

VerificationReport verify_witness(const Graph& g, const EmbeddedGraph& w_in) {
    VerificationReport rep;
    EmbeddedGraph w = w_in;
    // labels must be exactly V(G)
    std::set<int> labels;
    for (const auto& v : w.verts)
        if (v.alive && v.label >= 0) labels.insert(v.label);
    if (static_cast<int>(labels.size()) != g.n ||
        (g.n > 0 && (*labels.begin() != 0 || *labels.rbegin() != g.n - 1))) {
        rep.first_failure = "real labels differ from the graph's vertex set";
        return rep;
    }
    // bipartite real-intersection, simple
    std::set<std::pair<int, int>> seen_edges;
    for (const auto& e : w.edges) {
        if (!e.alive) continue;
        bool ur = w.verts[e.u].label >= 0, vr = w.verts[e.v].label >= 0;
        if (ur == vr) {
            rep.first_failure = "edge does not join a real and an intersection vertex";
            return rep;
        }
        auto key = std::minmax(e.u, e.v);
        if (!seen_edges.insert({key.first, key.second}).second) {
            rep.first_failure = "parallel edge";
            return rep;
        }
    }
    // embedding structurally sound? otherwise re-embed the abstract graph
    bool valid_embedding = true;
    try {
        w.validate(false);
    } catch (const std::exception&) {
        valid_embedding = false;
    }
    if (!valid_embedding) {
        auto re = embed_witness(abstract_witness(w));
        if (!re) {
            rep.first_failure = "not planar";
            return rep;
        }
        w = *re;
    }
    // half-square equality
    auto hs = half_square_of(w);
    if (hs.n < g.n) hs.n = g.n;  // isolated reals
    if (hs.n != g.n || hs.edges != g.edges) {
        rep.first_failure = "half-square differs from the graph";
        return rep;
    }
    rep.is_witness = true;
    for (int v = 0; v < static_cast<int>(w.verts.size()); ++v)
        if (w.verts[v].alive && w.verts[v].label < 0)
            rep.max_intersection_degree = std::max(rep.max_intersection_degree, w.degree(v));
    auto cr = is_compact_witness(w);
    rep.is_compact = cr.compact;
    if (!cr.compact && rep.first_failure.empty()) rep.first_failure = cr.offender;
    rep.is_biconnected_quadrangulation = check_hole_free(w);
    return rep;
}

EmbeddedGraph restrict_witness(const EmbeddedGraph& w_in, const std::set<int>& keep_labels) {
    EmbeddedGraph w = w_in;
    for (int v = 0; v < static_cast<int>(w.verts.size()); ++v)
        if (w.verts[v].alive && w.verts[v].label >= 0 && !keep_labels.count(w.verts[v].label))
            w.delete_vertex_with_edges(v);
    return compactify(w);
}

}  // namespace mapwit
