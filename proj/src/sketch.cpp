#include "mapwit/sketch.hpp"

#include <algorithm>

namespace mapwit {

std::set<int> anchors(const EmbeddedGraph& w, const std::set<int>& bag) {
    std::set<int> out;
    for (int v = 0; v < static_cast<int>(w.verts.size()); ++v) {
        if (!w.verts[v].alive) continue;
        if (w.verts[v].label >= 0) {
            if (bag.count(w.verts[v].label)) out.insert(v);
        } else {
            bool all_in = true;
            for (int d : w.rot[v])
                if (!bag.count(w.verts[w.head(d)].label)) {
                    all_in = false;
                    break;
                }
            if (all_in) out.insert(v);
        }
    }
    return out;
}

void mark_active_faces(EmbeddedGraph& w, const std::set<int>& bag) {
    auto anch = anchors(w, bag);
    int alive = static_cast<int>(w.alive_vertices().size());
    for (auto& fc : w.faces) {
        if (!fc.alive) continue;
        std::set<int> on_face;
        for (const auto& wk : fc.walks) {
            if (wk.is_isolated())
                on_face.insert(wk.isolated);
            else
                for (int d : wk.darts) on_face.insert(w.tail(d));
        }
        int cnt = 0;
        for (int v : on_face)
            if (anch.count(v)) ++cnt;
        fc.active = cnt >= 2 || (cnt == 1 && alive == 1 && on_face.size() == 1);
    }
}

void sketch_cleanup(EmbeddedGraph& g, const std::set<int>& bag) {
    bool changed = true;
    while (changed) {
        changed = false;
        // edges with no active side
        std::vector<char> on_active(g.dart_count(), 0);
        for (const auto& fc : g.faces) {
            if (!fc.alive || !fc.active) continue;
            for (const auto& w : fc.walks)
                for (int d : w.darts) on_active[d] = 1;
        }
        for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
            if (!g.edges[e].alive) continue;
            if (!on_active[2 * e] && !on_active[2 * e + 1]) {
                g.delete_edge(e);
                changed = true;
                break;
            }
        }
        if (changed) continue;
        // stranded degree-0 vertices on non-active faces
        for (int v = 0; v < static_cast<int>(g.verts.size()); ++v) {
            if (!g.verts[v].alive || g.degree(v) != 0) continue;
            int f = g.face_of_isolated(v);
            if (f == -1 || g.faces[f].active) continue;
            auto& ws = g.faces[f].walks;
            for (size_t i = 0; i < ws.size(); ++i)
                if (ws[i].is_isolated() && ws[i].isolated == v) {
                    ws.erase(ws.begin() + i);
                    break;
                }
            if (ws.empty()) g.faces[f].alive = false;
            if (g.verts[v].label >= 0 && bag.count(g.verts[v].label)) {
                g.limbo.insert(
                    std::upper_bound(g.limbo.begin(), g.limbo.end(), g.verts[v].label),
                    g.verts[v].label);
            }
            g.verts[v].alive = false;
            changed = true;
            break;
        }
        if (changed) continue;
        // duplicate non-extensible boundaries
        auto before = g.homotopic_pairs().size();
        g.dedup_nonextensible_boundaries();
        if (g.homotopic_pairs().size() != before) changed = true;
    }
    // dead faces that lost all walks
    for (auto& fc : g.faces)
        if (fc.alive && fc.walks.empty()) fc.alive = false;
}

SketchResult compute_sketch(const EmbeddedGraph& witness, const std::set<int>& bag,
                            bool hole_free, bool with_maps) {
    EmbeddedGraph w = witness;
    if (hole_free) {
        w.track_counters = true;
        w.counter.assign(w.dart_count(), 1);
    } else {
        w.track_counters = false;
        w.counter.clear();
    }
    if (with_maps) w.enable_provenance();
    int witness_faces = static_cast<int>(w.faces.size());

    mark_active_faces(w, bag);
    auto anch = anchors(w, bag);
    std::vector<int> to_remove;
    for (int v = 0; v < static_cast<int>(w.verts.size()); ++v)
        if (w.verts[v].alive && !anch.count(v)) to_remove.push_back(v);
    for (int v : to_remove) w.remove_vertex_shortcut(v);
    sketch_cleanup(w, bag);

    SketchResult out;
    std::vector<int> vmap, fmap;
    out.sketch = w.compacted(&vmap, &fmap);
    out.sketch.validate(true);
    out.key = out.sketch.canonical_key();
    if (with_maps) {
        out.vertex_to_witness.assign(out.sketch.verts.size(), -1);
        for (int v = 0; v < static_cast<int>(vmap.size()); ++v)
            if (vmap[v] != -1) out.vertex_to_witness[vmap[v]] = v;
        out.face_to_witness_face.assign(out.sketch.faces.size(), -1);
        for (int f = 0; f < static_cast<int>(fmap.size()); ++f)
            if (fmap[f] != -1 && f < witness_faces) out.face_to_witness_face[fmap[f]] = f;
        out.dart_first_witness = out.sketch.prov_first;
        out.dart_last_witness = out.sketch.prov_last;
        out.sketch.prov_first.clear();
        out.sketch.prov_last.clear();
    }
    return out;
}

EmbeddedGraph dedup_nonextensible(const EmbeddedGraph& sketch) {
    EmbeddedGraph g = sketch;
    g.dedup_nonextensible_boundaries();
    std::set<int> bag;
    for (const auto& v : g.verts)
        if (v.alive && v.label >= 0) bag.insert(v.label);
    for (int l : g.limbo) bag.insert(l);
    sketch_cleanup(g, bag);
    return g.compacted();
}

}  // namespace mapwit
