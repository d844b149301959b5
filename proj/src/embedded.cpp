#include "mapwit/embedded.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mapwit {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw std::logic_error("embedded: " + msg); }

}  // namespace

int EmbeddedGraph::add_vertex(int label) {
    verts.push_back(Vertex{label, true});
    rot.emplace_back();
    return static_cast<int>(verts.size()) - 1;
}

int EmbeddedGraph::add_edge(int u, int v) {
    edges.push_back(Edge{u, v, true});
    if (track_counters) {
        counter.push_back(1);
        counter.push_back(1);
    }
    if (provenance_on()) {
        int d = 2 * (static_cast<int>(edges.size()) - 1);
        prov_first.push_back(d);
        prov_first.push_back(d + 1);
        prov_last.push_back(d);
        prov_last.push_back(d + 1);
    }
    return static_cast<int>(edges.size()) - 1;
}

void EmbeddedGraph::enable_provenance() {
    prov_first.resize(dart_count());
    prov_last.resize(dart_count());
    for (int d = 0; d < dart_count(); ++d) prov_first[d] = prov_last[d] = d;
}

int EmbeddedGraph::sigma_next(int d) const {
    const auto& r = rot[tail(d)];
    for (size_t i = 0; i < r.size(); ++i)
        if (r[i] == d) return r[(i + 1) % r.size()];
    bad("dart missing from rotation");
}

std::vector<int> EmbeddedGraph::alive_vertices() const {
    std::vector<int> out;
    for (int v = 0; v < static_cast<int>(verts.size()); ++v)
        if (verts[v].alive) out.push_back(v);
    return out;
}

std::vector<int> EmbeddedGraph::component_ids() const {
    std::vector<int> comp(verts.size(), -1);
    int next = 0;
    for (int s = 0; s < static_cast<int>(verts.size()); ++s) {
        if (!verts[s].alive || comp[s] != -1) continue;
        comp[s] = next;
        std::vector<int> stack{s};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int d : rot[v]) {
                int w = head(d);
                if (comp[w] == -1) {
                    comp[w] = next;
                    stack.push_back(w);
                }
            }
        }
        ++next;
    }
    return comp;
}

int EmbeddedGraph::vertex_of_label(int label) const {
    for (int v = 0; v < static_cast<int>(verts.size()); ++v)
        if (verts[v].alive && verts[v].label == label) return v;
    return -1;
}

int EmbeddedGraph::face_of_walk_dart(int d) const {
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
        if (!faces[f].alive) continue;
        for (const auto& w : faces[f].walks)
            for (int x : w.darts)
                if (x == d) return f;
    }
    return -1;
}

int EmbeddedGraph::face_of_isolated(int v) const {
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
        if (!faces[f].alive) continue;
        for (const auto& w : faces[f].walks)
            if (w.is_isolated() && w.isolated == v) return f;
    }
    return -1;
}

std::set<int> EmbeddedGraph::vertices_on_face(int f) const {
    std::set<int> vs;
    for (const auto& w : faces[f].walks) {
        if (w.is_isolated())
            vs.insert(w.isolated);
        else
            for (int d : w.darts) vs.insert(tail(d));
    }
    return vs;
}

int EmbeddedGraph::distinct_vertices_on_face(int f) const {
    return static_cast<int>(vertices_on_face(f).size());
}

void EmbeddedGraph::clear_active_marks() {
    for (auto& fc : faces) {
        fc.active = false;
        fc.lost_loop = false;
        fc.lost_walk = false;
    }
}

std::vector<std::vector<int>> trace_face_cycles(const EmbeddedGraph& g) {
    std::vector<char> seen(g.dart_count(), 0);
    std::vector<std::vector<int>> cycles;
    for (int d = 0; d < g.dart_count(); ++d) {
        if (!g.dart_alive(d) || seen[d]) continue;
        std::vector<int> cyc;
        int x = d;
        do {
            seen[x] = 1;
            cyc.push_back(x);
            x = g.phi(x);
        } while (x != d);
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

void EmbeddedGraph::validate(bool sketch_mode) const {
    // rotations partition the alive darts
    std::vector<int> seen_rot(dart_count(), 0);
    for (int v = 0; v < static_cast<int>(verts.size()); ++v) {
        if (!verts[v].alive) {
            if (!rot[v].empty()) bad("dead vertex has rotation");
            continue;
        }
        for (int d : rot[v]) {
            if (!dart_alive(d)) bad("dead dart in rotation");
            if (tail(d) != v) bad("rotation dart tail mismatch");
            seen_rot[d]++;
        }
    }
    int alive_darts = 0;
    for (int d = 0; d < dart_count(); ++d) {
        if (!dart_alive(d)) continue;
        ++alive_darts;
        const auto& e = edges[d >> 1];
        if (e.u == e.v) bad("self-loop edge");
        if (!verts[e.u].alive || !verts[e.v].alive) bad("edge at dead vertex");
        if (seen_rot[d] != 1) bad("dart not exactly once in rotations");
    }

    // walks cover alive darts exactly once and are phi-cycles
    std::vector<int> seen_walk(dart_count(), 0);
    std::vector<int> iso_seen(verts.size(), 0);
    for (const auto& fc : faces) {
        if (!fc.alive) continue;
        if (fc.walks.empty()) bad("alive face with no walks");
        for (const auto& w : fc.walks) {
            if (w.is_isolated()) {
                int v = w.isolated;
                if (v < 0 || !verts[v].alive) bad("isolated walk at dead vertex");
                if (degree(v) != 0) bad("isolated walk at vertex with edges");
                iso_seen[v]++;
            } else {
                for (size_t i = 0; i < w.darts.size(); ++i) {
                    int d = w.darts[i];
                    if (!dart_alive(d)) bad("dead dart in walk");
                    seen_walk[d]++;
                    int nd = w.darts[(i + 1) % w.darts.size()];
                    if (phi(d) != nd) bad("walk is not a phi-cycle");
                }
            }
        }
    }
    for (int d = 0; d < dart_count(); ++d)
        if (dart_alive(d) && seen_walk[d] != 1) bad("dart not exactly once in walks");
    for (int v = 0; v < static_cast<int>(verts.size()); ++v) {
        if (!verts[v].alive) continue;
        int want = degree(v) == 0 ? 1 : 0;
        if (iso_seen[v] != want) bad("isolated-walk count wrong");
    }

    // Euler per component; position incidence forms a tree
    auto comp = component_ids();
    int ncomp = 0;
    for (int c : comp) ncomp = std::max(ncomp, c + 1);
    std::vector<int> cv(ncomp, 0), ce(ncomp, 0), cw(ncomp, 0);
    for (int v = 0; v < static_cast<int>(verts.size()); ++v)
        if (verts[v].alive) cv[comp[v]]++;
    for (const auto& e : edges)
        if (e.alive) ce[comp[e.u]]++;
    int nfaces = 0;
    std::vector<std::pair<int, int>> incidence;  // (component, face idx)
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
        if (!faces[f].alive) continue;
        ++nfaces;
        std::set<int> comps_here;
        for (const auto& w : faces[f].walks) {
            int c = w.is_isolated() ? comp[w.isolated] : comp[tail(w.darts[0])];
            cw[c]++;
            if (!comps_here.insert(c).second) bad("face holds two walks of one component");
            incidence.push_back({c, f});
        }
    }
    for (int c = 0; c < ncomp; ++c)
        if (cv[c] - ce[c] + cw[c] != 2) bad("Euler formula fails for a component");
    if (ncomp > 0) {
        // bipartite (component, face) incidence must be a tree
        if (static_cast<int>(incidence.size()) != ncomp + nfaces - 1)
            bad("position incidence is not a tree (edge count)");
        std::vector<std::vector<int>> adjc(ncomp), adjf(faces.size());
        for (auto [c, f] : incidence) {
            adjc[c].push_back(f);
            adjf[f].push_back(c);
        }
        std::vector<char> vc(ncomp, 0);
        std::vector<char> vf(faces.size(), 0);
        std::vector<std::pair<char, int>> stack{{0, 0}};  // (is_face, idx)
        vc[0] = 1;
        int reached = 1;
        while (!stack.empty()) {
            auto [is_face, i] = stack.back();
            stack.pop_back();
            if (is_face) {
                for (int c : adjf[i])
                    if (!vc[c]) {
                        vc[c] = 1;
                        ++reached;
                        stack.push_back({0, c});
                    }
            } else {
                for (int f : adjc[i])
                    if (!vf[f]) {
                        vf[f] = 1;
                        ++reached;
                        stack.push_back({1, f});
                    }
            }
        }
        if (reached != ncomp + nfaces) bad("position incidence is not connected");
    }

    // labels
    std::set<int> labels;
    for (const auto& v : verts)
        if (v.alive && v.label >= 0)
            if (!labels.insert(v.label).second) bad("duplicate real label");
    for (size_t i = 0; i < limbo.size(); ++i) {
        if (i > 0 && limbo[i - 1] >= limbo[i]) bad("limbo not sorted-unique");
        if (labels.count(limbo[i])) bad("limbo label also present in graph");
    }

    if (!sketch_mode) return;

    // sketch invariants
    std::vector<char> on_active(dart_count(), 0);
    for (const auto& fc : faces) {
        if (!fc.alive || !fc.active) continue;
        for (const auto& w : fc.walks)
            for (int d : w.darts) on_active[d] = 1;
    }
    for (int e = 0; e < static_cast<int>(edges.size()); ++e)
        if (edges[e].alive && !on_active[2 * e] && !on_active[2 * e + 1])
            bad("edge with no active side");
    int alive_vs = static_cast<int>(alive_vertices().size());
    for (const auto& fc : faces) {
        if (!fc.alive || !fc.active) continue;
        std::set<int> vs;
        for (const auto& w : fc.walks) {
            if (w.is_isolated())
                vs.insert(w.isolated);
            else
                for (int d : w.darts) vs.insert(tail(d));
        }
        if (static_cast<int>(vs.size()) < 2 && alive_vs != 1)
            bad("active face with fewer than two vertices");
    }
    if (track_counters) {
        for (int d = 0; d < dart_count(); ++d) {
            if (!dart_alive(d)) continue;
            if (counter[d] < 1 || counter[d] > 5) bad("counter out of range");
            bool inter = verts[tail(d)].label < 0 || verts[head(d)].label < 0;
            if (inter && on_active[d] && counter[d] != 1)
                bad("intersection-incident dart with counter != 1");
        }
    }
}

bool EmbeddedGraph::coherent(bool sketch_mode) const noexcept {
    try {
        validate(sketch_mode);
        return true;
    } catch (...) {
        return false;
    }
}

EmbeddedGraph EmbeddedGraph::mirrored() const {
    EmbeddedGraph m = *this;
    for (auto& r : m.rot) std::reverse(r.begin(), r.end());
    for (auto& fc : m.faces) {
        if (!fc.alive) continue;
        for (auto& w : fc.walks) {
            if (w.is_isolated()) continue;
            std::vector<int> nd;
            nd.reserve(w.darts.size());
            for (auto it = w.darts.rbegin(); it != w.darts.rend(); ++it) nd.push_back(alpha(*it));
            w.darts = std::move(nd);
        }
    }
    if (track_counters)
        for (int d = 0; d < dart_count(); ++d) m.counter[d] = counter[alpha(d)];
    return m;
}

EmbeddedGraph EmbeddedGraph::compacted(std::vector<int>* vmap_out,
                                       std::vector<int>* fmap_out) const {
    EmbeddedGraph g;
    g.track_counters = track_counters;
    g.limbo = limbo;
    std::vector<int> vmap(verts.size(), -1), emap(edges.size(), -1);
    for (int v = 0; v < static_cast<int>(verts.size()); ++v)
        if (verts[v].alive) vmap[v] = g.add_vertex(verts[v].label);
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        if (!edges[e].alive) continue;
        emap[e] = static_cast<int>(g.edges.size());
        g.edges.push_back(Edge{vmap[edges[e].u], vmap[edges[e].v], true});
    }
    auto dmap = [&](int d) { return 2 * emap[d >> 1] + (d & 1); };
    if (track_counters) {
        g.counter.assign(2 * g.edges.size(), 1);
        for (int e = 0; e < static_cast<int>(edges.size()); ++e)
            if (emap[e] != -1) {
                g.counter[2 * emap[e]] = counter[2 * e];
                g.counter[2 * emap[e] + 1] = counter[2 * e + 1];
            }
    }
    if (provenance_on()) {
        g.prov_first.assign(2 * g.edges.size(), -1);
        g.prov_last.assign(2 * g.edges.size(), -1);
        for (int e = 0; e < static_cast<int>(edges.size()); ++e)
            if (emap[e] != -1)
                for (int b : {0, 1}) {
                    g.prov_first[2 * emap[e] + b] = prov_first[2 * e + b];
                    g.prov_last[2 * emap[e] + b] = prov_last[2 * e + b];
                }
    }
    for (int v = 0; v < static_cast<int>(verts.size()); ++v) {
        if (!verts[v].alive) continue;
        for (int d : rot[v]) g.rot[vmap[v]].push_back(dmap(d));
    }
    std::vector<int> fmap(faces.size(), -1);
    for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi) {
        const auto& fc = faces[fi];
        if (!fc.alive) continue;
        Face nf;
        nf.active = fc.active;
        for (const auto& w : fc.walks) {
            Walk nw;
            if (w.is_isolated())
                nw.isolated = vmap[w.isolated];
            else
                for (int d : w.darts) nw.darts.push_back(dmap(d));
            nf.walks.push_back(std::move(nw));
        }
        fmap[fi] = static_cast<int>(g.faces.size());
        g.faces.push_back(std::move(nf));
    }
    if (vmap_out) *vmap_out = vmap;
    if (fmap_out) *fmap_out = fmap;
    return g;
}

bool EmbeddedGraph::is_connected_embedded() const {
    auto comp = component_ids();
    int mx = -1;
    for (int c : comp) mx = std::max(mx, c);
    return mx <= 0;
}

bool EmbeddedGraph::is_biconnected_graph() const {
    // simple articulation test via component counting after vertex removal
    auto alive = alive_vertices();
    if (!is_connected_embedded()) return false;
    if (alive.size() <= 2) return true;
    for (int cut : alive) {
        std::set<int> first;
        int start = -1;
        for (int v : alive)
            if (v != cut) {
                start = v;
                break;
            }
        std::vector<int> stack{start};
        first.insert(start);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int d : rot[v]) {
                int w = head(d);
                if (w == cut) continue;
                if (first.insert(w).second) stack.push_back(w);
            }
        }
        if (first.size() != alive.size() - 1) return false;
    }
    return true;
}

bool EmbeddedGraph::is_quadrangulation() const {
    if (!is_connected_embedded()) return false;
    for (const auto& fc : faces) {
        if (!fc.alive) continue;
        if (fc.walks.size() != 1) return false;
        if (fc.walks[0].is_isolated()) return false;
        if (fc.walks[0].darts.size() != 4) return false;
    }
    return true;
}

std::vector<std::pair<int, int>> EmbeddedGraph::homotopic_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& fc : faces) {
        if (!fc.alive) continue;
        for (const auto& w : fc.walks) {
            if (w.darts.size() != 2) continue;
            int e1 = w.darts[0] >> 1, e2 = w.darts[1] >> 1;
            if (e1 == e2) continue;  // single edge traversed twice, not a digon
            out.push_back({std::min(e1, e2), std::max(e1, e2)});
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// --- mutation primitives -------------------------------------------------

namespace {

struct WalkPos {
    int face = -1, walk = -1, pos = -1;
};

WalkPos locate_dart(const EmbeddedGraph& g, int d) {
    for (int f = 0; f < static_cast<int>(g.faces.size()); ++f) {
        if (!g.faces[f].alive) continue;
        const auto& ws = g.faces[f].walks;
        for (int wi = 0; wi < static_cast<int>(ws.size()); ++wi)
            for (int p = 0; p < static_cast<int>(ws[wi].darts.size()); ++p)
                if (ws[wi].darts[p] == d) return {f, wi, p};
    }
    bad("dart not found in any walk");
}

std::vector<int> rotate_to_front(const std::vector<int>& darts, int pos) {
    std::vector<int> out;
    out.reserve(darts.size());
    for (size_t i = 0; i < darts.size(); ++i) out.push_back(darts[(pos + i) % darts.size()]);
    return out;
}

void erase_from_rotation(std::vector<int>& r, int d) {
    auto it = std::find(r.begin(), r.end(), d);
    if (it == r.end()) bad("dart missing from rotation on erase");
    r.erase(it);
}

}  // namespace

void EmbeddedGraph::delete_edge(int e) {
    int d0 = 2 * e, d1 = 2 * e + 1;
    WalkPos a = locate_dart(*this, d0);
    WalkPos b = locate_dart(*this, d1);
    erase_from_rotation(rot[tail(d0)], d0);
    erase_from_rotation(rot[tail(d1)], d1);
    edges[e].alive = false;

    if (a.face == b.face && a.walk == b.walk) {
        // bridge: walk splits in place, face unchanged
        auto& fc = faces[a.face];
        std::vector<int> w = rotate_to_front(fc.walks[a.walk].darts, a.pos);
        // w[0] == d0; find d1
        size_t j = 0;
        for (size_t i = 0; i < w.size(); ++i)
            if (w[i] == d1) j = i;
        std::vector<int> q(w.begin() + 1, w.begin() + j);
        std::vector<int> r(w.begin() + j + 1, w.end());
        fc.walks.erase(fc.walks.begin() + a.walk);
        auto push_piece = [&](std::vector<int>&& piece, int lone_vertex) {
            Walk nw;
            if (piece.empty())
                nw.isolated = lone_vertex;
            else
                nw.darts = std::move(piece);
            fc.walks.push_back(std::move(nw));
        };
        push_piece(std::move(q), head(d0));
        push_piece(std::move(r), head(d1));
    } else {
        // merge the two walks (and faces when distinct)
        auto wa = rotate_to_front(faces[a.face].walks[a.walk].darts, a.pos);
        auto wb = rotate_to_front(faces[b.face].walks[b.walk].darts, b.pos);
        std::vector<int> merged(wa.begin() + 1, wa.end());
        merged.insert(merged.end(), wb.begin() + 1, wb.end());
        Walk nw;
        if (merged.empty())
            nw.isolated = tail(d0);
        else
            nw.darts = std::move(merged);
        if (a.face == b.face) {
            auto& fc = faces[a.face];
            int hi = std::max(a.walk, b.walk), lo = std::min(a.walk, b.walk);
            fc.walks.erase(fc.walks.begin() + hi);
            fc.walks.erase(fc.walks.begin() + lo);
            fc.walks.push_back(std::move(nw));
        } else {
            auto& fa = faces[a.face];
            auto& fb = faces[b.face];
            fa.walks.erase(fa.walks.begin() + a.walk);
            fb.walks.erase(fb.walks.begin() + b.walk);
            for (auto& w : fb.walks) fa.walks.push_back(std::move(w));
            fa.walks.push_back(std::move(nw));
            fa.active = fa.active || fb.active;
            fa.lost_loop = fa.lost_loop || fb.lost_loop;
            fa.lost_walk = fa.lost_walk || fb.lost_walk;
            fb.alive = false;
            fb.walks.clear();
        }
    }
    // a merged walk may have collapsed to an isolated vertex that still has
    // edges elsewhere; that cannot happen (checked by validate), but an empty
    // walk for a vertex of positive degree would be malformed.
}

void EmbeddedGraph::delete_vertex_with_edges(int v) {
    while (!rot[v].empty()) delete_edge(rot[v].back() >> 1);
    int f = face_of_isolated(v);
    if (f != -1) {
        auto& ws = faces[f].walks;
        for (size_t i = 0; i < ws.size(); ++i)
            if (ws[i].is_isolated() && ws[i].isolated == v) {
                ws.erase(ws.begin() + i);
                break;
            }
        if (ws.empty()) faces[f].alive = false;
    }
    verts[v].alive = false;
}

void EmbeddedGraph::remove_vertex_shortcut(int y) {
    if (degree(y) == 0) {
        int f = face_of_isolated(y);
        if (f == -1) bad("isolated vertex without walk");
        auto& ws = faces[f].walks;
        for (size_t i = 0; i < ws.size(); ++i)
            if (ws[i].is_isolated() && ws[i].isolated == y) {
                ws.erase(ws.begin() + i);
                break;
            }
        faces[f].lost_walk = true;
        if (ws.empty()) faces[f].alive = false;
        verts[y].alive = false;
        return;
    }

    // occurrences of y across all walks: (face, walk, pos) with tail(darts[pos]) == y
    struct Occ {
        int in = -1, out = -1;   // darts into and out of y
        int arc_dart = -1;       // replacement dart (tail(in) -> head(out))
    };
    std::vector<Occ> occs;
    std::map<int, int> occ_by_out;  // out-dart (at y) -> occ index
    std::map<int, int> occ_by_in;   // in-dart (head y) -> occ index
    for (auto& fc : faces) {
        if (!fc.alive) continue;
        for (auto& w : fc.walks) {
            for (size_t p = 0; p < w.darts.size(); ++p) {
                if (tail(w.darts[p]) != y) continue;
                Occ o;
                o.in = w.darts[(p + w.darts.size() - 1) % w.darts.size()];
                o.out = w.darts[p];
                occ_by_out[o.out] = static_cast<int>(occs.size());
                occ_by_in[o.in] = static_cast<int>(occs.size());
                occs.push_back(o);
            }
        }
    }
    if (static_cast<int>(occs.size()) != degree(y)) bad("occurrence count != degree");

    // create one arc edge per occurrence
    for (auto& o : occs) {
        int u = tail(o.in), w = head(o.out);
        int e = add_edge(u, w);
        o.arc_dart = 2 * e;  // u -> w
        if (track_counters) {
            uint8_t c = sat_add(counter[o.in], counter[o.out]);
            counter[2 * e] = c;
            counter[2 * e + 1] = c;
        }
        if (provenance_on()) {
            prov_first[2 * e] = prov_first[o.in];
            prov_last[2 * e] = prov_last[o.out];
            prov_first[2 * e + 1] = prov_first[alpha(o.out)];
            prov_last[2 * e + 1] = prov_last[alpha(o.in)];
        }
    }

    // rotations: each old slot u->y is replaced by [arc of the occurrence that
    // enters through it, partner of the occurrence that leaves through it]
    for (auto& o : occs) {
        int slot = o.in;  // out-dart at u pointing to y
        int u = tail(slot);
        int occ_out_idx = occ_by_out.at(alpha(slot));
        std::vector<int>& r = rot[u];
        auto it = std::find(r.begin(), r.end(), slot);
        if (it == r.end()) bad("slot dart missing");
        size_t idx = it - r.begin();
        r[idx] = o.arc_dart;
        r.insert(r.begin() + idx + 1, alpha(occs[occ_out_idx].arc_dart));
    }
    for (auto& o : occs) {
        edges[o.in >> 1].alive = false;
        edges[o.out >> 1].alive = false;
    }
    rot[y].clear();
    verts[y].alive = false;

    // splice walks in place
    for (auto& fc : faces) {
        if (!fc.alive) continue;
        for (auto& w : fc.walks) {
            if (w.is_isolated()) continue;
            std::vector<int> nd;
            for (size_t p = 0; p < w.darts.size(); ++p) {
                int d = w.darts[p];
                if (tail(d) == y) continue;  // drop out-dart at y
                if (head(d) == y)
                    nd.push_back(occs[occ_by_in.at(d)].arc_dart);
                else
                    nd.push_back(d);
            }
            w.darts = std::move(nd);
        }
    }

    // sliver walks: chain partners; next occurrence is the one leaving through
    // the reversal of this occurrence's in-dart
    std::vector<char> used(occs.size(), 0);
    for (size_t s = 0; s < occs.size(); ++s) {
        if (used[s]) continue;
        Face sliver;
        sliver.active = false;
        Walk w;
        size_t i = s;
        while (!used[i]) {
            used[i] = 1;
            w.darts.push_back(alpha(occs[i].arc_dart));
            i = occ_by_out.at(alpha(occs[i].in));
        }
        sliver.walks.push_back(std::move(w));
        faces.push_back(std::move(sliver));
    }

    // drop self-loop arcs (collapsed pendant lobes), flag counter loss
    for (auto& o : occs) {
        int e = o.arc_dart >> 1;
        if (!edges[e].alive) continue;
        if (edges[e].u == edges[e].v) {
            WalkPos a = locate_dart(*this, 2 * e);
            delete_edge(e);
            // after merging, the surviving face is the one that held dart 2e
            faces[a.face].lost_loop = true;
        }
    }
}

void EmbeddedGraph::dedup_nonextensible_boundaries() {
    // Among active two-dart parallel boundaries with the same endpoints (and
    // counter signature when tracking), only one representative is kept.
    // Dissolving a duplicate deletes one of its edges whose other side is a
    // non-active face and deadens the merged region; a leftover edge with no
    // active side is swept by the caller's cleanup.
    while (true) {
        struct Digon {
            int face, e1, e2;
        };
        std::map<std::tuple<int, int, int, int>, std::vector<Digon>> groups;
        for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
            const auto& fc = faces[f];
            if (!fc.alive || !fc.active) continue;
            if (fc.walks.size() != 1 || fc.walks[0].darts.size() != 2) continue;
            int da = fc.walks[0].darts[0], db = fc.walks[0].darts[1];
            if ((da >> 1) == (db >> 1)) continue;  // one edge traversed twice
            int u = tail(da), v = head(da);
            int c1 = 0, c2 = 0;
            if (track_counters) {
                c1 = counter[da];
                c2 = counter[db];
                if (c1 > c2) std::swap(c1, c2);
            }
            groups[{std::min(u, v), std::max(u, v), c1, c2}].push_back({f, da >> 1, db >> 1});
        }
        bool changed = false;
        for (auto& [key, digons] : groups) {
            if (digons.size() < 2 || changed) continue;
            // try to dissolve members after the first: need an edge whose
            // other side is non-active
            for (size_t di = digons.size(); di-- > 1 && !changed;) {
                const Digon& drop = digons[di];
                for (int e : {drop.e1, drop.e2}) {
                    WalkPos p0 = locate_dart(*this, 2 * e);
                    WalkPos p1 = locate_dart(*this, 2 * e + 1);
                    int other = p0.face == drop.face ? p1.face : p0.face;
                    if (faces[other].active) continue;
                    int merged = p0.face;  // delete_edge keeps dart-2e side
                    delete_edge(e);
                    if (faces[merged].alive) faces[merged].active = false;
                    changed = true;
                    break;
                }
            }
        }
        if (!changed) break;
    }
}

// --- canonical key --------------------------------------------------------

namespace {

struct CompCanon {
    std::string structure;
    std::vector<std::vector<int>> dart_ids;  // per argmin start: dart -> canonical id
    std::vector<std::vector<int>> vert_ids;  // per argmin start: vertex -> canonical id
    int nverts = 0;
};

// canonical traversal of one component from a start dart (or isolated vertex)
void encode_component(const EmbeddedGraph& g, int start_dart, int iso_vertex, std::string& out,
                      std::vector<int>& dart_id, std::vector<int>& vert_id, int dart_base,
                      int vert_base) {
    std::ostringstream os;
    if (iso_vertex >= 0) {
        vert_id[iso_vertex] = vert_base;
        os << "v" << g.verts[iso_vertex].label << ";";
        out = os.str();
        return;
    }
    int next_v = vert_base, next_d = dart_base;
    std::vector<int> queue_entry;  // entry dart per discovered vertex, aligned with order
    std::vector<int> order;
    int root = g.tail(start_dart);
    vert_id[root] = next_v++;
    order.push_back(root);
    queue_entry.push_back(start_dart);
    for (size_t qi = 0; qi < order.size(); ++qi) {
        int v = order[qi];
        int first = qi == 0 ? start_dart : EmbeddedGraph::alpha(queue_entry[qi]);
        const auto& r = g.rot[v];
        size_t pos = std::find(r.begin(), r.end(), first) - r.begin();
        int lbl = g.verts[v].label;
        os << (lbl >= 0 ? "r" : "i");
        if (lbl >= 0) os << lbl;
        os << "(";
        for (size_t k = 0; k < r.size(); ++k) {
            int d = r[(pos + k) % r.size()];
            dart_id[d] = next_d++;
            int h = g.head(d);
            if (vert_id[h] == -1) {
                vert_id[h] = next_v++;
                order.push_back(h);
                queue_entry.push_back(d);
                os << "n";
            }
            os << vert_id[h] - 0 << ",";
        }
        os << ")";
    }
    out = os.str();
}

}  // namespace

std::string EmbeddedGraph::canonical_key() const {
    EmbeddedGraph base = compacted();
    std::string best;
    bool first_key = true;
    for (int orient = 0; orient < 2; ++orient) {
        EmbeddedGraph g = orient ? base.mirrored() : base;
        auto comp = g.component_ids();
        int ncomp = 0;
        for (int c : comp) ncomp = std::max(ncomp, c + 1);
        // order components by minimum real label (components always carry one)
        std::vector<int> min_label(ncomp, INT32_MAX);
        std::vector<int> comp_sizes(ncomp, 0);
        for (int v = 0; v < static_cast<int>(g.verts.size()); ++v) {
            if (!g.verts[v].alive) continue;
            comp_sizes[comp[v]]++;
            if (g.verts[v].label >= 0) min_label[comp[v]] = std::min(min_label[comp[v]], g.verts[v].label);
        }
        std::vector<int> comp_order(ncomp);
        std::iota(comp_order.begin(), comp_order.end(), 0);
        std::sort(comp_order.begin(), comp_order.end(),
                  [&](int a, int b) { return min_label[a] < min_label[b]; });

        // per component: minimal structure string over candidate starts
        std::vector<CompCanon> canon(ncomp);
        int vert_base = 0, dart_base = 0;
        std::vector<int> comp_vert_base(ncomp), comp_dart_base(ncomp);
        for (int ci : comp_order) {
            comp_vert_base[ci] = vert_base;
            comp_dart_base[ci] = dart_base;
            vert_base += comp_sizes[ci];
            int darts_here = 0;
            for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
                if (g.edges[e].alive && comp[g.edges[e].u] == ci) darts_here += 2;
            dart_base += darts_here;
        }
        for (int ci = 0; ci < ncomp; ++ci) {
            std::vector<int> starts;  // darts; -1-v means isolated vertex v
            for (int v = 0; v < static_cast<int>(g.verts.size()); ++v) {
                if (!g.verts[v].alive || comp[v] != ci || g.verts[v].label < 0) continue;
                if (g.degree(v) == 0)
                    starts.push_back(-1 - v);
                else
                    for (int d : g.rot[v]) starts.push_back(d);
            }
            if (starts.empty()) bad("component without a real vertex");
            CompCanon& cc = canon[ci];
            cc.nverts = comp_sizes[ci];
            for (int s : starts) {
                std::string str;
                std::vector<int> did(g.dart_count(), -1), vid(g.verts.size(), -1);
                if (s < 0)
                    encode_component(g, -1, -1 - s, str, did, vid, comp_dart_base[ci],
                                     comp_vert_base[ci]);
                else
                    encode_component(g, s, -1, str, did, vid, comp_dart_base[ci],
                                     comp_vert_base[ci]);
                if (cc.structure.empty() || str < cc.structure) {
                    cc.structure = str;
                    cc.dart_ids.clear();
                    cc.vert_ids.clear();
                    cc.dart_ids.push_back(did);
                    cc.vert_ids.push_back(vid);
                } else if (str == cc.structure) {
                    cc.dart_ids.push_back(did);
                    cc.vert_ids.push_back(vid);
                }
            }
        }

        // assemble: structures in component order, then faces over every
        // combination of argmin starts (ties are rare and tiny)
        std::string structure_part;
        for (int ci : comp_order) structure_part += canon[ci].structure + "|";

        std::vector<size_t> choice(ncomp, 0);
        std::string best_faces;
        bool first_faces = true;
        while (true) {
            std::vector<int> did(g.dart_count(), -1), vid(g.verts.size(), -1);
            for (int ci = 0; ci < ncomp; ++ci) {
                const auto& dd = canon[ci].dart_ids[choice[ci]];
                const auto& vv = canon[ci].vert_ids[choice[ci]];
                for (int d = 0; d < g.dart_count(); ++d)
                    if (dd[d] != -1) did[d] = dd[d];
                for (int v = 0; v < static_cast<int>(g.verts.size()); ++v)
                    if (vv[v] != -1) vid[v] = vv[v];
            }
            std::vector<std::string> face_strs;
            for (const auto& fc : g.faces) {
                if (!fc.alive) continue;
                std::vector<std::string> walk_strs;
                for (const auto& w : fc.walks) {
                    std::ostringstream ws;
                    if (w.is_isolated()) {
                        ws << "V" << vid[w.isolated];
                    } else {
                        // minimal rotation of the dart-id sequence
                        size_t n = w.darts.size();
                        std::vector<std::string> tokens(n);
                        for (size_t i = 0; i < n; ++i) {
                            std::ostringstream t;
                            t << did[w.darts[i]];
                            if (g.track_counters && fc.active)
                                t << "c" << int(g.counter[w.darts[i]]);
                            tokens[i] = t.str();
                        }
                        size_t bestrot = 0;
                        auto cmp_rot = [&](size_t a, size_t b) {
                            for (size_t i = 0; i < n; ++i) {
                                const auto& x = tokens[(a + i) % n];
                                const auto& y = tokens[(b + i) % n];
                                if (x != y) return x < y;
                            }
                            return false;
                        };
                        for (size_t i = 1; i < n; ++i)
                            if (cmp_rot(i, bestrot)) bestrot = i;
                        for (size_t i = 0; i < n; ++i) ws << tokens[(bestrot + i) % n] << ".";
                    }
                    walk_strs.push_back(ws.str());
                }
                std::sort(walk_strs.begin(), walk_strs.end());
                std::string fs = fc.active ? "A[" : "N[";
                for (auto& s : walk_strs) fs += s + "/";
                fs += "]";
                face_strs.push_back(fs);
            }
            std::sort(face_strs.begin(), face_strs.end());
            std::string fp;
            for (auto& s : face_strs) fp += s;
            if (first_faces || fp < best_faces) {
                best_faces = fp;
                first_faces = false;
            }
            // next combination
            int ci = 0;
            while (ci < ncomp) {
                if (++choice[ci] < canon[ci].dart_ids.size()) break;
                choice[ci] = 0;
                ++ci;
            }
            if (ci == ncomp) break;
        }

        std::string key = structure_part + "#" + best_faces + "#L";
        for (int l : g.limbo) key += std::to_string(l) + ",";
        if (first_key || key < best) {
            best = key;
            first_key = false;
        }
    }
    return best;
}

EmbeddedGraph single_vertex_sketch(int label, bool track_counters) {
    EmbeddedGraph g;
    g.track_counters = track_counters;
    int v = g.add_vertex(label);
    EmbeddedGraph::Face f;
    f.active = true;
    EmbeddedGraph::Walk w;
    w.isolated = v;
    f.walks.push_back(std::move(w));
    g.faces.push_back(std::move(f));
    return g;
}

}  // namespace mapwit
