#include "mapwit/dp.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

#include "mapwit/planarity.hpp"
#include "mapwit/sketch.hpp"
#include "mapwit/witness.hpp"

namespace mapwit {

namespace {

constexpr long kEnumerationCap = 400000;  // candidates per entry per operation

int max_intersection_degree(const EmbeddedGraph& g) {
    int mx = 0;
    for (int v = 0; v < static_cast<int>(g.verts.size()); ++v)
        if (g.verts[v].alive && g.verts[v].label < 0) mx = std::max(mx, g.degree(v));
    return mx;
}

// witness tie-break: smaller is better (Lemma-6 size pressure, then canonical)
bool witness_preferred(const EmbeddedGraph& a, const EmbeddedGraph& b) {
    int na = static_cast<int>(a.alive_vertices().size());
    int nb = static_cast<int>(b.alive_vertices().size());
    if (na != nb) return na < nb;
    return a.canonical_key() < b.canonical_key();
}

void insert_entry(Record& rec, RecordEntry&& e, const DpOptions& opts) {
    auto it = rec.find(e.key);
    if (it == rec.end()) {
        rec.emplace(e.key, std::move(e));
        return;
    }
    if (opts.carry_witness && witness_preferred(e.witness, it->second.witness))
        it->second = std::move(e);
}

void note_caps(const EmbeddedGraph& sk, DpStats& stats) {
    int cap = 12 * std::max(stats.omega, 1);
    if (static_cast<int>(sk.alive_vertices().size()) > cap) stats.sketch_cap_violations++;
}

std::set<int> sketch_labels(const EmbeddedGraph& s) {
    std::set<int> out;
    for (const auto& v : s.verts)
        if (v.alive && v.label >= 0) out.insert(v.label);
    for (int l : s.limbo) out.insert(l);
    return out;
}

// ---------------------------------------------------------------------------
// generic attachment enumeration: insert a new real vertex with neighbor
// labels `nbrs` into an active face of `host` (a sketch, or a witness with
// activity marks); emits every admissible embedded extension
// ---------------------------------------------------------------------------

struct Corner {
    int face = -1;
    int walk = -1;
    int pos = -1;     // insertion before walk.darts[pos]; isolated walks: pos 0
    int vertex = -1;
};

struct Leg {
    bool reuse = false;
    int reuse_vertex = -1;
    int reuse_corner = -1;              // corner id
    std::vector<int> seq;               // new leg: neighbor labels in rotation order
    std::vector<int> seq_corners;       // corner id per element
};

struct AttachContext {
    const EmbeddedGraph& host;
    const std::set<int>& anch;
    int v_label;
    const std::set<int>& nbrs;  // labels
    const Graph& g;
    int k;
    long* cap_hits;
    long budget = kEnumerationCap;
    const std::function<void(EmbeddedGraph&)>& sink;

    int face = -1;
    std::vector<Corner> corners;                  // corners on the face, walk order
    std::map<int, std::vector<int>> corners_at;   // vertex -> corner ids
    std::vector<int> reusable;                    // intersection vertex ids
    std::vector<std::vector<int>> new_seqs;       // admissible label sequences

    bool spend() {
        if (--budget < 0) {
            ++*cap_hits;
            return false;
        }
        return true;
    }
};

// builds one concrete candidate graph for a leg list plus per-corner arrival
// orders, then validates and emits
void build_candidate(AttachContext& cx, const std::vector<Leg>& legs,
                     const std::map<int, std::vector<std::pair<int, int>>>& arrivals,
                     const std::map<int, std::vector<int>>& order) {
    if (!cx.spend()) return;
    EmbeddedGraph cand = cx.host;
    int v = cand.add_vertex(cx.v_label);
    // vertices for new legs
    std::vector<int> leg_vertex(legs.size(), -1);
    for (size_t i = 0; i < legs.size(); ++i)
        leg_vertex[i] = legs[i].reuse ? legs[i].reuse_vertex : cand.add_vertex(-1);
    // edges: (leg, element) -> edge id; element -1 is the v-edge
    std::map<std::pair<int, int>, int> eid;
    std::vector<int> v_rot;
    for (size_t i = 0; i < legs.size(); ++i) {
        int e = cand.add_edge(v, leg_vertex[i]);
        eid[{static_cast<int>(i), -1}] = e;
        v_rot.push_back(2 * e);  // dart v -> u
        if (!legs[i].reuse)
            for (size_t j = 0; j < legs[i].seq.size(); ++j) {
                int w = cand.vertex_of_label(legs[i].seq[j]);
                eid[{static_cast<int>(i), static_cast<int>(j)}] =
                    cand.add_edge(leg_vertex[i], w);
            }
    }
    cand.rot[v] = v_rot;
    for (size_t i = 0; i < legs.size(); ++i) {
        if (legs[i].reuse) continue;
        std::vector<int>& r = cand.rot[leg_vertex[i]];
        r.clear();
        r.push_back(2 * eid[{static_cast<int>(i), -1}] + 1);  // u -> v
        for (size_t j = 0; j < legs[i].seq.size(); ++j)
            r.push_back(2 * eid[{static_cast<int>(i), static_cast<int>(j)}]);  // u -> w
    }
    // insert arrivals at boundary corners
    for (auto& [cid, list] : arrivals) {
        const Corner& c = cx.corners[cid];
        std::vector<int> darts;
        for (int oi : order.at(cid)) {
            auto [leg, elem] = list[oi];
            int e = eid[{leg, elem}];
            // dart oriented out of the boundary vertex
            darts.push_back(2 * e + 1);
        }
        auto& r = cand.rot[c.vertex];
        const auto& w = cx.host.faces[c.face].walks[c.walk];
        if (w.is_isolated()) {
            for (int d : darts) r.push_back(d);
        } else {
            int before = w.darts[c.pos];
            auto it = std::find(r.begin(), r.end(), before);
            r.insert(it, darts.begin(), darts.end());
        }
    }
    // rebuild faces: keep all faces except the target; retrace dirty darts
    EmbeddedGraph result = cand;
    result.faces.clear();
    std::set<int> f_darts;  // darts of the old target face
    for (const auto& w : cx.host.faces[cx.face].walks)
        for (int d : w.darts) f_darts.insert(d);
    std::set<int> dirty = f_darts;
    for (int d = 2 * static_cast<int>(cx.host.edges.size()); d < cand.dart_count(); ++d)
        dirty.insert(d);
    // untouched walks of the target face keep their own cycles
    std::set<int> touched_corner_walks;
    for (auto& [cid, list] : arrivals) touched_corner_walks.insert(cx.corners[cid].walk);
    std::vector<EmbeddedGraph::Walk> floating;  // untouched walks needing a face
    for (int wi = 0; wi < static_cast<int>(cx.host.faces[cx.face].walks.size()); ++wi) {
        const auto& w = cx.host.faces[cx.face].walks[wi];
        if (touched_corner_walks.count(wi)) continue;
        floating.push_back(w);
        for (int d : w.darts) dirty.erase(d);
    }
    for (int fi = 0; fi < static_cast<int>(cx.host.faces.size()); ++fi) {
        if (fi == cx.face || !cx.host.faces[fi].alive) continue;
        result.faces.push_back(cx.host.faces[fi]);
    }
    // trace the new cycles among dirty darts
    std::vector<std::vector<int>> new_cycles;
    std::set<int> seen;
    for (int d : dirty) {
        if (seen.count(d)) continue;
        std::vector<int> cyc;
        int x = d;
        bool ok = true;
        do {
            if (!dirty.count(x)) {
                ok = false;  // walks escaped the face: inconsistent layout
                break;
            }
            seen.insert(x);
            cyc.push_back(x);
            x = cand.phi(x);
        } while (x != d && cyc.size() <= dirty.size() + 1);
        if (!ok || x != d) return;
        new_cycles.push_back(std::move(cyc));
    }
    if (new_cycles.empty()) return;
    size_t first_new = result.faces.size();
    for (auto& cyc : new_cycles) {
        EmbeddedGraph::Face f;
        f.active = true;
        EmbeddedGraph::Walk w;
        w.darts = std::move(cyc);
        f.walks.push_back(std::move(w));
        result.faces.push_back(std::move(f));
    }
    // Euler check on v's component (validates planarity of the layout)
    {
        auto comp = result.component_ids();
        int cv = comp[v];
        int V = 0, E = 0, F = 0;
        for (int x = 0; x < static_cast<int>(result.verts.size()); ++x)
            if (result.verts[x].alive && comp[x] == cv) ++V;
        for (const auto& e : result.edges)
            if (e.alive && comp[e.u] == cv) ++E;
        for (const auto& fc : result.faces) {
            if (!fc.alive) continue;
            for (const auto& w : fc.walks) {
                int c = w.is_isolated() ? comp[w.isolated] : comp[result.tail(w.darts[0])];
                if (c == cv) ++F;
            }
        }
        // floating walks not yet assigned are other components
        if (V - E + F != 2) return;
    }
    // distribute floating walks over the new faces (all ways)
    std::function<void(size_t)> assign = [&](size_t idx) {
        if (idx == floating.size()) {
            EmbeddedGraph emitted = result;
            if (!emitted.coherent(false)) return;
            // compactness: no inessential vertices or twin pairs
            auto cr = is_compact_witness(emitted);
            if (!cr.compact) return;
            cx.sink(emitted);
            return;
        }
        for (size_t f = first_new; f < result.faces.size(); ++f) {
            result.faces[f].walks.push_back(floating[idx]);
            assign(idx + 1);
            result.faces[f].walks.pop_back();
        }
    };
    if (!cx.spend()) return;
    assign(0);
}

// enumerate per-corner arrival orders
void enumerate_orders(AttachContext& cx, const std::vector<Leg>& legs) {
    // collect arrivals per corner
    std::map<int, std::vector<std::pair<int, int>>> arrivals;  // corner -> (leg, elem)
    for (size_t i = 0; i < legs.size(); ++i) {
        if (legs[i].reuse)
            arrivals[legs[i].reuse_corner].push_back({static_cast<int>(i), -1});
        else
            for (size_t j = 0; j < legs[i].seq.size(); ++j)
                arrivals[legs[i].seq_corners[j]].push_back(
                    {static_cast<int>(i), static_cast<int>(j)});
    }
    std::map<int, std::vector<int>> order;
    std::vector<int> cids;
    for (auto& [cid, list] : arrivals) {
        cids.push_back(cid);
        order[cid].resize(list.size());
        std::iota(order[cid].begin(), order[cid].end(), 0);
    }
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == cids.size()) {
            build_candidate(cx, legs, arrivals, order);
            return;
        }
        std::vector<int>& o = order[cids[i]];
        std::sort(o.begin(), o.end());
        do {
            rec(i + 1);
        } while (std::next_permutation(o.begin(), o.end()));
        std::sort(o.begin(), o.end());
    };
    rec(0);
}

// does the leg list realize every required neighbor?
bool covers(const AttachContext& cx, const std::vector<Leg>& legs) {
    std::set<int> got;
    for (const auto& l : legs) {
        if (l.reuse) {
            for (int d : cx.host.rot[l.reuse_vertex])
                got.insert(cx.host.verts[cx.host.head(d)].label);
        } else {
            for (int w : l.seq) got.insert(w);
        }
    }
    for (int w : cx.nbrs)
        if (!got.count(w)) return false;
    return true;
}

// degree-2 legs that would be inessential next to a strictly larger leg
bool inessential_conflict(const AttachContext& cx, const std::vector<Leg>& legs) {
    // neighborhoods of v's intersections: reuse -> N(u) + v; new -> seq + v
    std::vector<std::set<int>> nb;
    for (const auto& l : legs) {
        std::set<int> s;
        if (l.reuse)
            for (int d : cx.host.rot[l.reuse_vertex])
                s.insert(cx.host.verts[cx.host.head(d)].label);
        else
            s.insert(l.seq.begin(), l.seq.end());
        s.insert(-2);  // stands for v
        nb.push_back(std::move(s));
    }
    for (size_t i = 0; i < nb.size(); ++i) {
        if (nb[i].size() != 2) continue;
        for (size_t j = 0; j < nb.size(); ++j)
            if (i != j && nb[i] != nb[j] &&
                std::includes(nb[j].begin(), nb[j].end(), nb[i].begin(), nb[i].end()))
                return true;
    }
    return false;
}

void enumerate_legs(AttachContext& cx, std::vector<Leg>& legs, int max_legs) {
    if (!legs.empty() && covers(cx, legs) && !inessential_conflict(cx, legs))
        enumerate_orders(cx, legs);
    if (static_cast<int>(legs.size()) == max_legs) return;
    if (cx.budget < 0) return;
    // candidate next legs
    for (int u : cx.reusable) {
        bool used = false;
        for (const auto& l : legs)
            if (l.reuse && l.reuse_vertex == u) used = true;
        if (used) continue;
        if (cx.k > 0 && cx.host.degree(u) + 1 > cx.k) continue;
        for (int cid : cx.corners_at[u]) {
            Leg l;
            l.reuse = true;
            l.reuse_vertex = u;
            l.reuse_corner = cid;
            legs.push_back(l);
            enumerate_legs(cx, legs, max_legs);
            legs.pop_back();
        }
    }
    for (const auto& seq : cx.new_seqs) {
        // corner choices per element
        Leg l;
        l.seq = seq;
        l.seq_corners.assign(seq.size(), -1);
        std::function<void(size_t)> pick = [&](size_t j) {
            if (j == seq.size()) {
                // avoid immediately-repeated identical singleton legs (twins)
                if (!legs.empty() && legs.back().reuse == false && legs.back().seq == l.seq &&
                    legs.back().seq_corners == l.seq_corners && seq.size() == 1)
                    return;
                legs.push_back(l);
                enumerate_legs(cx, legs, max_legs);
                legs.pop_back();
                return;
            }
            int w = cx.host.vertex_of_label(seq[j]);
            for (int cid : cx.corners_at[w]) {
                l.seq_corners[j] = cid;
                pick(j + 1);
            }
        };
        pick(0);
        if (cx.budget < 0) return;
    }
}

void enumerate_attachments(const EmbeddedGraph& host, const std::set<int>& anch, int v_label,
                           const std::set<int>& nbrs, const Graph& g, int k, long* cap_hits,
                           const std::function<void(EmbeddedGraph&)>& sink) {
    for (int fi = 0; fi < static_cast<int>(host.faces.size()); ++fi) {
        const auto& fc = host.faces[fi];
        if (!fc.alive || !fc.active) continue;
        // corners and boundary vertex set
        AttachContext cx{host, anch, v_label, nbrs, g, k, cap_hits, kEnumerationCap, sink};
        cx.face = fi;
        std::set<int> on_face;
        for (int wi = 0; wi < static_cast<int>(fc.walks.size()); ++wi) {
            const auto& w = fc.walks[wi];
            if (w.is_isolated()) {
                Corner c{fi, wi, 0, w.isolated};
                cx.corners_at[w.isolated].push_back(static_cast<int>(cx.corners.size()));
                cx.corners.push_back(c);
                on_face.insert(w.isolated);
            } else {
                for (int p = 0; p < static_cast<int>(w.darts.size()); ++p) {
                    int x = host.tail(w.darts[p]);
                    on_face.insert(x);
                    if (!anch.count(x)) continue;
                    Corner c{fi, wi, p, x};
                    cx.corners_at[x].push_back(static_cast<int>(cx.corners.size()));
                    cx.corners.push_back(c);
                }
            }
        }
        bool all_there = true;
        for (int lbl : nbrs) {
            int vid = host.vertex_of_label(lbl);
            if (vid == -1 || !on_face.count(vid)) {
                all_there = false;
                break;
            }
        }
        if (!all_there) continue;
        // reusable intersections: on the face, anchored, neighbors within nbrs
        for (int x : on_face) {
            if (host.verts[x].label >= 0 || !anch.count(x)) continue;
            bool ok = true;
            for (int d : host.rot[x])
                if (!nbrs.count(host.verts[host.head(d)].label)) {
                    ok = false;
                    break;
                }
            if (ok) cx.reusable.push_back(x);
        }
        std::sort(cx.reusable.begin(), cx.reusable.end());
        // admissible new-intersection sequences: cliques S in nbrs, all orders
        std::vector<int> nl(nbrs.begin(), nbrs.end());
        std::vector<std::vector<int>> subsets;
        for (unsigned m = 1; m < (1u << nl.size()); ++m) {
            std::vector<int> s;
            for (size_t i = 0; i < nl.size(); ++i)
                if (m >> i & 1) s.push_back(nl[i]);
            if (k > 0 && static_cast<int>(s.size()) + 1 > k) continue;
            if (!is_clique(g, s)) continue;
            subsets.push_back(s);
        }
        for (auto& s : subsets) {
            std::sort(s.begin(), s.end());
            do {
                cx.new_seqs.push_back(s);
            } while (std::next_permutation(s.begin(), s.end()));
        }
        int max_legs = 2 * static_cast<int>(nbrs.size()) + 2;
        std::vector<Leg> legs;
        enumerate_legs(cx, legs, max_legs);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// record operations
// ---------------------------------------------------------------------------

void DpStats::note_record(const Record& r) {
    max_record_size = std::max(max_record_size, static_cast<long>(r.size()));
    total_entries += static_cast<long>(r.size());
}

Record init_leaf(int v, const DpOptions& opts) {
    Record rec;
    RecordEntry e;
    e.sketch = single_vertex_sketch(v, opts.hole_free);
    e.key = e.sketch.canonical_key();
    e.provenance = "leaf";
    if (opts.carry_witness) e.witness = single_vertex_sketch(v, false);
    rec.emplace(e.key, std::move(e));
    return rec;
}

namespace {

// hole-free admissibility checks on a carried witness at a forget step
bool cert_holefree_ok(const EmbeddedGraph& w, const std::set<int>& old_bag,
                      const std::set<int>& new_bag) {
    EmbeddedGraph a = w;
    mark_active_faces(a, old_bag);
    std::vector<char> was_active;
    for (auto& fc : a.faces) was_active.push_back(fc.active);
    mark_active_faces(a, new_bag);
    auto anch = anchors(a, new_bag);
    for (int fi = 0; fi < static_cast<int>(a.faces.size()); ++fi) {
        const auto& fc = a.faces[fi];
        if (!fc.alive) continue;
        if (was_active[fi] && !fc.active) {
            // completed now: must be one closed 4-walk
            if (fc.walks.size() != 1 || fc.walks[0].is_isolated() ||
                fc.walks[0].darts.size() != 4)
                return false;
        } else if (fc.active) {
            // poison states: a boundary walk with no anchors, or consecutive
            // anchor visits of one vertex enclosing non-anchors
            for (const auto& wk : fc.walks) {
                if (wk.is_isolated()) {
                    if (!anch.count(wk.isolated)) return false;
                    continue;
                }
                std::vector<int> avisits;
                for (int d : wk.darts)
                    if (anch.count(a.tail(d))) avisits.push_back(a.tail(d));
                if (avisits.empty()) return false;
                int L = static_cast<int>(wk.darts.size());
                if (static_cast<int>(avisits.size()) < L) {
                    // some non-anchor content; check consecutive anchor visits
                    std::vector<int> pos;
                    for (int p = 0; p < L; ++p)
                        if (anch.count(a.tail(wk.darts[p]))) pos.push_back(p);
                    for (size_t i = 0; i < pos.size(); ++i) {
                        int p = pos[i], q = pos[(i + 1) % pos.size()];
                        int gap = (q - p + L) % L - 1;
                        if (gap >= 1 &&
                            a.tail(wk.darts[p]) == a.tail(wk.darts[q]))
                            return false;
                    }
                }
            }
        }
    }
    return true;
}

}  // namespace

Record op_forget(const Record& r, int v, const std::set<int>& new_bag, const DpOptions& opts,
                 DpStats& stats) {
    Record out;
    std::set<int> old_bag = new_bag;
    old_bag.insert(v);
    for (const auto& [key, entry] : r) {
        if (opts.carry_witness) {
            if (opts.hole_free && !cert_holefree_ok(entry.witness, old_bag, new_bag)) continue;
            auto sk = compute_sketch(entry.witness, new_bag, opts.hole_free);
            note_caps(sk.sketch, stats);
            RecordEntry e;
            e.sketch = std::move(sk.sketch);
            e.key = sk.key;
            e.witness = entry.witness;
            e.provenance = "forget(" + std::to_string(v) + ")<-" + key;
            insert_entry(out, std::move(e), opts);
            continue;
        }
        EmbeddedGraph s = entry.sketch;
        // limbo case: the forgotten vertex was already parked
        auto lit = std::find(s.limbo.begin(), s.limbo.end(), v);
        if (lit != s.limbo.end()) {
            s.limbo.erase(lit);
            RecordEntry e;
            e.sketch = s.compacted();
            e.key = e.sketch.canonical_key();
            e.provenance = "forget(" + std::to_string(v) + ")<-" + key;
            note_caps(e.sketch, stats);
            insert_entry(out, std::move(e), opts);
            continue;
        }
        int vid = s.vertex_of_label(v);
        if (vid == -1) continue;  // cannot happen on valid inputs
        // face bookkeeping before surgery
        int nfaces_before = static_cast<int>(s.faces.size());
        std::vector<int> sum_before(nfaces_before, 0), walks_before(nfaces_before, 0);
        std::vector<char> was_active(nfaces_before, 0);
        for (int f = 0; f < nfaces_before; ++f) {
            const auto& fc = s.faces[f];
            if (!fc.alive) continue;
            was_active[f] = fc.active;
            walks_before[f] = static_cast<int>(fc.walks.size());
            for (const auto& wk : fc.walks)
                for (int d : wk.darts) sum_before[f] += s.dart_counter(d);
        }
        // targets: v plus intersections adjacent to it
        std::vector<int> targets{vid};
        for (int d : s.rot[vid]) {
            int u = s.head(d);
            if (s.verts[u].label < 0) targets.push_back(u);
        }
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        for (auto& fc : s.faces) {
            fc.lost_loop = false;
            fc.lost_walk = false;
        }
        for (int t : targets) s.remove_vertex_shortcut(t);
        // retirement + hole-free policy
        bool keep = true;
        for (int f = 0; f < nfaces_before; ++f) {
            auto& fc = s.faces[f];
            if (!was_active[f]) continue;
            bool retiring = !fc.alive || s.distinct_vertices_on_face(f) < 2;
            if (retiring) {
                if (fc.alive) fc.active = false;
                if (opts.hole_free && (walks_before[f] != 1 || sum_before[f] != 4)) keep = false;
            } else if (opts.hole_free && (fc.lost_loop || fc.lost_walk)) {
                keep = false;
            }
        }
        if (!keep) continue;
        sketch_cleanup(s, new_bag);
        RecordEntry e;
        e.sketch = s.compacted();
        e.sketch.validate(true);
        e.key = e.sketch.canonical_key();
        e.provenance = "forget(" + std::to_string(v) + ")<-" + key;
        note_caps(e.sketch, stats);
        insert_entry(out, std::move(e), opts);
    }
    stats.note_record(out);
    return out;
}

Record op_introduce(const Record& r, int v, const std::set<int>& new_bag, const Graph& g,
                    const DpOptions& opts, DpStats& stats) {
    Record out;
    std::set<int> nbrs;
    for (int w : g.adj[v])
        if (new_bag.count(w) && w != v) nbrs.insert(w);
    for (const auto& [key, entry] : r) {
        const EmbeddedGraph& host0 = opts.carry_witness ? entry.witness : entry.sketch;
        EmbeddedGraph host = host0;
        if (opts.carry_witness) mark_active_faces(host, new_bag);
        auto anch = opts.carry_witness ? anchors(host, new_bag)
                                       : [&] {
                                             std::set<int> a;
                                             for (int x = 0;
                                                  x < static_cast<int>(host.verts.size()); ++x)
                                                 if (host.verts[x].alive) a.insert(x);
                                             return a;
                                         }();
        auto finish = [&](EmbeddedGraph& cand) {
            RecordEntry e;
            if (opts.carry_witness) {
                e.witness = cand.compacted();
                e.witness.clear_active_marks();
                auto sk = compute_sketch(e.witness, new_bag, opts.hole_free);
                if (opts.k > 0 && max_intersection_degree(sk.sketch) > opts.k) return;
                e.sketch = std::move(sk.sketch);
                e.key = sk.key;
            } else {
                EmbeddedGraph sk = cand.compacted();
                if (opts.k > 0 && max_intersection_degree(sk) > opts.k) return;
                if (!sk.coherent(true)) return;
                e.sketch = std::move(sk);
                e.key = e.sketch.canonical_key();
            }
            e.provenance = "introduce(" + std::to_string(v) + ")<-" + key;
            note_caps(e.sketch, stats);
            insert_entry(out, std::move(e), opts);
        };
        if (nbrs.empty()) {
            // one new entry per active face, vertex walk added to it
            for (int fi = 0; fi < static_cast<int>(host.faces.size()); ++fi) {
                if (!host.faces[fi].alive || !host.faces[fi].active) continue;
                EmbeddedGraph cand = host;
                int nv = cand.add_vertex(v);
                EmbeddedGraph::Walk wk;
                wk.isolated = nv;
                cand.faces[fi].walks.push_back(std::move(wk));
                finish(cand);
            }
        } else {
            enumerate_attachments(host, anch, v, nbrs, g, opts.k, &stats.enumeration_caps_hit,
                                  finish);
        }
    }
    stats.note_record(out);
    return out;
}

// ---------------------------------------------------------------------------
// join
// ---------------------------------------------------------------------------

namespace {

struct JoinSide {
    EmbeddedGraph s;                       // pre-passed sketch copy
    std::vector<int> dart_face;            // dart -> face index
    std::map<int, int> iso_face;           // vertex -> face of its isolated walk
    std::vector<int> inter_vertices;       // intersection vertex ids
    std::map<int, std::vector<int>> nbhd;  // intersection -> sorted labels

    void index() {
        dart_face.assign(s.dart_count(), -1);
        iso_face.clear();
        inter_vertices.clear();
        nbhd.clear();
        for (int f = 0; f < static_cast<int>(s.faces.size()); ++f) {
            if (!s.faces[f].alive) continue;
            for (const auto& w : s.faces[f].walks) {
                if (w.is_isolated())
                    iso_face[w.isolated] = f;
                else
                    for (int d : w.darts) dart_face[d] = f;
            }
        }
        for (int v = 0; v < static_cast<int>(s.verts.size()); ++v) {
            if (!s.verts[v].alive || s.verts[v].label >= 0) continue;
            inter_vertices.push_back(v);
            std::vector<int> ns;
            for (int d : s.rot[v]) ns.push_back(s.verts[s.head(d)].label);
            std::sort(ns.begin(), ns.end());
            nbhd[v] = ns;
        }
    }
};

// all cyclic sequences containing a and b as cyclic subsequences, where darts
// listed in `pins` (present in both) must coincide; a is pinned at rotation 0
void cyclic_merges(const std::vector<int>& a, const std::vector<int>& b,
                   const std::set<int>& pins, std::vector<std::vector<int>>& out) {
    if (a.empty()) {
        out.push_back(b);
        return;
    }
    if (b.empty()) {
        out.push_back(a);
        return;
    }
    std::vector<int> pa, pb;  // positions of pins
    for (int i = 0; i < static_cast<int>(a.size()); ++i)
        if (pins.count(a[i])) pa.push_back(i);
    for (int i = 0; i < static_cast<int>(b.size()); ++i)
        if (pins.count(b[i])) pb.push_back(i);
    if (pa.empty()) {
        // rotate b to each start, then interleave the linear sequences with
        // a's first element leading
        std::vector<int> rest(a.begin() + 1, a.end());
        for (size_t r = 0; r < b.size(); ++r) {
            std::vector<int> brot;
            for (size_t i = 0; i < b.size(); ++i) brot.push_back(b[(r + i) % b.size()]);
            // all shuffles of rest and brot
            std::vector<int> cur{a[0]};
            std::function<void(size_t, size_t)> mix = [&](size_t i, size_t j) {
                if (i == rest.size() && j == brot.size()) {
                    out.push_back(cur);
                    return;
                }
                if (i < rest.size()) {
                    cur.push_back(rest[i]);
                    mix(i + 1, j);
                    cur.pop_back();
                }
                if (j < brot.size()) {
                    cur.push_back(brot[j]);
                    mix(i, j + 1);
                    cur.pop_back();
                }
            };
            mix(0, 0);
        }
        return;
    }
    // pinned case: shared darts must appear in the same cyclic order
    if (pa.size() != pb.size()) return;
    int m = static_cast<int>(pa.size());
    int shift = -1;
    for (int s0 = 0; s0 < m; ++s0) {
        bool ok = true;
        for (int i = 0; i < m; ++i)
            if (a[pa[i]] != b[pb[(i + s0) % m]]) {
                ok = false;
                break;
            }
        if (ok) {
            shift = s0;
            break;
        }
    }
    if (shift == -1) return;
    // gaps between consecutive pins
    auto gap = [](const std::vector<int>& v, const std::vector<int>& pos, int i, int m2) {
        std::vector<int> g;
        int from = pos[i], to = pos[(i + 1) % m2];
        for (int p = (from + 1) % static_cast<int>(v.size()); p != to;
             p = (p + 1) % static_cast<int>(v.size()))
            g.push_back(v[p]);
        return g;
    };
    std::vector<std::vector<std::vector<int>>> gap_mixes(m);
    for (int i = 0; i < m; ++i) {
        auto ga = gap(a, pa, i, m);
        auto gb = gap(b, pb, (i + shift) % m, m);
        std::vector<int> cur;
        std::function<void(size_t, size_t)> mix = [&](size_t x, size_t y) {
            if (x == ga.size() && y == gb.size()) {
                gap_mixes[i].push_back(cur);
                return;
            }
            if (x < ga.size()) {
                cur.push_back(ga[x]);
                mix(x + 1, y);
                cur.pop_back();
            }
            if (y < gb.size()) {
                cur.push_back(gb[y]);
                mix(x, y + 1);
                cur.pop_back();
            }
        };
        mix(0, 0);
    }
    std::vector<int> assembled;
    std::function<void(int)> pick = [&](int i) {
        if (i == m) {
            out.push_back(assembled);
            return;
        }
        size_t mark = assembled.size();
        for (auto& mixv : gap_mixes[i]) {
            assembled.push_back(a[pa[i]]);
            assembled.insert(assembled.end(), mixv.begin(), mixv.end());
            pick(i + 1);
            assembled.resize(mark);
        }
    };
    pick(0);
}

void join_assemble(EmbeddedGraph& U, const JoinSide& A, const JoinSide& B,
                   const std::vector<int>& o1dart, const std::vector<int>& o2dart,
                   const std::vector<int>& map1, const std::vector<int>& map2,
                   const std::vector<int>& final_limbo, const DpOptions& opts, DpStats& stats,
                   std::vector<EmbeddedGraph>& out);

// abstract union of the two sides: shared reals and fused intersections are
// identified, fused edges mapped onto side-A edges
struct UnionGraph {
    EmbeddedGraph U;  // vertices + edges (+counters), rotations unset
    std::vector<int> map1, map2;
    std::vector<int> e1map, e2map;
    std::vector<int> o1dart, o2dart;  // per U dart
    bool ok = false;

    int d1U(int d1) const { return 2 * e1map[d1 >> 1] + (d1 & 1); }
    int d2U(int d2) const {
        int ue = e2map[d2 >> 1];
        return o2dart[2 * ue] == d2 ? 2 * ue : 2 * ue + 1;
    }
};

UnionGraph build_union(const JoinSide& A, const JoinSide& B, const std::map<int, int>& fuse,
                       bool track_counters) {
    const EmbeddedGraph& S1 = A.s;
    const EmbeddedGraph& S2 = B.s;
    UnionGraph R;
    R.U.track_counters = track_counters;
    R.map1.assign(S1.verts.size(), -1);
    R.map2.assign(S2.verts.size(), -1);
    for (int v = 0; v < static_cast<int>(S1.verts.size()); ++v)
        if (S1.verts[v].alive) R.map1[v] = R.U.add_vertex(S1.verts[v].label);
    for (int v = 0; v < static_cast<int>(S2.verts.size()); ++v) {
        if (!S2.verts[v].alive) continue;
        if (S2.verts[v].label >= 0) {
            int uv = R.U.vertex_of_label(S2.verts[v].label);
            R.map2[v] = uv != -1 ? uv : R.U.add_vertex(S2.verts[v].label);
        } else if (fuse.count(v)) {
            R.map2[v] = R.map1[fuse.at(v)];
        } else {
            R.map2[v] = R.U.add_vertex(-1);
        }
    }
    R.e1map.assign(S1.edges.size(), -1);
    R.e2map.assign(S2.edges.size(), -1);
    auto addU = [&](int u, int v) {
        int e = R.U.add_edge(u, v);
        R.o1dart.resize(2 * e + 2, -1);
        R.o2dart.resize(2 * e + 2, -1);
        return e;
    };
    for (int e = 0; e < static_cast<int>(S1.edges.size()); ++e) {
        if (!S1.edges[e].alive) continue;
        int ue = addU(R.map1[S1.edges[e].u], R.map1[S1.edges[e].v]);
        R.e1map[e] = ue;
        R.o1dart[2 * ue] = 2 * e;
        R.o1dart[2 * ue + 1] = 2 * e + 1;
        if (track_counters && S1.track_counters) {
            R.U.counter[2 * ue] = S1.counter[2 * e];
            R.U.counter[2 * ue + 1] = S1.counter[2 * e + 1];
        }
    }
    for (int e = 0; e < static_cast<int>(S2.edges.size()); ++e) {
        if (!S2.edges[e].alive) continue;
        int u = S2.edges[e].u, v = S2.edges[e].v;
        int iu = S2.verts[u].label < 0 ? u : v;  // intersection endpoint
        int rv = iu == u ? v : u;
        if (S2.verts[iu].label < 0 && fuse.count(iu)) {
            int a_int = fuse.at(iu);
            int found = -1;
            for (int d : S1.rot[a_int])
                if (S1.verts[S1.head(d)].label == S2.verts[rv].label) found = d >> 1;
            if (found == -1) return R;  // equal neighborhoods guarantee this
            int ue = R.e1map[found];
            R.e2map[e] = ue;
            int s2_int_dart = 2 * e + (S2.edges[e].u == iu ? 0 : 1);
            int s1_int_dart = 2 * found + (S1.edges[found].u == a_int ? 0 : 1);
            int u_int_dart = 2 * ue + (s1_int_dart & 1);
            R.o2dart[u_int_dart] = s2_int_dart;
            R.o2dart[EmbeddedGraph::alpha(u_int_dart)] = EmbeddedGraph::alpha(s2_int_dart);
        } else {
            int ue = addU(R.map2[u], R.map2[v]);
            R.e2map[e] = ue;
            R.o2dart[2 * ue] = 2 * e;
            R.o2dart[2 * ue + 1] = 2 * e + 1;
            if (track_counters && S2.track_counters) {
                R.U.counter[2 * ue] = S2.counter[2 * e];
                R.U.counter[2 * ue + 1] = S2.counter[2 * e + 1];
            }
        }
    }
    // fused intersections must agree on their rotations
    for (auto& [b_int, a_int] : fuse) {
        std::vector<int> ra, rb;
        for (int d : S1.rot[a_int]) ra.push_back(R.d1U(d));
        for (int d : S2.rot[b_int]) rb.push_back(R.d2U(d));
        bool cyc_eq = false;
        for (size_t s0 = 0; s0 < rb.size() && !cyc_eq; ++s0) {
            bool eq = ra.size() == rb.size() && !ra.empty();
            for (size_t i = 0; eq && i < ra.size(); ++i)
                if (ra[i] != rb[(s0 + i) % rb.size()]) eq = false;
            cyc_eq = eq;
        }
        if (!cyc_eq) return R;
    }
    R.ok = true;
    return R;
}

// enumerate rotation systems of U: interleavings at shared reals, fixed
// rotations elsewhere; calls sink with U.rot fully assigned
void enumerate_union_rotations(UnionGraph& R, const JoinSide& A, const JoinSide& B,
                               const std::set<int>& bag,
                               const std::function<void()>& sink) {
    const EmbeddedGraph& S1 = A.s;
    const EmbeddedGraph& S2 = B.s;
    std::vector<int> shared_vids;
    std::vector<std::vector<std::vector<int>>> choices;
    for (int l : bag) {
        int v1 = S1.vertex_of_label(l), v2 = S2.vertex_of_label(l);
        if (v1 == -1 || v2 == -1) continue;
        std::vector<int> ra, rb;
        for (int d : S1.rot[v1]) ra.push_back(R.d1U(d));
        for (int d : S2.rot[v2]) rb.push_back(R.d2U(d));
        std::set<int> pins;
        for (int d : rb)
            if (R.o1dart[d] != -1) pins.insert(d);
        std::vector<std::vector<int>> merges;
        cyclic_merges(ra, rb, pins, merges);
        if (merges.empty()) return;
        choices.push_back(std::move(merges));
        shared_vids.push_back(R.U.vertex_of_label(l));
    }
    auto is_shared = [&](int uv) {
        return std::find(shared_vids.begin(), shared_vids.end(), uv) != shared_vids.end();
    };
    for (int v = 0; v < static_cast<int>(S1.verts.size()); ++v) {
        if (!S1.verts[v].alive) continue;
        int uv = R.map1[v];
        if (is_shared(uv)) continue;
        for (int d : S1.rot[v]) R.U.rot[uv].push_back(R.d1U(d));
    }
    for (int v = 0; v < static_cast<int>(S2.verts.size()); ++v) {
        if (!S2.verts[v].alive) continue;
        int uv = R.map2[v];
        if (is_shared(uv) || !R.U.rot[uv].empty()) continue;
        for (int d : S2.rot[v]) R.U.rot[uv].push_back(R.d2U(d));
    }
    std::function<void(size_t)> pick = [&](size_t i) {
        if (i == choices.size()) {
            sink();
            return;
        }
        for (auto& m : choices[i]) {
            R.U.rot[shared_vids[i]] = m;
            pick(i + 1);
        }
        R.U.rot[shared_vids[i]].clear();
    };
    pick(0);
}

// builds union sketches for one (S1, S2-flip, fusion) choice
void join_build(const JoinSide& A, const JoinSide& B, const std::set<int>& bag, const Graph&,
                const std::map<int, int>& fuse, const std::vector<int>& final_limbo,
                const DpOptions& opts, DpStats& stats, std::vector<EmbeddedGraph>& out) {
    UnionGraph R = build_union(A, B, fuse, opts.hole_free);
    if (!R.ok) return;
    enumerate_union_rotations(R, A, B, bag, [&] {
        join_assemble(R.U, A, B, R.o1dart, R.o2dart, R.map1, R.map2, final_limbo, opts, stats,
                      out);
    });
}

// certificate variant: glue the carried witnesses; position systems are
// enumerated exhaustively and filtered by the accepted sketch keys upstream
void join_build_witness(const JoinSide& A, const JoinSide& B, const std::set<int>& bag,
                        const std::map<int, int>& fuse, const DpOptions&,
                        std::vector<EmbeddedGraph>& out, long& budget) {
    UnionGraph R = build_union(A, B, fuse, false);
    if (!R.ok) return;
    enumerate_union_rotations(R, A, B, bag, [&] {
        if (budget < 0) return;
        std::vector<int> labels;
        for (auto& v : R.U.verts) labels.push_back(v.label);
        std::vector<std::pair<int, int>> edges;
        for (auto& e : R.U.edges) edges.push_back({e.u, e.v});
        enumerate_position_systems(labels, edges, R.U.rot, [&](EmbeddedGraph& wu) {
            if (--budget < 0) return;
            out.push_back(wu);
        });
    });
}

// traces the union, attributes every local face to one face per side, then
// enumerates nestings consistent with both position systems (S.2-S.6)
void join_assemble(EmbeddedGraph& U, const JoinSide& A, const JoinSide& B,
                   const std::vector<int>& o1dart, const std::vector<int>& o2dart,
                   const std::vector<int>& map1, const std::vector<int>& map2,
                   const std::vector<int>& final_limbo, const DpOptions& opts, DpStats& stats,
                   std::vector<EmbeddedGraph>& out) {
    const EmbeddedGraph& S1 = A.s;
    const EmbeddedGraph& S2 = B.s;
    // inverse vertex maps for isolated-face lookups
    std::map<int, int> inv1, inv2;  // U vid -> side vid
    for (int v = 0; v < static_cast<int>(map1.size()); ++v)
        if (map1[v] != -1) inv1[map1[v]] = v;
    for (int v = 0; v < static_cast<int>(map2.size()); ++v)
        if (map2[v] != -1) inv2[map2[v]] = v;

    auto cycles = trace_face_cycles(U);
    int nlocal = static_cast<int>(cycles.size());
    std::vector<int> dart_local(U.dart_count(), -1);
    for (int i = 0; i < nlocal; ++i)
        for (int d : cycles[i]) dart_local[d] = i;
    // isolated U vertices become extra local faces
    std::vector<int> iso_vertex_of_local;  // parallel to locals after cycles
    std::vector<int> iso_locals;
    for (int v = 0; v < static_cast<int>(U.verts.size()); ++v)
        if (U.verts[v].alive && U.degree(v) == 0) {
            iso_locals.push_back(nlocal + static_cast<int>(iso_vertex_of_local.size()));
            iso_vertex_of_local.push_back(v);
        }
    int ntotal = nlocal + static_cast<int>(iso_vertex_of_local.size());

    // attribution: phi1[l], phi2[l] in {-1 unresolved, face idx}
    std::vector<int> phi1(ntotal, -1), phi2(ntotal, -1);
    auto merge_attr = [](int& slot, int val) {
        if (val == -1) return true;
        if (slot == -1) {
            slot = val;
            return true;
        }
        return slot == val;
    };
    auto corner_attr = [&](int x, int out_dart, const std::vector<int>& odart,
                           const EmbeddedGraph& S, const std::map<int, int>& inv,
                           const std::map<int, int>& iso_face) -> int {
        // nearest side-origin out-dart strictly before out_dart at x
        const auto& r = U.rot[x];
        int pos = -1;
        for (int i = 0; i < static_cast<int>(r.size()); ++i)
            if (r[i] == out_dart) pos = i;
        for (int step = 1; step <= static_cast<int>(r.size()); ++step) {
            int d = r[(pos - step + static_cast<int>(r.size()) * 2) % r.size()];
            if (odart[d] != -1) return S.face_of_walk_dart(EmbeddedGraph::alpha(odart[d]));
        }
        // no side darts at x: isolated on that side?
        auto it = inv.find(x);
        if (it != inv.end()) {
            auto f = iso_face.find(it->second);
            if (f != iso_face.end()) return f->second;
        }
        return -1;
    };
    for (int l = 0; l < nlocal; ++l) {
        for (size_t i = 0; i < cycles[l].size(); ++i) {
            int d = cycles[l][i];
            int dn = cycles[l][(i + 1) % cycles[l].size()];
            if (o1dart[d] != -1)
                if (!merge_attr(phi1[l], A.dart_face[o1dart[d]])) return;
            if (o2dart[d] != -1)
                if (!merge_attr(phi2[l], B.dart_face[o2dart[d]])) return;
            int x = U.head(d);
            if (!merge_attr(phi1[l], corner_attr(x, dn, o1dart, S1, inv1, A.iso_face))) return;
            if (!merge_attr(phi2[l], corner_attr(x, dn, o2dart, S2, inv2, B.iso_face))) return;
        }
    }
    for (size_t k = 0; k < iso_vertex_of_local.size(); ++k) {
        int l = nlocal + static_cast<int>(k);
        int v = iso_vertex_of_local[k];
        if (inv1.count(v)) {
            auto it = A.iso_face.find(inv1.at(v));
            if (it != A.iso_face.end())
                if (!merge_attr(phi1[l], it->second)) return;
        }
        if (inv2.count(v)) {
            auto it = B.iso_face.find(inv2.at(v));
            if (it != B.iso_face.end())
                if (!merge_attr(phi2[l], it->second)) return;
        }
    }
    // propagate: faces flanking a side-only edge share the other side's face
    {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int e = 0; e < static_cast<int>(U.edges.size()); ++e) {
                if (!U.edges[e].alive) continue;
                int la = dart_local[2 * e], lb = dart_local[2 * e + 1];
                bool has1 = o1dart[2 * e] != -1, has2 = o2dart[2 * e] != -1;
                if (has2 && !has1) {  // S2-only: same S1 face both sides
                    if (phi1[la] != -1 && phi1[lb] == -1) phi1[lb] = phi1[la], changed = true;
                    if (phi1[lb] != -1 && phi1[la] == -1) phi1[la] = phi1[lb], changed = true;
                    if (phi1[la] != -1 && phi1[lb] != -1 && phi1[la] != phi1[lb]) return;
                }
                if (has1 && !has2) {
                    if (phi2[la] != -1 && phi2[lb] == -1) phi2[lb] = phi2[la], changed = true;
                    if (phi2[lb] != -1 && phi2[la] == -1) phi2[la] = phi2[lb], changed = true;
                    if (phi2[la] != -1 && phi2[lb] != -1 && phi2[la] != phi2[lb]) return;
                }
            }
        }
    }

    // group local faces by component, pick walks
    auto comp = U.component_ids();
    int ncomp = 0;
    for (int c : comp) ncomp = std::max(ncomp, c + 1);
    if (ncomp == 0) {
        // empty union: all bag reals ended in limbo
        EmbeddedGraph empty;
        empty.track_counters = opts.hole_free;
        empty.limbo = final_limbo;
        std::sort(empty.limbo.begin(), empty.limbo.end());
        out.push_back(empty);
        return;
    }
    std::vector<int> local_comp(ntotal, -1);
    std::vector<std::vector<int>> comp_locals(ncomp);
    for (int l = 0; l < nlocal; ++l) {
        local_comp[l] = comp[U.tail(cycles[l][0])];
        comp_locals[local_comp[l]].push_back(l);
    }
    for (size_t k = 0; k < iso_vertex_of_local.size(); ++k) {
        int l = nlocal + static_cast<int>(k);
        local_comp[l] = comp[iso_vertex_of_local[k]];
        comp_locals[local_comp[l]].push_back(l);
    }
    // euler per component
    {
        std::vector<int> cv(ncomp, 0), ce(ncomp, 0), cf(ncomp, 0);
        for (int v = 0; v < static_cast<int>(U.verts.size()); ++v)
            if (U.verts[v].alive) cv[comp[v]]++;
        for (auto& e : U.edges)
            if (e.alive) ce[comp[e.u]]++;
        for (int l = 0; l < ntotal; ++l) cf[local_comp[l]]++;
        for (int c = 0; c < ncomp; ++c)
            if (cv[c] - ce[c] + cf[c] != 2) return;
    }

    // assembly: global faces = groups of locals (one per component max)
    struct Group {
        std::vector<int> locals;
        int p1 = -1, p2 = -1;
    };
    std::vector<Group> groups;
    std::function<void(int)> place = [&](int c) {
        if (c == ncomp) {
            // finalize: unresolved attributions are impossible here
            for (const auto& gp : groups)
                if (gp.p1 == -1 || gp.p2 == -1) return;
            // S.5: a non-active side face must not host the other side's content
            for (const auto& gp : groups) {
                bool dead1 = !S1.faces[gp.p1].active;
                bool dead2 = !S2.faces[gp.p2].active;
                if (!dead1 && !dead2) continue;
                for (int l : gp.locals) {
                    if (l >= nlocal) continue;  // shared isolated vertices exempt
                    for (int d : cycles[l]) {
                        if (dead1 && o1dart[d] == -1) return;  // S2 content in dead S1 face
                        if (dead2 && o2dart[d] == -1) return;
                    }
                }
            }
            EmbeddedGraph cand = U;
            cand.limbo = final_limbo;
            std::sort(cand.limbo.begin(), cand.limbo.end());
            for (const auto& gp : groups) {
                EmbeddedGraph::Face f;
                f.active = S1.faces[gp.p1].active && S2.faces[gp.p2].active;
                for (int l : gp.locals) {
                    EmbeddedGraph::Walk w;
                    if (l >= nlocal)
                        w.isolated = iso_vertex_of_local[l - nlocal];
                    else
                        w.darts = cycles[l];
                    f.walks.push_back(std::move(w));
                }
                cand.faces.push_back(std::move(f));
            }
            if (!cand.coherent(false)) return;
            // S.7: compactify within the sketch
            while (compactify_step(cand)) {
            }
            std::set<int> bag_labels = sketch_labels(cand);
            sketch_cleanup(cand, bag_labels);
            EmbeddedGraph fin = cand.compacted();
            if (!fin.coherent(true)) return;
            note_caps(fin, stats);
            out.push_back(std::move(fin));
            return;
        }
        if (groups.empty()) {
            for (int l : comp_locals[c]) {
                Group gp;
                gp.locals = {l};
                gp.p1 = phi1[l];
                gp.p2 = phi2[l];
                groups.push_back(gp);
            }
            place(c + 1);
            groups.clear();
            return;
        }
        size_t ngroups = groups.size();
        for (size_t gi = 0; gi < ngroups; ++gi) {
            for (int outward : comp_locals[c]) {
                // merge `outward` into groups[gi]; other locals become new groups
                int h1 = groups[gi].p1, h2 = groups[gi].p2;
                int m1 = phi1[outward] == -1 ? h1
                         : (h1 == -1 || h1 == phi1[outward]) ? phi1[outward]
                                                             : -2;
                int m2 = phi2[outward] == -1 ? h2
                         : (h2 == -1 || h2 == phi2[outward]) ? phi2[outward]
                                                             : -2;
                if (m1 == -2 || m2 == -2) continue;
                int old1 = h1, old2 = h2;
                groups[gi].locals.push_back(outward);
                groups[gi].p1 = m1;
                groups[gi].p2 = m2;
                std::vector<std::pair<int, int>> saved;
                for (int l : comp_locals[c]) {
                    if (l == outward) continue;
                    saved.push_back({phi1[l], phi2[l]});
                    if (phi1[l] == -1) phi1[l] = m1;
                    if (phi2[l] == -1) phi2[l] = m2;
                    Group gp;
                    gp.locals = {l};
                    gp.p1 = phi1[l];
                    gp.p2 = phi2[l];
                    groups.push_back(gp);
                }
                place(c + 1);
                groups.resize(ngroups);
                size_t si = 0;
                for (int l : comp_locals[c]) {
                    if (l == outward) continue;
                    phi1[l] = saved[si].first;
                    phi2[l] = saved[si].second;
                    ++si;
                }
                groups[gi].locals.pop_back();
                groups[gi].p1 = old1;
                groups[gi].p2 = old2;
            }
        }
    };
    place(0);
}

// per-component mirror of a sketch (distinct embeddings on the sphere)
EmbeddedGraph mirror_components(const EmbeddedGraph& s, const std::vector<int>& comp,
                                const std::set<int>& which) {
    EmbeddedGraph m = s;
    for (int v = 0; v < static_cast<int>(m.verts.size()); ++v)
        if (m.verts[v].alive && which.count(comp[v]))
            std::reverse(m.rot[v].begin(), m.rot[v].end());
    for (auto& fc : m.faces) {
        if (!fc.alive) continue;
        for (auto& w : fc.walks) {
            if (w.is_isolated()) continue;
            if (!which.count(comp[s.tail(w.darts[0])])) continue;
            std::vector<int> nd;
            for (auto it = w.darts.rbegin(); it != w.darts.rend(); ++it)
                nd.push_back(EmbeddedGraph::alpha(*it));
            w.darts = std::move(nd);
        }
    }
    if (m.track_counters) {
        for (int d = 0; d < m.dart_count(); ++d) {
            if (!m.dart_alive(d)) continue;
            if (which.count(comp[m.tail(d)])) {
                if (d < EmbeddedGraph::alpha(d)) {
                    std::swap(m.counter[d], m.counter[EmbeddedGraph::alpha(d)]);
                }
            }
        }
    }
    return m;
}

// all union sketches of a pair of entry sketches over the same bag
std::vector<EmbeddedGraph> join_sketch_pair(const EmbeddedGraph& s1_in,
                                            const EmbeddedGraph& s2_in,
                                            const std::set<int>& bag, const Graph& g,
                                            const DpOptions& opts, DpStats& stats) {
    std::vector<EmbeddedGraph> out;
    EmbeddedGraph s1 = s1_in, s2 = s2_in;
    std::vector<int> final_limbo;
    // bag-real compatibility pre-pass
    for (int l : bag) {
        bool limbo1 = std::binary_search(s1.limbo.begin(), s1.limbo.end(), l);
        bool limbo2 = std::binary_search(s2.limbo.begin(), s2.limbo.end(), l);
        int v1 = s1.vertex_of_label(l), v2 = s2.vertex_of_label(l);
        auto drop_isolated = [&](EmbeddedGraph& s, int v) {
            int f = s.face_of_isolated(v);
            auto& ws = s.faces[f].walks;
            for (size_t i = 0; i < ws.size(); ++i)
                if (ws[i].is_isolated() && ws[i].isolated == v) {
                    ws.erase(ws.begin() + i);
                    break;
                }
            if (ws.empty()) s.faces[f].alive = false;
            s.verts[v].alive = false;
        };
        if (limbo1 || limbo2) {
            if (opts.hole_free && limbo1 && limbo2) return out;
            if (limbo1 && v2 != -1) {
                if (s2.degree(v2) > 0) return out;
                drop_isolated(s2, v2);
            }
            if (limbo2 && v1 != -1) {
                if (s1.degree(v1) > 0) return out;
                drop_isolated(s1, v1);
            }
            final_limbo.push_back(l);
            auto erase_limbo = [&](EmbeddedGraph& s) {
                auto it = std::find(s.limbo.begin(), s.limbo.end(), l);
                if (it != s.limbo.end()) s.limbo.erase(it);
            };
            erase_limbo(s1);
            erase_limbo(s2);
        }
    }
    s1 = s1.compacted();
    s2 = s2.compacted();
    s1.limbo.clear();
    s2.limbo.clear();

    // flips of s2 components
    auto comp2 = s2.component_ids();
    int nc2 = 0;
    for (int c : comp2) nc2 = std::max(nc2, c + 1);
    JoinSide A;
    A.s = s1;
    A.index();
    // fusion groups by neighbourhood
    for (unsigned mask = 0; mask < (1u << nc2); ++mask) {
        std::set<int> which;
        for (int c = 0; c < nc2; ++c)
            if (mask >> c & 1) which.insert(c);
        JoinSide B;
        B.s = mirror_components(s2, comp2, which);
        B.index();
        // enumerate partial matchings between equal-neighborhood intersections
        std::map<std::vector<int>, std::pair<std::vector<int>, std::vector<int>>> groups;
        for (int u : A.inter_vertices) groups[A.nbhd[u]].first.push_back(u);
        for (int u : B.inter_vertices) groups[B.nbhd[u]].second.push_back(u);
        std::vector<std::pair<std::vector<int>, std::vector<int>>> glist;
        for (auto& [nb, pr] : groups)
            if (!pr.first.empty() && !pr.second.empty()) glist.push_back(pr);
        std::map<int, int> fuse;  // B vertex -> A vertex
        std::function<void(size_t)> enum_fuse = [&](size_t gi) {
            if (gi == glist.size()) {
                join_build(A, B, bag, g, fuse, final_limbo, opts, stats, out);
                return;
            }
            const auto& [as, bs] = glist[gi];
            // all partial injections bs -> as
            std::function<void(size_t, std::set<int>&)> rec = [&](size_t bi,
                                                                  std::set<int>& used) {
                if (bi == bs.size()) {
                    enum_fuse(gi + 1);
                    return;
                }
                rec(bi + 1, used);  // unmatched
                for (int a : as) {
                    if (used.count(a)) continue;
                    used.insert(a);
                    fuse[bs[bi]] = a;
                    rec(bi + 1, used);
                    fuse.erase(bs[bi]);
                    used.erase(a);
                }
            };
            std::set<int> used;
            rec(0, used);
        };
        enum_fuse(0);
    }
    return out;
}

// certificate-mode witness gluing: enumerate glued embeddings, keep those
// whose sketch matches an accepted union key
void join_witnesses(const RecordEntry& e1, const RecordEntry& e2, const std::set<int>& bag,
                    const std::set<std::string>& accepted, const DpOptions& opts,
                    DpStats& stats, Record& out) {
    const EmbeddedGraph& W1 = e1.witness;
    const EmbeddedGraph& W2in = e2.witness;
    // anchored intersections by neighborhood
    auto anchored = [&](const EmbeddedGraph& w) {
        std::map<std::vector<int>, std::vector<int>> g;
        for (int v = 0; v < static_cast<int>(w.verts.size()); ++v) {
            if (!w.verts[v].alive || w.verts[v].label >= 0) continue;
            std::vector<int> nb;
            bool all = true;
            for (int d : w.rot[v]) {
                int lbl = w.verts[w.head(d)].label;
                if (!bag.count(lbl)) all = false;
                nb.push_back(lbl);
            }
            if (!all) continue;
            std::sort(nb.begin(), nb.end());
            g[nb].push_back(v);
        }
        return g;
    };
    auto comp2 = W2in.component_ids();
    int nc2 = 0;
    for (int c : comp2) nc2 = std::max(nc2, c + 1);
    long budget = kEnumerationCap;
    for (unsigned mask = 0; mask < (1u << nc2); ++mask) {
        std::set<int> which;
        for (int c = 0; c < nc2; ++c)
            if (mask >> c & 1) which.insert(c);
        EmbeddedGraph W2 = mirror_components(W2in, comp2, which);
        auto g1 = anchored(W1), g2 = anchored(W2);
        std::vector<std::pair<std::vector<int>, std::vector<int>>> glist;
        for (auto& [nb, vs] : g1)
            if (g2.count(nb)) glist.push_back({vs, g2[nb]});
        std::map<int, int> fuse;
        std::function<void(size_t)> enum_fuse = [&](size_t gi) {
            if (budget < 0) return;
            if (gi == glist.size()) {
                JoinSide A, B;
                A.s = W1;
                B.s = W2;
                A.index();
                B.index();
                DpOptions wopts = opts;
                wopts.hole_free = false;  // counters not tracked on witnesses
                std::vector<EmbeddedGraph> unions;
                join_build_witness(A, B, bag, fuse, wopts, unions, budget);
                for (auto& wu : unions) {
                    if (!wu.coherent(false)) continue;
                    auto sk = compute_sketch(wu, bag, opts.hole_free);
                    if (!accepted.count(sk.key)) continue;
                    RecordEntry e;
                    e.witness = wu.compacted();
                    e.witness.clear_active_marks();
                    e.sketch = std::move(sk.sketch);
                    e.key = sk.key;
                    e.provenance = "join<-" + e1.key + "+" + e2.key;
                    note_caps(e.sketch, stats);
                    insert_entry(out, std::move(e), opts);
                }
                return;
            }
            const auto& [as, bs] = glist[gi];
            std::function<void(size_t, std::set<int>&)> rec = [&](size_t bi,
                                                                  std::set<int>& used) {
                if (bi == bs.size()) {
                    enum_fuse(gi + 1);
                    return;
                }
                rec(bi + 1, used);
                for (int a : as) {
                    if (used.count(a)) continue;
                    used.insert(a);
                    fuse[bs[bi]] = a;
                    rec(bi + 1, used);
                    fuse.erase(bs[bi]);
                    used.erase(a);
                }
            };
            std::set<int> used;
            rec(0, used);
        };
        enum_fuse(0);
    }
    if (budget < 0) stats.enumeration_caps_hit++;
}

}  // namespace

Record op_join(const Record& r1, const Record& r2, const std::set<int>& bag, const Graph& g,
               const DpOptions& opts, DpStats& stats) {
    Record out;
    for (const auto& [k1, e1] : r1) {
        for (const auto& [k2, e2] : r2) {
            auto unions = join_sketch_pair(e1.sketch, e2.sketch, bag, g, opts, stats);
            if (!opts.carry_witness) {
                for (auto& u : unions) {
                    RecordEntry e;
                    e.sketch = std::move(u);
                    e.key = e.sketch.canonical_key();
                    e.provenance = "join<-" + k1 + "+" + k2;
                    insert_entry(out, std::move(e), opts);
                }
            } else {
                std::set<std::string> accepted;
                for (auto& u : unions) accepted.insert(u.canonical_key());
                if (accepted.empty()) continue;
                join_witnesses(e1, e2, bag, accepted, opts, stats, out);
            }
        }
    }
    stats.note_record(out);
    return out;
}

// ---------------------------------------------------------------------------
// evaluation drivers
// ---------------------------------------------------------------------------

namespace {

std::set<int> bag_set(const std::vector<int>& bag) { return {bag.begin(), bag.end()}; }

bool root_entry_ok(const RecordEntry& e, const DpOptions& opts) {
    if (!opts.hole_free) return true;
    if (opts.carry_witness) return check_hole_free(e.witness);
    // final retirement: any surviving active boundary must be a closed 4-walk
    const EmbeddedGraph& s = e.sketch;
    for (const auto& fc : s.faces) {
        if (!fc.alive || !fc.active) continue;
        if (fc.walks.size() != 1 || fc.walks[0].is_isolated()) return false;
        int sum = 0;
        for (int d : fc.walks[0].darts) sum += s.dart_counter(d);
        if (sum != 4) return false;
    }
    return true;
}

}  // namespace

RunResult dp_run(const Graph& g, const NiceTreeDecomposition& ntd, const DpOptions& opts,
                 const std::function<void(int, const Record&)>& per_bag) {
    RunResult res;
    res.stats.omega = ntd.width() + 1;
    std::map<int, Record> records;
    auto order = ntd.topo_order();
    for (int node : order) {
        const NiceNode& nd = ntd.nodes[node];
        Record rec;
        switch (nd.kind) {
            case NodeKind::Leaf:
                rec = init_leaf(nd.vertex, opts);
                break;
            case NodeKind::Introduce:
                rec = op_introduce(records[nd.children[0]], nd.vertex, bag_set(nd.bag), g, opts,
                                   res.stats);
                records.erase(nd.children[0]);
                break;
            case NodeKind::Forget:
                rec = op_forget(records[nd.children[0]], nd.vertex, bag_set(nd.bag), opts,
                                res.stats);
                records.erase(nd.children[0]);
                break;
            case NodeKind::Join:
                rec = op_join(records[nd.children[0]], records[nd.children[1]], bag_set(nd.bag),
                              g, opts, res.stats);
                records.erase(nd.children[0]);
                records.erase(nd.children[1]);
                break;
        }
        if (per_bag) per_bag(node, rec);
        bool empty = rec.empty();
        records[node] = std::move(rec);
        if (empty) return res;  // cannot recover from an empty record
    }
    Record& root = records[ntd.root];
    const RecordEntry* best = nullptr;
    for (auto& [k, e] : root) {
        if (!root_entry_ok(e, opts)) continue;
        if (!best) best = &e;
        res.yes = true;
        if (!opts.carry_witness) break;
        if (opts.carry_witness && witness_preferred(e.witness, best->witness)) best = &e;
    }
    if (res.yes && opts.carry_witness && best) res.witness = best->witness;
    return res;
}

std::optional<int> min_k(const Graph& g, const NiceTreeDecomposition& ntd, bool hole_free,
                         bool certificate, DpStats* stats) {
    int hi = ntd.width() + 1;
    auto probe = [&](int k) {
        DpOptions opts{k, hole_free, certificate};
        auto r = dp_run(g, ntd, opts);
        if (stats) {
            stats->max_record_size = std::max(stats->max_record_size, r.stats.max_record_size);
            stats->total_entries += r.stats.total_entries;
            stats->sketch_cap_violations += r.stats.sketch_cap_violations;
            stats->enumeration_caps_hit += r.stats.enumeration_caps_hit;
            stats->omega = std::max(stats->omega, r.stats.omega);
        }
        return r.yes;
    };
    if (!probe(hi)) {
        int fallback = g.n - 1;
        if (fallback > hi && probe(fallback)) return fallback;
        return std::nullopt;
    }
    int lo = 1;
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (probe(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

namespace {

// restriction of a decomposition to a block: intersect bags, contract empties
TreeDecomposition restrict_td(const TreeDecomposition& td, const std::set<int>& verts,
                              const std::map<int, int>& relabel) {
    int nb = static_cast<int>(td.bags.size());
    std::vector<std::vector<int>> rb(nb);
    for (int i = 0; i < nb; ++i)
        for (int v : td.bags[i])
            if (verts.count(v)) rb[i].push_back(relabel.at(v));
    // root at a nonempty bag, contract empty bags upward
    std::vector<std::vector<int>> adj(nb);
    for (auto [a, b] : td.tree_edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    int root = -1;
    for (int i = 0; i < nb && root == -1; ++i)
        if (!rb[i].empty()) root = i;
    TreeDecomposition out;
    if (root == -1) return out;
    std::vector<int> rep(nb, -1), new_id(nb, -1);
    std::vector<std::pair<int, int>> stack{{root, -1}};
    std::vector<std::pair<int, int>> ord;
    while (!stack.empty()) {
        auto [v, p] = stack.back();
        stack.pop_back();
        ord.push_back({v, p});
        for (int w : adj[v])
            if (w != p) stack.push_back({w, v});
    }
    for (auto [v, p] : ord) {
        if (!rb[v].empty()) {
            new_id[v] = static_cast<int>(out.bags.size());
            out.bags.push_back(rb[v]);
            rep[v] = v;
            if (p != -1) {
                int rp = rep[p];
                if (rp != v) out.tree_edges.push_back({new_id[rp], new_id[v]});
            }
        } else {
            rep[v] = p == -1 ? root : rep[p];
        }
    }
    // fix rep chains: empty bags inherited parent's rep before parent was set?
    // ord is preorder so parents are processed first; rep[p] is final.
    return out;
}

EmbeddedGraph glue_block_witnesses(const std::vector<EmbeddedGraph>& parts) {
    std::vector<int> labels;
    std::map<int, int> by_label;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> rot;
    auto get_vertex = [&](int label) {
        if (label >= 0 && by_label.count(label)) return by_label[label];
        int id = static_cast<int>(labels.size());
        labels.push_back(label);
        rot.emplace_back();
        if (label >= 0) by_label[label] = id;
        return id;
    };
    for (const auto& p : parts) {
        std::vector<int> vmap(p.verts.size(), -1), emap(p.edges.size(), -1);
        for (int v = 0; v < static_cast<int>(p.verts.size()); ++v)
            if (p.verts[v].alive) vmap[v] = get_vertex(p.verts[v].label);
        for (int e = 0; e < static_cast<int>(p.edges.size()); ++e) {
            if (!p.edges[e].alive) continue;
            emap[e] = static_cast<int>(edges.size());
            edges.push_back({vmap[p.edges[e].u], vmap[p.edges[e].v]});
        }
        for (int v = 0; v < static_cast<int>(p.verts.size()); ++v) {
            if (!p.verts[v].alive) continue;
            for (int d : p.rot[v]) rot[vmap[v]].push_back(2 * emap[d >> 1] + (d & 1));
        }
    }
    return assemble_embedded(labels, edges, rot, false);
}

}  // namespace

RecognizeResult recognize(const Graph& g, const std::optional<TreeDecomposition>& td,
                          std::optional<int> k, bool hole_free, bool certificate) {
    RecognizeResult res;
    if (g.n == 0) return res;
    auto run_one = [&](const Graph& sub, const std::optional<TreeDecomposition>& sub_td)
        -> std::pair<std::optional<int>, std::optional<EmbeddedGraph>> {
        TreeDecomposition t = sub_td ? *sub_td : compute_td(sub);
        auto ntd = make_nice(t);
        if (k) {
            DpOptions opts{*k, hole_free, certificate};
            auto r = dp_run(sub, ntd, opts);
            res.stats.max_record_size =
                std::max(res.stats.max_record_size, r.stats.max_record_size);
            res.stats.total_entries += r.stats.total_entries;
            res.stats.sketch_cap_violations += r.stats.sketch_cap_violations;
            res.stats.enumeration_caps_hit += r.stats.enumeration_caps_hit;
            res.stats.omega = std::max(res.stats.omega, r.stats.omega);
            if (!r.yes) return {std::nullopt, std::nullopt};
            return {*k, r.witness};
        }
        auto mk = min_k(sub, ntd, hole_free, certificate, &res.stats);
        if (!mk) return {std::nullopt, std::nullopt};
        std::optional<EmbeddedGraph> w;
        if (certificate) {
            DpOptions opts{*mk, hole_free, true};
            w = dp_run(sub, ntd, opts).witness;
        }
        return {mk, w};
    };

    if (hole_free) {
        if (!is_biconnected(g)) return res;
        auto [kk, w] = run_one(g, td);
        if (!kk) return res;
        res.yes = true;
        res.k = *kk;
        res.witness = w;
        return res;
    }
    auto blocks = biconnected_components(g);
    int best_k = 1;
    std::vector<EmbeddedGraph> parts;
    for (const auto& b : blocks.blocks) {
        if (b.edges.empty()) {
            if (certificate) parts.push_back(single_vertex_sketch(b.vertices[0], false));
            continue;
        }
        std::map<int, int> relabel;
        for (size_t i = 0; i < b.vertices.size(); ++i) relabel[b.vertices[i]] = static_cast<int>(i);
        Graph sub(static_cast<int>(b.vertices.size()));
        for (auto [u, v] : b.edges) sub.add_edge(relabel[u], relabel[v]);
        std::optional<TreeDecomposition> sub_td;
        if (td) {
            std::set<int> vs(b.vertices.begin(), b.vertices.end());
            auto r = restrict_td(*td, vs, relabel);
            if (!r.bags.empty()) sub_td = r;
        }
        auto [kk, w] = run_one(sub, sub_td);
        if (!kk) return res;
        best_k = std::max(best_k, *kk);
        if (certificate && w) {
            // restore original labels
            EmbeddedGraph wb = *w;
            for (auto& v : wb.verts)
                if (v.alive && v.label >= 0) v.label = b.vertices[v.label];
            parts.push_back(std::move(wb));
        }
    }
    res.yes = true;
    res.k = k ? *k : best_k;
    if (certificate) res.witness = glue_block_witnesses(parts);
    return res;
}

}  // namespace mapwit
