#include "mapwit/planarity.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace mapwit {

namespace {

// ---- DMP on one biconnected simple block ----
//
// Vertices are original ids; edges are (u,v) pairs local to the block. The
// result is a rotation system over block-local edge indices.
struct Dmp {
    int n;  // max vertex id + 1 (sparse ok)
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> adj;        // vertex -> incident edge ids
    std::vector<char> embedded_edge;
    std::vector<char> in_h;                   // vertex in embedded subgraph
    std::vector<std::vector<int>> rot;        // per vertex, darts
    std::vector<std::vector<int>> face_darts; // dart cycles
    std::vector<std::set<int>> face_verts;

    int tail(int d) const { return (d & 1) ? edges[d >> 1].second : edges[d >> 1].first; }
    int head(int d) const { return (d & 1) ? edges[d >> 1].first : edges[d >> 1].second; }

    explicit Dmp(int n_, std::vector<std::pair<int, int>> es)
        : n(n_), edges(std::move(es)), adj(n_), embedded_edge(edges.size(), 0), in_h(n_, 0),
          rot(n_) {
        for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
            adj[edges[e].first].push_back(e);
            adj[edges[e].second].push_back(e);
        }
    }

    void add_face(std::vector<int> darts) {
        std::set<int> vs;
        for (int d : darts) vs.insert(tail(d));
        face_darts.push_back(std::move(darts));
        face_verts.push_back(std::move(vs));
    }

    bool find_cycle(std::vector<int>& cyc_vertices, std::vector<int>& cyc_edges) {
        int start = -1;
        for (int v = 0; v < n; ++v)
            if (!adj[v].empty()) {
                start = v;
                break;
            }
        if (start == -1) return false;
        // true DFS with an explicit stack so ancestors are on the stack
        struct Frame {
            int v;
            int via_edge;
            size_t idx = 0;
        };
        std::vector<char> on_stack(n, 0), seen(n, 0);
        std::vector<Frame> st{{start, -1}};
        seen[start] = on_stack[start] = 1;
        while (!st.empty()) {
            Frame& f = st.back();
            if (f.idx >= adj[f.v].size()) {
                on_stack[f.v] = 0;
                st.pop_back();
                continue;
            }
            int e = adj[f.v][f.idx++];
            if (e == f.via_edge) continue;
            int w = edges[e].first == f.v ? edges[e].second : edges[e].first;
            if (!seen[w]) {
                seen[w] = on_stack[w] = 1;
                st.push_back({w, e});
            } else if (on_stack[w]) {
                // stack segment from w to f.v plus e closes the cycle
                size_t k = 0;
                while (st[k].v != w) ++k;
                cyc_vertices.clear();
                cyc_edges.clear();
                for (size_t i = k; i < st.size(); ++i) {
                    cyc_vertices.push_back(st[i].v);
                    if (i > k) cyc_edges.push_back(st[i].via_edge);
                }
                cyc_edges.push_back(e);
                return true;
            }
        }
        return false;
    }

    void embed_initial_cycle(const std::vector<int>& vs, const std::vector<int>& es) {
        int l = static_cast<int>(vs.size());
        std::vector<int> fwd(l);
        for (int i = 0; i < l; ++i) {
            int e = es[i];
            embedded_edge[e] = 1;
            fwd[i] = 2 * e + (edges[e].first == vs[i] ? 0 : 1);
        }
        for (int i = 0; i < l; ++i) {
            in_h[vs[i]] = 1;
            rot[vs[i]] = {fwd[i], EmbeddedGraph::alpha(fwd[(i + l - 1) % l])};
        }
        add_face(fwd);
        std::vector<int> back;
        for (int i = l - 1; i >= 0; --i) back.push_back(EmbeddedGraph::alpha(fwd[i]));
        add_face(back);
    }

    // fragment = set of pending edges + attachment vertices
    struct Fragment {
        std::vector<int> frag_edges;
        std::vector<int> attachments;
    };

    std::vector<Fragment> fragments() const {
        std::vector<Fragment> out;
        std::vector<char> edge_used(edges.size(), 0);
        // chords
        for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
            if (embedded_edge[e] || edge_used[e]) continue;
            auto [u, v] = edges[e];
            if (in_h[u] && in_h[v]) {
                edge_used[e] = 1;
                out.push_back({{e}, {std::min(u, v), std::max(u, v)}});
            }
        }
        // components of G - V(H)
        std::vector<char> seen(n, 0);
        for (int s = 0; s < n; ++s) {
            if (in_h[s] || seen[s] || adj[s].empty()) continue;
            Fragment f;
            std::set<int> att;
            std::vector<int> stack{s};
            seen[s] = 1;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int e : adj[v]) {
                    if (embedded_edge[e] || edge_used[e]) continue;
                    edge_used[e] = 1;
                    f.frag_edges.push_back(e);
                    int w = edges[e].first == v ? edges[e].second : edges[e].first;
                    if (in_h[w])
                        att.insert(w);
                    else if (!seen[w]) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
                }
            }
            f.attachments.assign(att.begin(), att.end());
            out.push_back(std::move(f));
        }
        return out;
    }

    // path between two attachments through the fragment
    void fragment_path(const Fragment& f, std::vector<int>& pverts, std::vector<int>& pedges) {
        if (f.frag_edges.size() == 1) {
            int e = f.frag_edges[0];
            pverts = {edges[e].first, edges[e].second};
            pedges = {e};
            return;
        }
        std::map<int, std::pair<int, int>> par;  // vertex -> (prev vertex, edge)
        int a = f.attachments[0];
        std::vector<int> queue{a};
        par[a] = {-1, -1};
        std::set<int> fset(f.frag_edges.begin(), f.frag_edges.end());
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int v = queue[qi];
            if (v != a && in_h[v]) {
                // reached another attachment: build path
                pverts.clear();
                pedges.clear();
                int x = v;
                while (x != -1) {
                    pverts.push_back(x);
                    auto [pv, pe] = par[x];
                    if (pe != -1) pedges.push_back(pe);
                    x = pv;
                }
                std::reverse(pverts.begin(), pverts.end());
                std::reverse(pedges.begin(), pedges.end());
                return;
            }
            for (int e : adj[v]) {
                if (!fset.count(e)) continue;
                int w = edges[e].first == v ? edges[e].second : edges[e].first;
                if (par.count(w)) continue;
                par[w] = {v, e};
                queue.push_back(w);
            }
        }
        throw std::logic_error("fragment path not found");
    }

    void embed_path(int face_idx, const std::vector<int>& pverts, const std::vector<int>& pedges) {
        auto ds = face_darts[face_idx];
        int a = pverts.front(), b = pverts.back();
        int ia = -1, ib = -1;
        for (int i = 0; i < static_cast<int>(ds.size()); ++i) {
            if (tail(ds[i]) == a && ia == -1) ia = i;
            if (tail(ds[i]) == b && ib == -1) ib = i;
        }
        std::vector<int> fwd;  // darts a -> b along the path
        for (size_t i = 0; i < pedges.size(); ++i) {
            int e = pedges[i];
            embedded_edge[e] = 1;
            fwd.push_back(2 * e + (edges[e].first == pverts[i] ? 0 : 1));
        }
        // rotations: internal path vertices
        for (size_t i = 1; i + 1 < pverts.size(); ++i) {
            in_h[pverts[i]] = 1;
            rot[pverts[i]] = {fwd[i], EmbeddedGraph::alpha(fwd[i - 1])};
        }
        // endpoint a: insert first dart before ds[ia] in rot[a]
        {
            auto& r = rot[a];
            auto it = std::find(r.begin(), r.end(), ds[ia]);
            r.insert(it, fwd.front());
        }
        // endpoint b: insert alpha(last dart) before ds[ib] in rot[b]
        {
            auto& r = rot[b];
            auto it = std::find(r.begin(), r.end(), ds[ib]);
            r.insert(it, EmbeddedGraph::alpha(fwd.back()));
        }
        // split face
        int l = static_cast<int>(ds.size());
        std::vector<int> f1 = fwd;
        for (int i = ib; i != ia; i = (i + 1) % l) f1.push_back(ds[i]);
        std::vector<int> f2;
        for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) f2.push_back(EmbeddedGraph::alpha(*it));
        for (int i = ia; i != ib; i = (i + 1) % l) f2.push_back(ds[i]);
        face_darts.erase(face_darts.begin() + face_idx);
        face_verts.erase(face_verts.begin() + face_idx);
        add_face(std::move(f1));
        add_face(std::move(f2));
    }

    bool run() {
        std::vector<int> cv, ce;
        if (!find_cycle(cv, ce)) throw std::logic_error("dmp: no cycle in biconnected block");
        embed_initial_cycle(cv, ce);
        while (true) {
            auto frs = fragments();
            if (frs.empty()) break;
            int best = -1, best_count = -1, best_face = -1;
            for (int i = 0; i < static_cast<int>(frs.size()); ++i) {
                int cnt = 0, ff = -1;
                for (int f = 0; f < static_cast<int>(face_darts.size()); ++f) {
                    bool ok = true;
                    for (int aVert : frs[i].attachments)
                        if (!face_verts[f].count(aVert)) {
                            ok = false;
                            break;
                        }
                    if (ok) {
                        ++cnt;
                        if (ff == -1) ff = f;
                    }
                }
                if (cnt == 0) return false;
                if (best == -1 || cnt < best_count) {
                    best = i;
                    best_count = cnt;
                    best_face = ff;
                }
            }
            std::vector<int> pv, pe;
            fragment_path(frs[best], pv, pe);
            embed_path(best_face, pv, pe);
        }
        return true;
    }
};

}  // namespace

std::optional<Rotations> planar_embed(int n, const std::vector<std::pair<int, int>>& edges) {
    for (auto [u, v] : edges)
        if (u == v) throw std::invalid_argument("self-loop");

    // collapse parallels; remember multiplicities
    std::map<std::pair<int, int>, std::vector<int>> par;  // norm pair -> edge ids
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        auto [u, v] = edges[e];
        par[{std::min(u, v), std::max(u, v)}].push_back(e);
    }
    Graph simple(n);
    std::map<std::pair<int, int>, int> rep;  // norm pair -> representative edge id
    for (auto& [uv, ids] : par) {
        simple.add_edge(uv.first, uv.second);
        rep[uv] = ids.front();
    }
    if (n >= 3 && static_cast<int>(simple.edges.size()) > 3 * n - 6) return std::nullopt;

    Rotations out;
    out.rot.assign(n, {});
    auto blocks = biconnected_components(simple);
    for (const auto& b : blocks.blocks) {
        if (b.edges.empty()) continue;  // isolated vertex
        if (b.edges.size() == 1) {
            auto [u, v] = b.edges[0];
            int e = rep[{std::min(u, v), std::max(u, v)}];
            int d = 2 * e + (edges[e].first == u ? 0 : 1);
            out.rot[u].push_back(d);
            out.rot[v].push_back(EmbeddedGraph::alpha(d));
            continue;
        }
        // block-local edge list using representative original edge ids
        std::vector<std::pair<int, int>> bes;
        std::vector<int> orig;
        for (auto [u, v] : b.edges) {
            bes.push_back({u, v});
            orig.push_back(rep[{std::min(u, v), std::max(u, v)}]);
        }
        Dmp dmp(n, bes);
        if (!dmp.run()) return std::nullopt;
        for (int v : b.vertices)
            for (int d : dmp.rot[v]) {
                int e = orig[d >> 1];
                // keep the orientation of the original edge
                int local_tail = dmp.tail(d);
                int nd = 2 * e + (edges[e].first == local_tail ? 0 : 1);
                out.rot[v].push_back(nd);
            }
    }
    // re-insert parallel copies next to their representative
    for (auto& [uv, ids] : par) {
        if (ids.size() == 1) continue;
        int e0 = ids.front();
        for (size_t i = 1; i < ids.size(); ++i) {
            int e = ids[i];
            auto place = [&](int vtx, int rep_dart, int new_dart, bool after) {
                auto& r = out.rot[vtx];
                auto it = std::find(r.begin(), r.end(), rep_dart);
                if (it == r.end()) throw std::logic_error("parallel placement lost representative");
                r.insert(after ? it + 1 : it, new_dart);
            };
            int u = edges[e0].first, v = edges[e0].second;
            int d0u = 2 * e0, d0v = 2 * e0 + 1;
            int du = 2 * e + (edges[e].first == u ? 0 : 1);
            place(u, d0u, du, true);
            place(v, d0v, EmbeddedGraph::alpha(du), false);
        }
    }
    return out;
}

void cyclic_permutations(const std::vector<int>& items, std::vector<std::vector<int>>& out) {
    if (items.size() <= 2) {
        out.push_back(items);
        return;
    }
    std::vector<int> rest(items.begin() + 1, items.end());
    std::sort(rest.begin(), rest.end());
    do {
        std::vector<int> full{items[0]};
        full.insert(full.end(), rest.begin(), rest.end());
        out.push_back(full);
    } while (std::next_permutation(rest.begin(), rest.end()));
}

void enumerate_position_systems(const std::vector<int>& labels,
                                const std::vector<std::pair<int, int>>& edges,
                                const std::vector<std::vector<int>>& rot,
                                const std::function<void(EmbeddedGraph&)>& sink) {
    EmbeddedGraph base;
    for (int l : labels) base.add_vertex(l);
    for (auto [u, v] : edges) base.add_edge(u, v);
    base.rot = rot;
    auto comp = base.component_ids();
    int ncomp = 0;
    for (int c : comp) ncomp = std::max(ncomp, c + 1);
    // local faces per component (dart walks; isolated vertices give one walk)
    auto cycles = trace_face_cycles(base);
    std::vector<std::vector<EmbeddedGraph::Walk>> local(ncomp);
    for (auto& cyc : cycles) {
        EmbeddedGraph::Walk w;
        w.darts = cyc;
        local[comp[base.tail(cyc[0])]].push_back(std::move(w));
    }
    for (int v = 0; v < static_cast<int>(base.verts.size()); ++v)
        if (base.degree(v) == 0) {
            EmbeddedGraph::Walk w;
            w.isolated = v;
            local[comp[v]].push_back(std::move(w));
        }
    // Euler per component
    std::vector<int> cv(ncomp, 0), ce(ncomp, 0);
    for (int v = 0; v < static_cast<int>(base.verts.size()); ++v) cv[comp[v]]++;
    for (auto& e : base.edges) ce[comp[e.u]]++;
    for (int c = 0; c < ncomp; ++c)
        if (cv[c] - ce[c] + static_cast<int>(local[c].size()) != 2) return;  // not planar

    // assemble: faces = vector of vector of (comp, local face idx)
    std::vector<std::vector<std::pair<int, int>>> global;
    std::function<void(int)> place = [&](int c) {
        if (c == ncomp) {
            EmbeddedGraph g = base;
            for (auto& gf : global) {
                EmbeddedGraph::Face f;
                for (auto [ci, li] : gf) f.walks.push_back(local[ci][li]);
                g.faces.push_back(std::move(f));
            }
            sink(g);
            return;
        }
        if (c == 0) {
            for (size_t li = 0; li < local[0].size(); ++li)
                global.push_back({{0, static_cast<int>(li)}});
            place(1);
            global.clear();
            return;
        }
        // choose a host face and this component's outward local face
        size_t nglobal = global.size();
        for (size_t gf = 0; gf < nglobal; ++gf) {
            for (size_t li = 0; li < local[c].size(); ++li) {
                global[gf].push_back({c, static_cast<int>(li)});
                for (size_t lj = 0; lj < local[c].size(); ++lj)
                    if (lj != li) global.push_back({{c, static_cast<int>(lj)}});
                place(c + 1);
                global.resize(nglobal);
                global[gf].pop_back();
            }
        }
    };
    if (ncomp == 0) {
        EmbeddedGraph g = base;
        sink(g);
        return;
    }
    place(0);
}

EmbeddedGraph assemble_embedded(const std::vector<int>& labels,
                                const std::vector<std::pair<int, int>>& edges,
                                const std::vector<std::vector<int>>& rot, bool track_counters) {
    EmbeddedGraph g;
    g.track_counters = track_counters;
    for (int lbl : labels) g.add_vertex(lbl);
    for (auto [u, v] : edges) g.add_edge(u, v);
    g.rot = rot;
    auto comp = g.component_ids();
    int ncomp = 0;
    for (int c : comp) ncomp = std::max(ncomp, c + 1);

    auto cycles = trace_face_cycles(g);
    // group traced cycles per component, in traced order
    std::vector<std::vector<std::vector<int>>> per_comp(ncomp);
    for (auto& cyc : cycles) per_comp[comp[g.tail(cyc[0])]].push_back(cyc);
    for (int v = 0; v < static_cast<int>(g.verts.size()); ++v)
        if (g.degree(v) == 0) per_comp[comp[v]].push_back({-1 - v});  // isolated marker

    EmbeddedGraph::Face outer;
    for (int c = 0; c < ncomp; ++c) {
        for (size_t i = 0; i < per_comp[c].size(); ++i) {
            EmbeddedGraph::Walk w;
            if (per_comp[c][i][0] < 0)
                w.isolated = -1 - per_comp[c][i][0];
            else
                w.darts = per_comp[c][i];
            if (i == 0) {
                outer.walks.push_back(std::move(w));
            } else {
                EmbeddedGraph::Face f;
                f.walks.push_back(std::move(w));
                g.faces.push_back(std::move(f));
            }
        }
    }
    if (!outer.walks.empty()) g.faces.insert(g.faces.begin(), std::move(outer));
    return g;
}

}  // namespace mapwit
