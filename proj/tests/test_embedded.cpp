#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mapwit/planarity.hpp"

using namespace mapwit;

namespace {

EmbeddedGraph embed(const std::vector<int>& labels, const std::vector<std::pair<int, int>>& es) {
    auto rot = planar_embed(static_cast<int>(labels.size()), es);
    REQUIRE(rot.has_value());
    auto g = assemble_embedded(labels, es, rot->rot, false);
    g.validate(false);
    return g;
}

int face_count(const EmbeddedGraph& g) {
    int c = 0;
    for (const auto& f : g.faces)
        if (f.alive) ++c;
    return c;
}

}  // namespace

TEST_CASE("face tracing triangle and star") {
    auto tri = embed({0, 1, 2}, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(face_count(tri) == 2);
    for (const auto& f : tri.faces) {
        REQUIRE(f.walks.size() == 1);
        CHECK(f.walks[0].darts.size() == 3);
    }

    auto star = embed({0, 1, 2, 3}, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(face_count(star) == 1);
    CHECK(star.faces[0].walks.size() == 1);
    CHECK(star.faces[0].walks[0].darts.size() == 6);
}

TEST_CASE("two disjoint edges share a face") {
    auto g = embed({0, 1, 2, 3}, {{0, 1}, {2, 3}});
    // a single edge bounds one face; both components share the sphere face
    REQUIRE(face_count(g) == 1);
    bool found = false;
    for (const auto& f : g.faces)
        if (f.alive && f.walks.size() == 2) found = true;
    CHECK(found);
}

TEST_CASE("homotopic pairs") {
    auto digon = embed({0, 1}, {{0, 1}, {0, 1}});
    CHECK(digon.homotopic_pairs().size() == 1);

    auto tri = embed({0, 1, 2}, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(tri.homotopic_pairs().empty());

    // on the sphere three mutually parallel edges bound three digon faces
    // (V - E + F = 2 forces F = 3, each a 2-dart walk)
    auto triple = embed({0, 1}, {{0, 1}, {0, 1}, {0, 1}});
    CHECK(triple.homotopic_pairs().size() == 3);
}

TEST_CASE("quadrangulation and biconnectivity") {
    // cube graph Q3
    std::vector<std::pair<int, int>> cube{{0, 4}, {0, 5}, {0, 6}, {1, 4}, {1, 5}, {1, 7},
                                          {2, 4}, {2, 6}, {2, 7}, {3, 5}, {3, 6}, {3, 7}};
    auto q = embed({0, 1, 2, 3, -1, -1, -1, -1}, cube);
    CHECK(q.is_quadrangulation());
    CHECK(q.is_biconnected_graph());

    auto c6 = embed({0, 1, 2, 3, 4, 5},
                    {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}});
    CHECK(!c6.is_quadrangulation());
    CHECK(c6.is_biconnected_graph());

    auto path = embed({0, -1, 1}, {{0, 1}, {1, 2}});
    CHECK(!path.is_biconnected_graph());
    // its single face walk has 4 darts but it is not a quadrangulation of a
    // biconnected graph; is_quadrangulation only checks faces
    CHECK(path.is_quadrangulation());
}

TEST_CASE("mirror involution and canonical key") {
    auto g = embed({0, 1, 2, 3}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    auto m = g.mirrored();
    m.validate(false);
    CHECK(g.canonical_key() == m.canonical_key());
    auto mm = m.mirrored();
    CHECK(mm.canonical_key() == g.canonical_key());
}

TEST_CASE("canonical key ignores intersection identity, keeps real labels") {
    // a-u-b with u intersection, built in two different vertex orders
    EmbeddedGraph g1;
    int a1 = g1.add_vertex(7), u1 = g1.add_vertex(-1), b1 = g1.add_vertex(9);
    int e1 = g1.add_edge(a1, u1), f1 = g1.add_edge(u1, b1);
    g1.rot[a1] = {2 * e1};
    g1.rot[u1] = {2 * e1 + 1, 2 * f1};
    g1.rot[b1] = {2 * f1 + 1};
    EmbeddedGraph::Face fc1;
    EmbeddedGraph::Walk w1;
    w1.darts = {2 * e1, 2 * f1, 2 * f1 + 1, 2 * e1 + 1};
    fc1.walks.push_back(w1);
    g1.faces.push_back(fc1);
    // trace order check
    g1.validate(false);

    EmbeddedGraph g2;
    int u2 = g2.add_vertex(-1), b2 = g2.add_vertex(9), a2 = g2.add_vertex(7);
    int e2 = g2.add_edge(u2, a2), f2 = g2.add_edge(b2, u2);
    g2.rot[a2] = {2 * e2 + 1};
    g2.rot[u2] = {2 * e2, 2 * f2 + 1};
    g2.rot[b2] = {2 * f2};
    EmbeddedGraph::Face fc2;
    EmbeddedGraph::Walk w2;
    w2.darts = {2 * e2 + 1, 2 * e2, 2 * f2 + 1, 2 * f2};
    // fix the walk to be an actual phi cycle
    fc2.walks.clear();
    w2.darts.clear();
    {
        std::vector<char> seen(g2.dart_count(), 0);
        for (int d = 0; d < g2.dart_count(); ++d) {
            if (seen[d]) continue;
            EmbeddedGraph::Walk w;
            int x = d;
            do {
                seen[x] = 1;
                w.darts.push_back(x);
                x = g2.phi(x);
            } while (x != d);
            fc2.walks.push_back(w);
        }
    }
    g2.faces.push_back(fc2);
    g2.validate(false);
    CHECK(g1.canonical_key() == g2.canonical_key());

    // different real labels give different keys
    EmbeddedGraph g3 = g1;
    g3.verts[0].label = 8;
    CHECK(g3.canonical_key() != g1.canonical_key());
}

TEST_CASE("canonical key distinguishes digon from single edge") {
    auto digon = embed({0, 1}, {{0, 1}, {0, 1}});
    auto single = embed({0, 1}, {{0, 1}});
    CHECK(digon.canonical_key() != single.canonical_key());
}

TEST_CASE("shortcut removal: triangle walk") {
    // walk <a,e1,y,e2,b,e3,a>: shortcut y -> <a,e,b,e3,a> with c(e)=2
    EmbeddedGraph g;
    g.track_counters = true;
    int a = g.add_vertex(0), y = g.add_vertex(1), b = g.add_vertex(2);
    int e1 = g.add_edge(a, y), e2 = g.add_edge(y, b), e3 = g.add_edge(b, a);
    g.counter.assign(6, 1);
    g.rot[a] = {2 * e1, 2 * e3 + 1};
    g.rot[y] = {2 * e1 + 1, 2 * e2};
    g.rot[b] = {2 * e2 + 1, 2 * e3};
    for (auto& cyc : trace_face_cycles(g)) {
        EmbeddedGraph::Face f;
        EmbeddedGraph::Walk w;
        w.darts = cyc;
        f.walks.push_back(w);
        g.faces.push_back(f);
    }
    g.validate(false);
    g.remove_vertex_shortcut(y);
    g.validate(false);
    auto h = g.compacted();
    CHECK(h.alive_vertices().size() == 2);
    // each of the two faces at y gets its own arc; the walk that contained
    // <a,e1,y,e2,b,e3> becomes <a,e,b,e3> with c(e)=2
    int arcs_with_2 = 0, edges_alive = 0;
    for (int e = 0; e < static_cast<int>(h.edges.size()); ++e) {
        if (!h.edges[e].alive) continue;
        ++edges_alive;
        if (h.counter[2 * e] == 2) ++arcs_with_2;
    }
    CHECK(edges_alive == 3);
    CHECK(arcs_with_2 == 2);
    bool found_spec_walk = false;
    for (const auto& fc : h.faces) {
        if (!fc.alive || fc.walks.size() != 1) continue;
        const auto& dw = fc.walks[0].darts;
        if (dw.size() != 2) continue;
        int c0 = h.counter[dw[0]], c1 = h.counter[dw[1]];
        if ((c0 == 2 && c1 == 1) || (c0 == 1 && c1 == 2)) found_spec_walk = true;
    }
    CHECK(found_spec_walk);
}

TEST_CASE("shortcut removal: pendant collapses to isolated vertex") {
    // walk <u,e1,y,e2,u> with y degree-1... i.e. single edge u-y, remove y
    EmbeddedGraph g;
    g.track_counters = true;
    int u = g.add_vertex(0), y = g.add_vertex(1);
    int e1 = g.add_edge(u, y);
    g.counter.assign(2, 1);
    g.rot[u] = {2 * e1};
    g.rot[y] = {2 * e1 + 1};
    EmbeddedGraph::Face f;
    EmbeddedGraph::Walk w;
    w.darts = {2 * e1, 2 * e1 + 1};
    f.walks.push_back(w);
    g.faces.push_back(f);
    g.validate(false);
    g.remove_vertex_shortcut(y);
    g.validate(false);
    CHECK(g.faces[0].lost_loop);
    auto h = g.compacted();
    CHECK(h.alive_vertices().size() == 1);
    CHECK(h.edges.empty());
    REQUIRE(h.faces.size() == 1);
    CHECK(h.faces[0].walks.size() == 1);
    CHECK(h.faces[0].walks[0].is_isolated());
}

TEST_CASE("shortcut removal: path interior gives parallel pair") {
    // witness path a-y-b (single face), remove y: two parallel a~b arcs and a
    // dead sliver between them
    EmbeddedGraph g;
    g.track_counters = true;
    int a = g.add_vertex(0), y = g.add_vertex(-1), b = g.add_vertex(1);
    int e1 = g.add_edge(a, y), e2 = g.add_edge(y, b);
    g.counter.assign(4, 1);
    g.rot[a] = {2 * e1};
    g.rot[y] = {2 * e1 + 1, 2 * e2};
    g.rot[b] = {2 * e2 + 1};
    EmbeddedGraph::Face f;
    f.active = true;
    EmbeddedGraph::Walk w;
    w.darts = {2 * e1, 2 * e2, 2 * e2 + 1, 2 * e1 + 1};
    f.walks.push_back(w);
    g.faces.push_back(f);
    g.validate(false);
    g.remove_vertex_shortcut(y);
    g.validate(false);
    auto h = g.compacted();
    CHECK(h.alive_vertices().size() == 2);
    int edges_alive = 0;
    for (auto& e : h.edges)
        if (e.alive) ++edges_alive;
    CHECK(edges_alive == 2);
    CHECK(h.homotopic_pairs().size() == 1);
    // the original face is still active with a 2-dart walk; the sliver is dead
    int active_faces = 0, dead_faces = 0;
    for (auto& fc : h.faces) {
        if (!fc.alive) continue;
        (fc.active ? active_faces : dead_faces)++;
    }
    CHECK(active_faces == 1);
    CHECK(dead_faces == 1);
}

TEST_CASE("delete_edge bridge splits walk in place") {
    auto star = embed({0, 1, 2, 3}, {{0, 1}, {0, 2}, {0, 3}});
    star.delete_edge(0);
    star.validate(false);
    // vertex 1 now isolated, same face
    CHECK(star.degree(1) == 0);
    CHECK(star.face_of_isolated(1) != -1);
}
