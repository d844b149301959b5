#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mapwit/witness.hpp"

using namespace mapwit;

namespace {

Graph triangle() {
    Graph g(3);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(0, 2);
    return g;
}

EmbeddedGraph witness_of(int reals, std::vector<std::vector<int>> nbhds) {
    BipartiteWitnessGraph w;
    w.real_count = reals;
    w.intersection_neighbors = std::move(nbhds);
    auto e = embed_witness(w);
    REQUIRE(e.has_value());
    return *e;
}

}  // namespace

TEST_CASE("verify_witness on K3") {
    auto g = triangle();
    // 6-cycle a-u1-b-u2-c-u3-a
    auto six = witness_of(3, {{0, 1}, {1, 2}, {0, 2}});
    auto rep = verify_witness(g, six);
    CHECK(rep.is_witness);
    CHECK(rep.max_intersection_degree == 2);
    CHECK(rep.is_compact);  // no twin pair, nothing inessential

    auto star = witness_of(3, {{0, 1, 2}});
    auto rep2 = verify_witness(g, star);
    CHECK(rep2.is_witness);
    CHECK(rep2.max_intersection_degree == 3);

    // path a-u-b plus isolated real c: not a witness of K3
    auto bad = witness_of(3, {{0, 1}});
    auto rep3 = verify_witness(g, bad);
    CHECK(!rep3.is_witness);
}

TEST_CASE("compactness detection") {
    auto g = triangle();
    (void)g;
    auto six = witness_of(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(is_compact_witness(six).compact);

    // star + extra deg-2 u' with N = {a,b} subset of N(center)
    auto ine = witness_of(3, {{0, 1, 2}, {0, 1}});
    CHECK(!is_compact_witness(ine).compact);

    // two intersections with equal neighborhoods forming a 4-cycle face
    auto twin = witness_of(2, {{0, 1}, {0, 1}});
    CHECK(!is_compact_witness(twin).compact);
}

TEST_CASE("compactify") {
    auto six = witness_of(3, {{0, 1}, {1, 2}, {0, 2}});
    auto c1 = compactify(six);
    CHECK(c1.canonical_key() == six.compacted().canonical_key());  // fixpoint

    auto ine = witness_of(3, {{0, 1, 2}, {0, 1}});
    auto c2 = compactify(ine);
    auto star = witness_of(3, {{0, 1, 2}});
    CHECK(half_square_of(c2).edges == half_square_of(ine).edges);
    CHECK(c2.alive_vertices().size() == star.alive_vertices().size());

    auto twin = witness_of(2, {{0, 1}, {0, 1}});
    auto c3 = compactify(twin);
    CHECK(half_square_of(c3).edges == half_square_of(twin).edges);
    CHECK(c3.alive_vertices().size() == 3);
}

TEST_CASE("check_hole_free") {
    // cube witness of K4
    auto cube = witness_of(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
    CHECK(check_hole_free(cube));
    Graph k4(4);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) k4.add_edge(i, j);
    auto rep = verify_witness(k4, cube);
    CHECK(rep.is_witness);
    CHECK(rep.is_biconnected_quadrangulation);

    auto six = witness_of(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(!check_hole_free(six));

    auto star = witness_of(3, {{0, 1, 2}});
    CHECK(!check_hole_free(star));
}

TEST_CASE("hole-free edge count corollary") {
    // |A| = 2(nV + nI) - 4 iff biconnected quadrangulation, on these samples
    auto cube = witness_of(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
    auto bw = abstract_witness(cube);
    CHECK(bw.edge_count() == 2 * bw.total() - 4);

    auto six = witness_of(3, {{0, 1}, {1, 2}, {0, 2}});
    auto bw2 = abstract_witness(six);
    CHECK(bw2.edge_count() != 2 * bw2.total() - 4);
}

TEST_CASE("restrict") {
    auto star = witness_of(3, {{0, 1, 2}});
    auto r1 = restrict_witness(star, {0, 1});
    // star restricted to {a,b}: path a-u-b
    CHECK(r1.alive_vertices().size() == 3);
    auto hs = half_square_of(r1);
    CHECK(hs.has_edge(0, 1));

    auto six = witness_of(3, {{0, 1}, {1, 2}, {0, 2}});
    auto r2 = restrict_witness(six, {0, 1});
    // u2,u3 degenerate after c's removal: path a-u1-b remains
    CHECK(r2.alive_vertices().size() == 3);

    // keep all reals == compactify
    auto r3 = restrict_witness(six, {0, 1, 2});
    CHECK(r3.canonical_key() == compactify(six).canonical_key());
}
