#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mapwit/treedecomp.hpp"

using namespace mapwit;

namespace {

Graph triangle() {
    Graph g(3);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(0, 2);
    return g;
}

}  // namespace

TEST_CASE("parse_td and validation") {
    auto g = triangle();
    auto td = parse_td("s td 1 3 3\nb 1 1 2 3\n", g);
    CHECK(td.width() == 2);

    Graph p3(3);
    p3.add_edge(0, 1);
    p3.add_edge(1, 2);
    auto td2 = parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n", p3);
    CHECK(td2.width() == 1);

    CHECK_THROWS_AS(parse_td("s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n", g), ParseError);
}

TEST_CASE("make_nice properties") {
    auto g = triangle();
    auto td = parse_td("s td 1 3 3\nb 1 1 2 3\n", g);
    auto nice = make_nice(td);
    nice.validate(g);
    CHECK(nice.width() == 2);

    Graph single(1);
    TreeDecomposition t1;
    t1.bags = {{0}};
    auto n1 = make_nice(t1);
    n1.validate(single);
    CHECK(n1.nodes.size() == 1);
    CHECK(n1.nodes[n1.root].kind == NodeKind::Leaf);

    Graph pair(2);
    pair.add_edge(0, 1);
    TreeDecomposition t2;
    t2.bags = {{0, 1}};
    auto n2 = make_nice(t2);
    n2.validate(pair);
    CHECK(n2.width() == 1);

    Graph p3(3);
    p3.add_edge(0, 1);
    p3.add_edge(1, 2);
    auto td3 = parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n", p3);
    auto n3 = make_nice(td3);
    n3.validate(p3);
    CHECK(n3.width() == 1);
}

TEST_CASE("make_nice with joins") {
    // star of 3 leaves: bags {0,1},{0,2},{0,3} in a star around {0,1}
    Graph g(4);
    g.add_edge(0, 1);
    g.add_edge(0, 2);
    g.add_edge(0, 3);
    TreeDecomposition td;
    td.bags = {{0, 1}, {0, 2}, {0, 3}};
    td.tree_edges = {{0, 1}, {0, 2}};
    td.validate(g);
    auto nice = make_nice(td);
    nice.validate(g);
    bool has_join = false;
    for (auto& n : nice.nodes)
        if (n.kind == NodeKind::Join) has_join = true;
    CHECK(has_join);
}

TEST_CASE("compute_td exact widths") {
    Graph k4(4);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) k4.add_edge(i, j);
    CHECK(compute_td(k4).width() == 3);

    // tree on 5 vertices
    Graph tr(5);
    tr.add_edge(0, 1);
    tr.add_edge(0, 2);
    tr.add_edge(2, 3);
    tr.add_edge(2, 4);
    CHECK(compute_td(tr).width() == 1);

    Graph c5(5);
    for (int i = 0; i < 5; ++i) c5.add_edge(i, (i + 1) % 5);
    CHECK(compute_td(c5).width() == 2);

    Graph single(1);
    CHECK(compute_td(single).width() == 0);
}

TEST_CASE("compute_td heuristic stays valid above the exact threshold") {
    Graph big(25);
    for (int i = 0; i + 1 < 25; ++i) big.add_edge(i, i + 1);
    for (int i = 0; i + 5 < 25; i += 3) big.add_edge(i, i + 5);
    auto td = compute_td(big);
    td.validate(big);
}
