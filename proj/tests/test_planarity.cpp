#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mapwit/planarity.hpp"

using namespace mapwit;

namespace {

std::vector<std::pair<int, int>> complete(int n) {
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) es.push_back({i, j});
    return es;
}

std::vector<std::pair<int, int>> complete_bipartite(int a, int b) {
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) es.push_back({i, a + j});
    return es;
}

// full structural check of an embedding via assemble + validate
void check_embedding(int n, const std::vector<std::pair<int, int>>& es) {
    auto rot = planar_embed(n, es);
    REQUIRE(rot.has_value());
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = i;
    auto g = assemble_embedded(labels, es, rot->rot, false);
    g.validate(false);
}

}  // namespace

TEST_CASE("planarity small cases") {
    CHECK(is_planar_graph(4, complete(4)));
    CHECK(!is_planar_graph(5, complete(5)));
    CHECK(!is_planar_graph(6, complete_bipartite(3, 3)));
    check_embedding(4, complete(4));
    check_embedding(3, {{0, 1}, {1, 2}, {0, 2}});
    check_embedding(2, {{0, 1}});
    check_embedding(5, {});  // isolated vertices
    check_embedding(7, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 3}});  // blocks
}

TEST_CASE("planarity multigraph") {
    // parallel edges embed as homotopic copies
    std::vector<std::pair<int, int>> digon{{0, 1}, {0, 1}};
    check_embedding(2, digon);
    std::vector<std::pair<int, int>> triple{{0, 1}, {0, 1}, {0, 1}};
    check_embedding(2, triple);
    // K4 plus a parallel edge
    auto es = complete(4);
    es.push_back({0, 1});
    check_embedding(4, es);
}

TEST_CASE("petersen graph is non-planar") {
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < 5; ++i) {
        es.push_back({i, (i + 1) % 5});
        es.push_back({i, 5 + i});
        es.push_back({5 + i, 5 + (i + 2) % 5});
    }
    CHECK(!is_planar_graph(10, es));
}

TEST_CASE("planarity random graphs against Euler necessary condition") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 4 + static_cast<int>(rng() % 7);
        std::vector<std::pair<int, int>> es;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() % 100 < 40) es.push_back({i, j});
        auto rot = planar_embed(n, es);
        if (rot) {
            std::vector<int> labels(n);
            for (int i = 0; i < n; ++i) labels[i] = i;
            auto g = assemble_embedded(labels, es, rot->rot, false);
            g.validate(false);  // Euler per component is enforced here
        } else {
            // rejected graphs must exceed no trivial bound: at least check that
            // sparse graphs (forests) are never rejected
            CHECK(es.size() >= static_cast<size_t>(n));
        }
    }
}

TEST_CASE("subdivided kuratowski graphs rejected") {
    // K5 with each edge subdivided once: 5 + 10 vertices
    std::vector<std::pair<int, int>> es;
    int next = 5;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) {
            es.push_back({i, next});
            es.push_back({next, j});
            ++next;
        }
    CHECK(!is_planar_graph(next, es));
}
