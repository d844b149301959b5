#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mapwit/certio.hpp"
#include "mapwit/witness.hpp"

using namespace mapwit;

namespace {

Graph complete(int n) {
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
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

bool segments_cross(std::pair<double, double> a, std::pair<double, double> b,
                    std::pair<double, double> c, std::pair<double, double> d) {
    auto orient = [](auto p, auto q, auto r) {
        double v = (q.first - p.first) * (r.second - p.second) -
                   (q.second - p.second) * (r.first - p.first);
        return v > 1e-9 ? 1 : v < -1e-9 ? -1 : 0;
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

void check_crossing_free(const EmbeddedGraph& w) {
    auto d = layout_witness(w);
    for (size_t i = 0; i < d.segments.size(); ++i)
        for (size_t j = i + 1; j < d.segments.size(); ++j) {
            auto [a, b] = d.segments[i];
            auto [c, e] = d.segments[j];
            if (a == c || a == e || b == c || b == e) continue;  // shared endpoint
            INFO("segments ", i, " and ", j);
            CHECK(!segments_cross(d.pos[a], d.pos[b], d.pos[c], d.pos[e]));
        }
}

}  // namespace

TEST_CASE("certificate json round trip") {
    auto g = complete(3);
    auto six = witness_of(3, {{0, 1}, {1, 2}, {0, 2}});
    auto json1 = certificate_to_json(g, six, 2, false);
    auto parsed = certificate_from_json(json1);
    CHECK(parsed.n == 3);
    CHECK(parsed.k == 2);
    CHECK(!parsed.hole_free);
    auto rep = verify_witness(g, parsed.witness);
    CHECK(rep.is_witness);
    // serialize -> parse -> serialize is byte identical
    auto json2 = certificate_to_json(g, parsed.witness, 2, false);
    CHECK(json1 == json2);
}

TEST_CASE("render 6-cycle witness crossing-free") {
    auto six = witness_of(3, {{0, 1}, {1, 2}, {0, 2}});
    check_crossing_free(six);
    auto svg = render_svg(six);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("circle") != std::string::npos);
    CHECK(svg.find("rect") != std::string::npos);
}

TEST_CASE("render cube witness crossing-free") {
    auto cube = witness_of(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
    check_crossing_free(cube);
}

TEST_CASE("render single vertex") {
    auto w = single_vertex_sketch(0, false);
    auto svg = render_svg(w);
    CHECK(svg.find("circle") != std::string::npos);
}
