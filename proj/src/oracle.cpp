#include "mapwit/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include "mapwit/planarity.hpp"
#include "mapwit/sketch.hpp"
#include "mapwit/witness.hpp"

namespace mapwit {

namespace {

BipartiteWitnessGraph witness_from_cliques(int real_count,
                                           const std::vector<std::vector<int>>& cliques) {
    BipartiteWitnessGraph w;
    w.real_count = real_count;
    w.intersection_neighbors = cliques;
    return w;
}

bool planar_witness(const BipartiteWitnessGraph& w) {
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < w.intersection_count(); ++i)
        for (int r : w.intersection_neighbors[i]) es.push_back({r, w.real_count + i});
    return is_planar_graph(w.total(), es);
}

}  // namespace

OracleResult brute_force_is_k_map(const Graph& g, int k, int limit) {
    if (g.n > limit) throw std::invalid_argument("oracle limit exceeded");
    if (k < 1) return {};
    if (g.edges.empty()) {
        auto w = embed_witness(witness_from_cliques(g.n, {}));
        return {true, std::move(w)};
    }
    if (k < 2) return {};
    auto cliques = enumerate_cliques(g, 2, k);
    int m = static_cast<int>(g.edges.size());
    auto edge_index = [&](int u, int v) {
        if (u > v) std::swap(u, v);
        return static_cast<int>(std::lower_bound(g.edges.begin(), g.edges.end(),
                                                 std::make_pair(u, v)) -
                                g.edges.begin());
    };
    // per clique: covered-edge mask
    std::vector<uint64_t> cover(cliques.size(), 0);
    for (size_t c = 0; c < cliques.size(); ++c)
        for (size_t i = 0; i < cliques[c].size(); ++i)
            for (size_t j = i + 1; j < cliques[c].size(); ++j)
                cover[c] |= 1ull << edge_index(cliques[c][i], cliques[c][j]);
    uint64_t all = m == 64 ? ~0ull : (1ull << m) - 1;

    std::set<std::vector<int>> visited;
    OracleResult res;
    std::function<void(uint64_t, std::vector<int>&)> rec = [&](uint64_t covered,
                                                               std::vector<int>& chosen) {
        if (res.yes) return;
        std::vector<int> key = chosen;
        std::sort(key.begin(), key.end());
        if (!visited.insert(key).second) return;
        std::vector<std::vector<int>> sets;
        for (int c : chosen) sets.push_back(cliques[c]);
        auto w = witness_from_cliques(g.n, sets);
        if (!planar_witness(w)) return;
        if (covered == all) {
            res.yes = true;
            res.witness = embed_witness(w);
            return;
        }
        int e = __builtin_ctzll(~covered & all);
        auto [u, v] = g.edges[e];
        for (size_t c = 0; c < cliques.size(); ++c) {
            if (!(cover[c] >> e & 1)) continue;
            chosen.push_back(static_cast<int>(c));
            rec(covered | cover[c], chosen);
            chosen.pop_back();
            if (res.yes) return;
        }
    };
    std::vector<int> chosen;
    rec(0, chosen);
    return res;
}

OracleResult brute_force_is_hole_free_k_map(const Graph& g, int k, int limit) {
    if (g.n > limit) throw std::invalid_argument("oracle limit exceeded");
    if (k < 1) return {};
    if (!is_biconnected(g)) return {};
    if (g.n == 1) return {};  // one nation cannot cover the sphere
    if (g.n == 2) {
        if (k < 2) return {};
        auto w = embed_witness(witness_from_cliques(2, {{0, 1}}));
        return {true, std::move(w)};
    }
    if (k < 2) return {};
    auto cliques = enumerate_cliques(g, 2, k);
    int budget = 2 * g.n - 4;  // both sum(s_i - 2) and the intersection count
    int mneed = static_cast<int>(g.edges.size());
    (void)mneed;
    OracleResult res;
    std::vector<std::vector<int>> chosen;
    std::function<void(size_t, int, int)> rec = [&](size_t idx, int weight_left, int count_left) {
        if (res.yes) return;
        if (weight_left == 0) {
            // pad with pairs is handled by recursion; here check candidate
            // coverage + structure
            std::set<std::pair<int, int>> covered;
            for (const auto& c : chosen)
                for (size_t i = 0; i < c.size(); ++i)
                    for (size_t j = i + 1; j < c.size(); ++j)
                        covered.insert({c[i], c[j]});
            bool cover_ok = true;
            for (auto [u, v] : g.edges)
                if (!covered.count({u, v})) {
                    cover_ok = false;
                    break;
                }
            if (cover_ok) {
                auto w = witness_from_cliques(g.n, chosen);
                // quadrangulation criterion: connected, biconnected, planar,
                // |A| = 2n - 4 (holds by construction of the weight budget)
                auto emb = embed_witness(w);
                if (emb && emb->is_connected_embedded() && emb->is_biconnected_graph()) {
                    EmbeddedGraph cw = compactify(*emb);
                    if (check_hole_free(cw)) {
                        res.yes = true;
                        res.witness = std::move(cw);
                        return;
                    }
                }
            }
        }
        if (idx == cliques.size() || count_left == 0) return;
        int w_i = static_cast<int>(cliques[idx].size()) - 2;
        int max_mult = count_left;
        if (w_i > 0) max_mult = std::min(max_mult, weight_left / w_i);
        for (int mult = max_mult; mult >= 0; --mult) {
            for (int t = 0; t < mult; ++t) chosen.push_back(cliques[idx]);
            rec(idx + 1, weight_left - mult * w_i, count_left - mult);
            for (int t = 0; t < mult; ++t) chosen.pop_back();
            if (res.yes) return;
        }
    };
    rec(0, budget, budget);
    return res;
}


std::set<std::string> enumerate_compact_witness_sketch_keys(const Graph& g,
                                                            const std::vector<int>& vs,
                                                            const std::set<int>& bag,
                                                            int limit) {
    int nv = static_cast<int>(vs.size());
    if (nv > limit) throw std::invalid_argument("oracle limit exceeded");
    std::set<std::string> keys;
    // induced subgraph on vs, relabeled 0..nv-1 internally, labels = vs values
    std::map<int, int> idx;
    for (int i = 0; i < nv; ++i) idx[vs[i]] = i;
    std::vector<std::pair<int, int>> sub_edges;
    for (auto [u, v] : g.edges)
        if (idx.count(u) && idx.count(v)) sub_edges.push_back({idx[u], idx[v]});
    Graph sub(nv);
    for (auto [u, v] : sub_edges) sub.add_edge(u, v);

    int cap_ni = nv <= 2 ? (sub.edge_count() > 0 ? 1 : 0) : 5 * nv - 10;
    auto cliques = enumerate_cliques(sub, 2, nv);
    std::sort(cliques.begin(), cliques.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });

    std::vector<std::vector<int>> chosen;
    auto emit_embeddings = [&](const std::vector<std::vector<int>>& sets) {
        // labels: reals carry original labels; intersections -1
        std::vector<int> labels;
        for (int i = 0; i < nv; ++i) labels.push_back(vs[i]);
        for (size_t i = 0; i < sets.size(); ++i) labels.push_back(-1);
        std::vector<std::pair<int, int>> es;
        for (size_t i = 0; i < sets.size(); ++i)
            for (int r : sets[i]) es.push_back({r, nv + static_cast<int>(i)});
        // rotation systems: product of cyclic orders
        int total = nv + static_cast<int>(sets.size());
        std::vector<std::vector<int>> inc(total);  // per vertex: darts
        for (int e = 0; e < static_cast<int>(es.size()); ++e) {
            inc[es[e].first].push_back(2 * e);
            inc[es[e].second].push_back(2 * e + 1);
        }
        std::vector<std::vector<std::vector<int>>> options(total);
        for (int v = 0; v < total; ++v) {
            if (inc[v].empty())
                options[v].push_back({});
            else
                cyclic_permutations(inc[v], options[v]);
        }
        std::vector<std::vector<int>> rot(total);
        std::set<int> bag_local;
        for (int b : bag) bag_local.insert(b);
        std::function<void(int)> enum_rot = [&](int v) {
            if (v == total) {
                enumerate_position_systems(labels, es, rot, [&](EmbeddedGraph& w) {
                    // compact? twin-pairs are embedding-dependent
                    auto cr = is_compact_witness(w);
                    if (!cr.compact) return;
                    auto sk = compute_sketch(w, bag_local, false);
                    keys.insert(sk.key);
                });
                return;
            }
            for (auto& opt : options[v]) {
                rot[v] = opt;
                enum_rot(v + 1);
            }
        };
        enum_rot(0);
    };

    std::function<void(size_t)> rec = [&](size_t idx) {
        // structural prune: abstract graph must stay planar and within bounds
        {
            int ni = static_cast<int>(chosen.size());
            if (ni > cap_ni) return;
            int asum = 0;
            for (auto& c : chosen) asum += static_cast<int>(c.size());
            int n = nv + ni;
            if (n >= 3 && asum > 2 * n - 4) return;
            if (!chosen.empty() && !planar_witness(witness_from_cliques(nv, chosen))) return;
            // static inessential: a chosen pair strictly inside another clique
            for (auto& c : chosen) {
                if (c.size() != 2) continue;
                for (auto& c2 : chosen)
                    if (c2.size() > 2 &&
                        std::includes(c2.begin(), c2.end(), c.begin(), c.end()))
                        return;
            }
        }
        if (idx == cliques.size()) {
            // coverage check
            std::set<std::pair<int, int>> covered;
            for (auto& c : chosen)
                for (size_t i = 0; i < c.size(); ++i)
                    for (size_t j = i + 1; j < c.size(); ++j)
                        covered.insert({c[i], c[j]});
            for (auto [u, v] : sub.edges)
                if (!covered.count({u, v})) return;
            emit_embeddings(chosen);
            return;
        }
        int cap_mult = 4;
        for (int mult = 0; mult <= cap_mult; ++mult) {
            for (int t = 0; t < mult; ++t) chosen.push_back(cliques[idx]);
            rec(idx + 1);
            for (int t = 0; t < mult; ++t) chosen.pop_back();
        }
    };
    rec(0);
    return keys;
}

}  // namespace mapwit
