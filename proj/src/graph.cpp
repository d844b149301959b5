#include "mapwit/graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace mapwit {

void Graph::add_edge(int u, int v) {
    if (u == v) throw std::invalid_argument("self-loop");
    if (u > v) std::swap(u, v);
    auto e = std::make_pair(u, v);
    auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it != edges.end() && *it == e) return;
    edges.insert(it, e);
    adj[u].insert(std::lower_bound(adj[u].begin(), adj[u].end(), v), v);
    adj[v].insert(std::lower_bound(adj[v].begin(), adj[v].end(), u), u);
}

bool Graph::has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

std::vector<int> Graph::component_of(int v) const {
    std::vector<char> seen(n, 0);
    std::vector<int> order{v};
    seen[v] = 1;
    for (size_t i = 0; i < order.size(); ++i)
        for (int w : adj[order[i]])
            if (!seen[w]) {
                seen[w] = 1;
                order.push_back(w);
            }
    std::sort(order.begin(), order.end());
    return order;
}

bool Graph::is_connected() const {
    if (n <= 1) return true;
    return static_cast<int>(component_of(0).size()) == n;
}

std::string Graph::to_gr() const {
    std::ostringstream os;
    os << "p tw " << n << " " << edges.size() << "\n";
    for (auto [u, v] : edges) os << (u + 1) << " " << (v + 1) << "\n";
    return os.str();
}

uint64_t Graph::fingerprint() const {
    // FNV-1a over the canonical text form
    uint64_t h = 14695981039346656037ull;
    for (char c : to_gr()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ParseError{msg, line};
}

}  // namespace

Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    int n = 0;
    long m = 0;
    Graph g;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (!header) {
            std::string p, tw;
            if (!(ls >> p >> tw >> n >> m) || p != "p" || tw != "tw" || n < 0 || m < 0)
                fail(lineno, "malformed header: expected 'p tw <n> <m>'");
            header = true;
            g = Graph(n);
            continue;
        }
        int u, v;
        if (!(ls >> u >> v)) fail(lineno, "malformed edge line");
        if (u < 1 || u > n || v < 1 || v > n) fail(lineno, "vertex id out of range");
        if (u == v) fail(lineno, "self-loop");
        g.add_edge(u - 1, v - 1);
    }
    if (!header) fail(lineno, "missing header");
    return g;
}

int BipartiteWitnessGraph::edge_count() const {
    int m = 0;
    for (const auto& ns : intersection_neighbors) m += static_cast<int>(ns.size());
    return m;
}

Graph half_square(const BipartiteWitnessGraph& w) {
    Graph g(w.real_count);
    for (const auto& ns : w.intersection_neighbors)
        for (size_t i = 0; i < ns.size(); ++i)
            for (size_t j = i + 1; j < ns.size(); ++j)
                if (ns[i] != ns[j]) g.add_edge(ns[i], ns[j]);
    return g;
}

namespace {

struct BlockDfs {
    const Graph& g;
    std::vector<int> num, low;
    std::vector<std::pair<int, int>> estack;
    std::vector<Block>& blocks;
    int timer = 0;

    BlockDfs(const Graph& g_, std::vector<Block>& blocks_)
        : g(g_), num(g_.n, -1), low(g_.n, 0), blocks(blocks_) {}

    void pop_block(std::pair<int, int> until) {
        Block b;
        std::set<int> vs;
        while (true) {
            auto e = estack.back();
            estack.pop_back();
            b.edges.push_back(e);
            vs.insert(e.first);
            vs.insert(e.second);
            if (e == until) break;
        }
        b.vertices.assign(vs.begin(), vs.end());
        blocks.push_back(std::move(b));
    }

    void dfs(int v, int parent) {
        num[v] = low[v] = timer++;
        bool skipped_parent = false;
        for (int w : g.adj[v]) {
            if (w == parent && !skipped_parent) {
                skipped_parent = true;
                continue;
            }
            if (num[w] == -1) {
                estack.push_back({v, w});
                dfs(w, v);
                low[v] = std::min(low[v], low[w]);
                if (low[w] >= num[v]) pop_block({v, w});
            } else if (num[w] < num[v]) {
                estack.push_back({v, w});
                low[v] = std::min(low[v], num[w]);
            }
        }
    }
};

}  // namespace

BlockDecomposition biconnected_components(const Graph& g) {
    BlockDecomposition out;
    BlockDfs dfs(g, out.blocks);
    for (int v = 0; v < g.n; ++v) {
        if (dfs.num[v] != -1) continue;
        if (g.adj[v].empty()) {
            dfs.num[v] = dfs.timer++;
            out.blocks.push_back(Block{{v}, {}});
            continue;
        }
        dfs.dfs(v, -1);
    }
    std::vector<int> appear(g.n, 0);
    for (const auto& b : out.blocks)
        if (!b.edges.empty())
            for (int v : b.vertices) appear[v]++;
    for (int v = 0; v < g.n; ++v)
        if (appear[v] >= 2) out.cut_vertices.push_back(v);
    return out;
}

bool is_biconnected(const Graph& g) {
    if (!g.is_connected()) return false;
    if (g.n <= 2) return true;
    auto bd = biconnected_components(g);
    int edge_blocks = 0;
    for (const auto& b : bd.blocks)
        if (!b.edges.empty()) ++edge_blocks;
    return edge_blocks == 1 && bd.cut_vertices.empty();
}

namespace {

void extend_clique(const Graph& g, std::vector<int>& cur, int from, int min_size, int max_size,
                   std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) >= min_size) out.push_back(cur);
    if (static_cast<int>(cur.size()) == max_size) return;
    for (int v = from; v < g.n; ++v) {
        bool ok = true;
        for (int u : cur)
            if (!g.has_edge(u, v)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        cur.push_back(v);
        extend_clique(g, cur, v + 1, min_size, max_size, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<std::vector<int>> enumerate_cliques(const Graph& g, int min_size, int max_size) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    extend_clique(g, cur, 0, std::max(min_size, 1), max_size, out);
    return out;
}

bool is_clique(const Graph& g, const std::vector<int>& vs) {
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j)
            if (!g.has_edge(vs[i], vs[j])) return false;
    return true;
}

}  // namespace mapwit
