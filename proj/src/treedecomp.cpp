#include "mapwit/treedecomp.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace mapwit {

int TreeDecomposition::width() const {
    size_t mx = 1;
    for (const auto& b : bags) mx = std::max(mx, b.size());
    return static_cast<int>(mx) - 1;
}

void TreeDecomposition::validate(const Graph& g) const {
    int nb = static_cast<int>(bags.size());
    if (nb == 0) throw ParseError{"decomposition has no bags", 0};
    // tree shape
    if (static_cast<int>(tree_edges.size()) != nb - 1)
        throw ParseError{"bag tree is not a tree (edge count)", 0};
    std::vector<std::vector<int>> adj(nb);
    for (auto [a, b] : tree_edges) {
        if (a < 0 || b < 0 || a >= nb || b >= nb || a == b)
            throw ParseError{"bad tree edge", 0};
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<char> seen(nb, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int cnt = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++cnt;
                stack.push_back(w);
            }
    }
    if (cnt != nb) throw ParseError{"bag tree is not connected", 0};
    // bag contents
    for (const auto& b : bags)
        for (int v : b)
            if (v < 0 || v >= g.n) throw ParseError{"bag vertex out of range", 0};
    // (i) every edge covered
    for (auto [u, v] : g.edges) {
        bool ok = false;
        for (const auto& b : bags)
            if (std::binary_search(b.begin(), b.end(), u) &&
                std::binary_search(b.begin(), b.end(), v)) {
                ok = true;
                break;
            }
        if (!ok) {
            std::ostringstream os;
            os << "edge (" << (u + 1) << "," << (v + 1) << ") not covered by any bag";
            throw ParseError{os.str(), 0};
        }
    }
    // (ii) occurrences of each vertex induce a nonempty connected subtree
    for (int x = 0; x < g.n; ++x) {
        std::vector<int> holds;
        for (int i = 0; i < nb; ++i)
            if (std::binary_search(bags[i].begin(), bags[i].end(), x)) holds.push_back(i);
        if (holds.empty()) {
            std::ostringstream os;
            os << "vertex " << (x + 1) << " appears in no bag";
            throw ParseError{os.str(), 0};
        }
        std::set<int> hs(holds.begin(), holds.end());
        std::vector<int> st{holds[0]};
        std::set<int> vis{holds[0]};
        while (!st.empty()) {
            int v = st.back();
            st.pop_back();
            for (int w : adj[v])
                if (hs.count(w) && !vis.count(w)) {
                    vis.insert(w);
                    st.push_back(w);
                }
        }
        if (vis.size() != hs.size()) {
            std::ostringstream os;
            os << "bags holding vertex " << (x + 1) << " are not connected";
            throw ParseError{os.str(), 0};
        }
    }
}

TreeDecomposition parse_td(const std::string& text, const Graph& g) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    int nb = 0, w1 = 0, n = 0;
    TreeDecomposition td;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (!header) {
            std::string s, t;
            if (!(ls >> s >> t >> nb >> w1 >> n) || s != "s" || t != "td")
                throw ParseError{"malformed header: expected 's td <bags> <width+1> <n>'", lineno};
            if (n != g.n) throw ParseError{"vertex count differs from graph", lineno};
            header = true;
            td.bags.assign(nb, {});
            continue;
        }
        std::string first;
        ls >> first;
        if (first == "b") {
            int id;
            if (!(ls >> id) || id < 1 || id > nb) throw ParseError{"bad bag id", lineno};
            int v;
            std::vector<int> bag;
            while (ls >> v) {
                if (v < 1 || v > n) throw ParseError{"bag vertex out of range", lineno};
                bag.push_back(v - 1);
            }
            std::sort(bag.begin(), bag.end());
            bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
            td.bags[id - 1] = bag;
        } else {
            int a = std::stoi(first), b;
            if (!(ls >> b) || a < 1 || a > nb || b < 1 || b > nb)
                throw ParseError{"bad tree edge", lineno};
            td.tree_edges.push_back({a - 1, b - 1});
        }
    }
    if (!header) throw ParseError{"missing header", lineno};
    td.validate(g);
    return td;
}

int NiceTreeDecomposition::width() const {
    size_t mx = 1;
    for (const auto& n : nodes) mx = std::max(mx, n.bag.size());
    return static_cast<int>(mx) - 1;
}

std::vector<int> NiceTreeDecomposition::topo_order() const {
    std::vector<int> order;
    std::vector<std::pair<int, bool>> st{{root, false}};
    while (!st.empty()) {
        auto [v, done] = st.back();
        st.pop_back();
        if (done) {
            order.push_back(v);
            continue;
        }
        st.push_back({v, true});
        for (int c : nodes[v].children) st.push_back({c, false});
    }
    return order;
}

void NiceTreeDecomposition::validate(const Graph& g) const {
    TreeDecomposition td;
    for (const auto& n : nodes) td.bags.push_back(n.bag);
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
        for (int c : nodes[i].children) td.tree_edges.push_back({i, c});
    td.validate(g);
    if (nodes[root].bag.size() != 1) throw ParseError{"root bag not singleton", 0};
    for (const auto& n : nodes) {
        switch (n.kind) {
            case NodeKind::Leaf:
                if (!n.children.empty() || n.bag.size() != 1)
                    throw ParseError{"bad leaf node", 0};
                break;
            case NodeKind::Join: {
                if (n.children.size() != 2) throw ParseError{"join without two children", 0};
                for (int c : n.children)
                    if (nodes[c].bag != n.bag) throw ParseError{"join child bag differs", 0};
                break;
            }
            case NodeKind::Introduce:
            case NodeKind::Forget: {
                if (n.children.size() != 1) throw ParseError{"unary node child count", 0};
                auto child = nodes[n.children[0]].bag;
                auto mine = n.bag;
                const auto& big = n.kind == NodeKind::Introduce ? mine : child;
                const auto& small = n.kind == NodeKind::Introduce ? child : mine;
                if (big.size() != small.size() + 1) throw ParseError{"unary node size", 0};
                std::vector<int> diff;
                std::set_difference(big.begin(), big.end(), small.begin(), small.end(),
                                    std::back_inserter(diff));
                if (diff.size() != 1 || diff[0] != n.vertex)
                    throw ParseError{"unary node vertex mismatch", 0};
                break;
            }
        }
    }
}

namespace {

struct NiceBuilder {
    std::vector<NiceNode> nodes;

    int add(NodeKind k, int vertex, std::vector<int> bag, std::vector<int> children) {
        nodes.push_back(NiceNode{k, vertex, std::move(bag), std::move(children)});
        return static_cast<int>(nodes.size()) - 1;
    }

    // chain of introduces/forgets transforming `from` into `to` above node `below`
    int morph(int below, const std::vector<int>& from, const std::vector<int>& to) {
        std::vector<int> cur = from;
        int node = below;
        std::vector<int> drop, add;
        std::set_difference(from.begin(), from.end(), to.begin(), to.end(),
                            std::back_inserter(drop));
        std::set_difference(to.begin(), to.end(), from.begin(), from.end(),
                            std::back_inserter(add));
        for (int v : drop) {
            cur.erase(std::find(cur.begin(), cur.end(), v));
            node = this->add(NodeKind::Forget, v, cur, {node});
        }
        for (int v : add) {
            cur.insert(std::upper_bound(cur.begin(), cur.end(), v), v);
            node = this->add(NodeKind::Introduce, v, cur, {node});
        }
        return node;
    }

    // leaf chain building up `bag` from scratch
    int build_up(const std::vector<int>& bag) {
        int node = add(NodeKind::Leaf, bag[0], {bag[0]}, {});
        std::vector<int> cur{bag[0]};
        for (size_t i = 1; i < bag.size(); ++i) {
            cur.insert(std::upper_bound(cur.begin(), cur.end(), bag[i]), bag[i]);
            node = add(NodeKind::Introduce, bag[i], cur, {node});
        }
        return node;
    }
};

}  // namespace

NiceTreeDecomposition make_nice(const TreeDecomposition& td) {
    int nb = static_cast<int>(td.bags.size());
    std::vector<std::vector<int>> adj(nb);
    for (auto [a, b] : td.tree_edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    NiceBuilder nb_;
    // root the bag tree at 0, recurse
    // returns nice node index whose bag equals td.bags[v]
    std::vector<std::pair<int, int>> stack{{0, -1}};
    std::vector<std::vector<int>> pending(nb);  // children nice-node ids
    std::vector<int> order;
    {
        std::vector<std::pair<int, int>> st{{0, -1}};
        while (!st.empty()) {
            auto [v, p] = st.back();
            st.pop_back();
            order.push_back(v);
            for (int w : adj[v])
                if (w != p) st.push_back({w, v});
        }
    }
    std::vector<int> parent(nb, -1);
    for (auto& p : parent) p = -1;
    {
        std::vector<std::pair<int, int>> st{{0, -1}};
        while (!st.empty()) {
            auto [v, p] = st.back();
            st.pop_back();
            parent[v] = p;
            for (int w : adj[v])
                if (w != p) st.push_back({w, v});
        }
    }
    std::vector<int> made(nb, -1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        std::vector<int> kid_nodes;
        for (int w : adj[v])
            if (w != parent[v] && made[w] != -1) {
                // child bag -> my bag via a morph chain
                kid_nodes.push_back(nb_.morph(made[w], td.bags[w], td.bags[v]));
            }
        int node;
        if (kid_nodes.empty()) {
            node = nb_.build_up(td.bags[v]);
        } else {
            node = kid_nodes[0];
            for (size_t i = 1; i < kid_nodes.size(); ++i)
                node = nb_.add(NodeKind::Join, -1, td.bags[v], {node, kid_nodes[i]});
        }
        made[v] = node;
    }
    // normalize the root to a single vertex
    int root = made[0];
    std::vector<int> cur = td.bags[0];
    while (cur.size() > 1) {
        int v = cur.back();
        cur.pop_back();
        root = nb_.add(NodeKind::Forget, v, cur, {root});
    }
    NiceTreeDecomposition out;
    out.nodes = std::move(nb_.nodes);
    out.root = root;
    return out;
}

namespace {

// exact treewidth via subset DP (Bodlaender et al. style): Q(S,v) = number of
// vertices outside S+v reachable from v through S.
int exact_treewidth(const Graph& g, std::vector<int>& elim_order) {
    int n = g.n;
    std::vector<uint32_t> nbr(n, 0);
    for (auto [u, v] : g.edges) {
        nbr[u] |= 1u << v;
        nbr[v] |= 1u << u;
    }
    auto q_of = [&](uint32_t S, int v) {
        // vertices outside S+v reachable from v through S
        uint32_t expanded = 0;
        uint32_t outside = nbr[v] & ~S & ~(1u << v);
        uint32_t queue = nbr[v] & S;
        while (queue) {
            int x = __builtin_ctz(queue);
            queue &= queue - 1;
            if (expanded & (1u << x)) continue;
            expanded |= 1u << x;
            outside |= nbr[x] & ~S & ~(1u << v);
            queue |= nbr[x] & S & ~expanded;
        }
        return __builtin_popcount(outside);
    };
    std::vector<int8_t> dp(1u << n, 127);
    std::vector<int8_t> pick(1u << n, -1);
    dp[0] = -1;
    for (uint32_t S = 1; S < (1u << n); ++S) {
        uint32_t cur = S;
        while (cur) {
            int v = __builtin_ctz(cur);
            cur &= cur - 1;
            uint32_t T = S & ~(1u << v);
            int cost = std::max<int>(dp[T], q_of(T, v));
            if (cost < dp[S]) {
                dp[S] = static_cast<int8_t>(cost);
                pick[S] = static_cast<int8_t>(v);
            }
        }
    }
    uint32_t S = (1u << n) - 1;
    elim_order.clear();
    while (S) {
        int v = pick[S];
        elim_order.push_back(v);
        S &= ~(1u << v);
    }
    std::reverse(elim_order.begin(), elim_order.end());
    return dp[(1u << n) - 1];
}

// min-fill elimination order
std::vector<int> min_fill_order(const Graph& g) {
    int n = g.n;
    std::vector<std::set<int>> adj(n);
    for (auto [u, v] : g.edges) {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    std::vector<char> gone(n, 0);
    std::vector<int> order;
    for (int step = 0; step < n; ++step) {
        int best = -1;
        long best_fill = -1;
        for (int v = 0; v < n; ++v) {
            if (gone[v]) continue;
            long fill = 0;
            for (auto i = adj[v].begin(); i != adj[v].end(); ++i)
                for (auto j = std::next(i); j != adj[v].end(); ++j)
                    if (!adj[*i].count(*j)) ++fill;
            if (best == -1 || fill < best_fill ||
                (fill == best_fill && v < best)) {
                best = v;
                best_fill = fill;
            }
        }
        order.push_back(best);
        gone[best] = 1;
        std::vector<int> nb(adj[best].begin(), adj[best].end());
        for (size_t i = 0; i < nb.size(); ++i)
            for (size_t j = i + 1; j < nb.size(); ++j) {
                adj[nb[i]].insert(nb[j]);
                adj[nb[j]].insert(nb[i]);
            }
        for (int w : nb) adj[w].erase(best);
        adj[best].clear();
    }
    return order;
}

// decomposition from an elimination order via fill-in bags
TreeDecomposition td_from_order(const Graph& g, const std::vector<int>& order) {
    int n = g.n;
    std::vector<std::set<int>> adj(n);
    for (auto [u, v] : g.edges) {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    std::vector<std::vector<int>> bags(n);
    for (int i = 0; i < n; ++i) {
        int v = order[i];
        std::vector<int> later;
        for (int w : adj[v])
            if (pos[w] > i) later.push_back(w);
        bags[i] = later;
        bags[i].push_back(v);
        std::sort(bags[i].begin(), bags[i].end());
        for (size_t a = 0; a < later.size(); ++a)
            for (size_t b = a + 1; b < later.size(); ++b) {
                adj[later[a]].insert(later[b]);
                adj[later[b]].insert(later[a]);
            }
    }
    TreeDecomposition td;
    td.bags = bags;
    // connect bag i to the bag of the earliest-eliminated later neighbor
    for (int i = 0; i < n; ++i) {
        int v = order[i];
        (void)v;
        int target = -1;
        for (int w : bags[i])
            if (pos[w] > i && (target == -1 || pos[w] < pos[target])) target = w;
        if (target != -1) td.tree_edges.push_back({i, pos[target]});
    }
    // components yield a forest: link roots arbitrarily
    if (static_cast<int>(td.tree_edges.size()) < n - 1) {
        std::vector<int> rep(n);
        std::iota(rep.begin(), rep.end(), 0);
        std::function<int(int)> find = [&](int x) {
            return rep[x] == x ? x : rep[x] = find(rep[x]);
        };
        for (auto [a, b] : td.tree_edges) rep[find(a)] = find(b);
        for (int i = 1; i < n; ++i)
            if (find(i) != find(0)) {
                td.tree_edges.push_back({0, i});
                rep[find(i)] = find(0);
            }
    }
    return td;
}

}  // namespace

TreeDecomposition compute_td(const Graph& g) {
    if (g.n == 0) throw ParseError{"empty graph", 0};
    if (g.n == 1) {
        TreeDecomposition td;
        td.bags = {{0}};
        return td;
    }
    std::vector<int> order;
    if (g.n <= 20)
        exact_treewidth(g, order);
    else
        order = min_fill_order(g);
    auto td = td_from_order(g, order);
    td.validate(g);
    return td;
}

}  // namespace mapwit
