#include "mapwit/certio.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mapwit/planarity.hpp"

namespace mapwit {

using json = nlohmann::ordered_json;

namespace {

// stable external ids: reals 1..n (original labels + 1); intersections from
// n+1 in a canonical order (sorted neighbor lists, then discovery)
std::map<int, int> external_ids(const Graph& g, const EmbeddedGraph& w) {
    std::map<int, int> ext;
    std::vector<std::pair<std::vector<int>, int>> inters;
    for (int v = 0; v < static_cast<int>(w.verts.size()); ++v) {
        if (!w.verts[v].alive) continue;
        if (w.verts[v].label >= 0) {
            ext[v] = w.verts[v].label + 1;
        } else {
            std::vector<int> nb;
            for (int d : w.rot[v]) nb.push_back(w.verts[w.head(d)].label + 1);
            std::sort(nb.begin(), nb.end());
            inters.push_back({nb, v});
        }
    }
    std::sort(inters.begin(), inters.end());
    int next = g.n + 1;
    for (auto& [nb, v] : inters) ext[v] = next++;
    return ext;
}

}  // namespace

std::string certificate_to_json(const Graph& g, const EmbeddedGraph& w, int k, bool hole_free) {
    auto ext = external_ids(g, w);
    json j;
    j["n"] = g.n;
    j["k"] = k;
    j["hole_free"] = hole_free;
    {
        std::ostringstream fp;
        fp << std::hex << g.fingerprint();
        j["fingerprint"] = fp.str();
    }
    // intersections sorted by external id
    std::vector<std::pair<int, int>> by_ext;  // (ext, vid)
    for (auto [v, e] : ext)
        if (w.verts[v].label < 0) by_ext.push_back({e, v});
    std::sort(by_ext.begin(), by_ext.end());
    j["intersections"] = json::array();
    for (auto [e, v] : by_ext) {
        json it;
        it["id"] = e;
        std::vector<int> nb;
        for (int d : w.rot[v]) nb.push_back(ext.at(w.head(d)));
        std::sort(nb.begin(), nb.end());
        it["neighbors"] = nb;
        j["intersections"].push_back(it);
    }
    // rotation: ordered neighbor lists for every vertex with edges
    j["rotation"] = json::object();
    std::vector<std::pair<int, int>> all_by_ext;
    for (auto [v, e] : ext) all_by_ext.push_back({e, v});
    std::sort(all_by_ext.begin(), all_by_ext.end());
    for (auto [e, v] : all_by_ext) {
        if (w.degree(v) == 0) continue;
        std::vector<int> nb;
        for (int d : w.rot[v]) nb.push_back(ext.at(w.head(d)));
        j["rotation"][std::to_string(e)] = nb;
    }
    // position: faces with their walks as vertex sequences
    j["position"] = json::array();
    int fid = 0;
    for (const auto& fc : w.faces) {
        if (!fc.alive) continue;
        json f;
        f["face"] = fid++;
        json walks = json::array();
        for (const auto& wk : fc.walks) {
            std::vector<int> seq;
            if (wk.is_isolated())
                seq.push_back(ext.at(wk.isolated));
            else
                for (int d : wk.darts) seq.push_back(ext.at(w.tail(d)));
            walks.push_back(seq);
        }
        f["walks"] = walks;
        j["position"].push_back(f);
    }
    return j.dump(2) + "\n";
}

ParsedCertificate certificate_from_json(const std::string& text) {
    json j = json::parse(text);
    ParsedCertificate out;
    out.n = j.at("n").get<int>();
    out.k = j.at("k").get<int>();
    out.hole_free = j.at("hole_free").get<bool>();
    if (j.contains("fingerprint"))
        out.fingerprint = std::stoull(j.at("fingerprint").get<std::string>(), nullptr, 16);
    // vertices: reals 1..n then intersections in listed order
    std::map<int, int> vid;  // external -> internal
    std::vector<int> labels;
    for (int i = 1; i <= out.n; ++i) {
        vid[i] = static_cast<int>(labels.size());
        labels.push_back(i - 1);
    }
    std::vector<std::pair<int, std::vector<int>>> inters;
    for (const auto& it : j.at("intersections")) {
        int id = it.at("id").get<int>();
        vid[id] = static_cast<int>(labels.size());
        labels.push_back(-1);
        inters.push_back({id, it.at("neighbors").get<std::vector<int>>()});
    }
    // edges from intersection neighbor lists
    std::vector<std::pair<int, int>> edges;
    std::map<std::pair<int, int>, int> eid;
    for (auto& [id, nbs] : inters)
        for (int r : nbs) {
            eid[{std::min(id, r), std::max(id, r)}] = static_cast<int>(edges.size());
            edges.push_back({vid.at(r), vid.at(id)});
        }
    // rotations
    std::vector<std::vector<int>> rot(labels.size());
    if (j.contains("rotation"))
        for (auto& [key, arr] : j.at("rotation").items()) {
            int e = std::stoi(key);
            for (auto& nb : arr) {
                int o = nb.get<int>();
                auto it = eid.find({std::min(e, o), std::max(e, o)});
                if (it == eid.end()) throw std::runtime_error("rotation names a missing edge");
                int edge = it->second;
                int d = 2 * edge + (edges[edge].first == vid.at(e) ? 0 : 1);
                rot[vid.at(e)].push_back(d);
            }
        }
    // build embedded graph; when the position section is present we honor it,
    // otherwise nest components by default
    out.witness = assemble_embedded(labels, edges, rot, false);
    if (j.contains("position") && !j.at("position").empty()) {
        // reassemble faces from walks by matching dart cycles via tails
        EmbeddedGraph& w = out.witness;
        auto cycles = trace_face_cycles(w);
        // map: canonical vertex-sequence -> list of cycle ids
        auto seq_of = [&](const std::vector<int>& cyc) {
            std::vector<int> s;
            for (int d : cyc) s.push_back(w.tail(d));
            // minimal rotation for matching
            size_t n2 = s.size();
            std::vector<int> best = s;
            for (size_t r = 1; r < n2; ++r) {
                std::vector<int> cand;
                for (size_t i = 0; i < n2; ++i) cand.push_back(s[(r + i) % n2]);
                if (cand < best) best = cand;
            }
            return best;
        };
        std::map<std::vector<int>, std::vector<int>> by_seq;
        for (int c = 0; c < static_cast<int>(cycles.size()); ++c)
            by_seq[seq_of(cycles[c])].push_back(c);
        std::vector<EmbeddedGraph::Face> faces;
        std::vector<char> used(cycles.size(), 0);
        bool ok = true;
        for (const auto& f : j.at("position")) {
            EmbeddedGraph::Face fc;
            for (const auto& wk : f.at("walks")) {
                auto seq = wk.get<std::vector<int>>();
                EmbeddedGraph::Walk walk;
                if (seq.size() == 1 && [&] {
                        int v = vid.count(seq[0]) ? vid.at(seq[0]) : -1;
                        return v != -1 && w.degree(v) == 0;
                    }()) {
                    walk.isolated = vid.at(seq[0]);
                } else {
                    std::vector<int> internal;
                    for (int x : seq) internal.push_back(vid.at(x));
                    size_t n2 = internal.size();
                    std::vector<int> best = internal;
                    for (size_t r = 1; r < n2; ++r) {
                        std::vector<int> cand;
                        for (size_t i = 0; i < n2; ++i) cand.push_back(internal[(r + i) % n2]);
                        if (cand < best) best = cand;
                    }
                    auto it = by_seq.find(best);
                    if (it == by_seq.end() || it->second.empty()) {
                        ok = false;
                        break;
                    }
                    int c = it->second.back();
                    it->second.pop_back();
                    used[c] = 1;
                    walk.darts = cycles[c];
                }
                fc.walks.push_back(std::move(walk));
            }
            if (!ok) break;
            faces.push_back(std::move(fc));
        }
        bool all_used = ok;
        for (auto& [s, v] : by_seq)
            if (!v.empty()) all_used = false;
        if (all_used) {
            out.witness.faces = std::move(faces);
            if (!out.witness.coherent(false))
                out.witness = assemble_embedded(labels, edges, rot, false);
        }
    }
    return out;
}

Drawing layout_witness(const EmbeddedGraph& w_in) {
    EmbeddedGraph w = w_in.compacted();
    Drawing d;
    int n = static_cast<int>(w.verts.size());
    d.pos.assign(n, {0.0, 0.0});
    for (int v = 0; v < n; ++v) d.vertex_ids.push_back(v);
    for (const auto& e : w.edges)
        if (e.alive) d.segments.push_back({e.u, e.v});
    if (n == 0) return d;
    if (n == 1) {
        d.pos[0] = {0.0, 0.0};
        return d;
    }
    // choose the face with the most distinct vertices as outer boundary
    int outer = -1, best = -1;
    for (int f = 0; f < static_cast<int>(w.faces.size()); ++f) {
        if (!w.faces[f].alive) continue;
        int c = w.distinct_vertices_on_face(f);
        if (c > best) {
            best = c;
            outer = f;
        }
    }
    std::vector<int> ring;  // outer cycle vertices in walk order
    if (outer != -1) {
        std::set<int> seen;
        for (const auto& wk : w.faces[outer].walks) {
            if (wk.is_isolated()) {
                if (seen.insert(wk.isolated).second) ring.push_back(wk.isolated);
            } else {
                for (int dd : wk.darts) {
                    int x = w.tail(dd);
                    if (seen.insert(x).second) ring.push_back(x);
                }
            }
        }
    }
    if (ring.empty())
        for (int v = 0; v < n; ++v) ring.push_back(v);
    const double pi = 3.14159265358979323846;
    std::vector<char> pinned(n, 0);
    for (size_t i = 0; i < ring.size(); ++i) {
        double a = 2 * pi * static_cast<double>(i) / static_cast<double>(ring.size());
        d.pos[ring[i]] = {std::cos(a) * 100.0, std::sin(a) * 100.0};
        pinned[ring[i]] = 1;
    }
    // Tutte-style relaxation for interior vertices
    for (int iter = 0; iter < 2000; ++iter) {
        for (int v = 0; v < n; ++v) {
            if (pinned[v] || w.degree(v) == 0) continue;
            double sx = 0, sy = 0;
            for (int dd : w.rot[v]) {
                sx += d.pos[w.head(dd)].first;
                sy += d.pos[w.head(dd)].second;
            }
            d.pos[v] = {sx / w.degree(v), sy / w.degree(v)};
        }
    }
    // unpinned isolated vertices spread along a small inner ring
    int iso = 0;
    for (int v = 0; v < n; ++v)
        if (!pinned[v] && w.degree(v) == 0) {
            d.pos[v] = {10.0 + 5.0 * iso, 0.0};
            ++iso;
        }
    return d;
}

std::string render_svg(const EmbeddedGraph& w_in) {
    EmbeddedGraph w = w_in.compacted();
    if (!w.coherent(false)) throw std::runtime_error("inconsistent embedding");
    Drawing d = layout_witness(w);
    double minx = 0, miny = 0, maxx = 0, maxy = 0;
    for (auto [x, y] : d.pos) {
        minx = std::min(minx, x);
        maxx = std::max(maxx, x);
        miny = std::min(miny, y);
        maxy = std::max(maxy, y);
    }
    double pad = 12;
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << (minx - pad) << " "
       << (miny - pad) << " " << (maxx - minx + 2 * pad) << " " << (maxy - miny + 2 * pad)
       << "\">\n";
    for (auto [u, v] : d.segments)
        os << "  <line x1=\"" << d.pos[u].first << "\" y1=\"" << d.pos[u].second << "\" x2=\""
           << d.pos[v].first << "\" y2=\"" << d.pos[v].second
           << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (int v = 0; v < static_cast<int>(w.verts.size()); ++v) {
        if (!w.verts[v].alive) continue;
        auto [x, y] = d.pos[v];
        if (w.verts[v].label >= 0) {
            os << "  <circle cx=\"" << x << "\" cy=\"" << y
               << "\" r=\"4\" fill=\"white\" stroke=\"black\"/>\n";
            os << "  <text x=\"" << x + 5 << "\" y=\"" << y - 5 << "\" font-size=\"8\">"
               << (w.verts[v].label + 1) << "</text>\n";
        } else {
            os << "  <rect x=\"" << x - 3 << "\" y=\"" << y - 3
               << "\" width=\"6\" height=\"6\" fill=\"black\"/>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace mapwit
