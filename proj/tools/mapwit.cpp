#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mapwit/certio.hpp"
#include "mapwit/dp.hpp"
#include "mapwit/graph.hpp"
#include "mapwit/oracle.hpp"
#include "mapwit/treedecomp.hpp"
#include "mapwit/witness.hpp"

using namespace mapwit;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int cmd_recognize(const std::string& graph_path, const std::string& td_path, int k, bool want_min,
                  bool hole_free, const std::string& cert_path, bool oracle_check,
                  bool decision_only) {
    Graph g = parse_graph(slurp(graph_path));
    std::optional<TreeDecomposition> td;
    if (!td_path.empty()) td = parse_td(slurp(td_path), g);
    bool certificate = !cert_path.empty() && !decision_only;
    std::optional<int> kk;
    if (!want_min) kk = k;
    auto res = recognize(g, td, kk, hole_free, certificate);
    if (oracle_check && g.n <= 6) {
        bool expect;
        int ko = want_min ? (res.yes ? res.k : g.n) : k;
        if (hole_free)
            expect = brute_force_is_hole_free_k_map(g, ko).yes;
        else
            expect = brute_force_is_k_map(g, ko).yes;
        if (expect != res.yes) {
            std::cerr << "oracle disagreement: dp=" << res.yes << " oracle=" << expect << "\n";
            return 2;
        }
    }
    if (!res.yes) {
        std::cout << "NO\n";
        return 1;
    }
    std::cout << "YES k=" << res.k << "\n";
    if (certificate && res.witness) {
        auto rep = verify_witness(g, *res.witness);
        if (!rep.is_witness) {
            std::cerr << "internal error: certificate failed verification: "
                      << rep.first_failure << "\n";
            return 2;
        }
        std::ofstream out(cert_path);
        out << certificate_to_json(g, *res.witness, res.k, hole_free);
    }
    return 0;
}

int cmd_verify(const std::string& graph_path, const std::string& witness_path, int k,
               bool hole_free) {
    Graph g = parse_graph(slurp(graph_path));
    auto cert = certificate_from_json(slurp(witness_path));
    auto rep = verify_witness(g, cert.witness);
    if (!rep.is_witness) {
        std::cout << "INVALID: " << rep.first_failure << "\n";
        return 1;
    }
    if (k > 0 && rep.max_intersection_degree > k) {
        std::cout << "INVALID: intersection degree " << rep.max_intersection_degree << " > k="
                  << k << "\n";
        return 1;
    }
    if (hole_free && !rep.is_biconnected_quadrangulation) {
        std::cout << "INVALID: not a biconnected quadrangulation\n";
        return 1;
    }
    std::cout << "VALID max_intersection_degree=" << rep.max_intersection_degree
              << (rep.is_compact ? " compact" : " not-compact")
              << (rep.is_biconnected_quadrangulation ? " hole-free" : "") << "\n";
    return 0;
}

int cmd_oracle(const std::string& graph_path, int k, bool hole_free) {
    Graph g = parse_graph(slurp(graph_path));
    auto res = hole_free ? brute_force_is_hole_free_k_map(g, k) : brute_force_is_k_map(g, k);
    if (!res.yes) {
        std::cout << "NO\n";
        return 1;
    }
    std::cout << "YES k=" << k << "\n";
    return 0;
}

int cmd_render(const std::string& witness_path, const std::string& out_path) {
    auto cert = certificate_from_json(slurp(witness_path));
    std::string svg = render_svg(cert.witness);
    std::ofstream out(out_path);
    out << svg;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"map graph recognition via treewidth dynamic programming"};
    app.require_subcommand(1);

    auto* rec = app.add_subcommand("recognize", "decide k-map / hole-free k-map membership");
    std::string graph_path, td_path, cert_path;
    int k = 0;
    bool want_min = false, hole_free = false, oracle_check = false, decision_only = false;
    rec->add_option("graph", graph_path, "input .gr file")->required();
    rec->add_option("--td", td_path, "tree-decomposition .td file");
    auto* kopt = rec->add_option("--k", k, "target k");
    rec->add_flag("--min-k", want_min, "compute the minimum k");
    rec->add_flag("--hole-free", hole_free, "require a hole-free map");
    rec->add_option("--certificate", cert_path, "write witness JSON here");
    rec->add_flag("--oracle-check", oracle_check, "cross-check with the brute-force oracle");
    rec->add_flag("--decision-only", decision_only, "skip certificate construction");

    auto* ver = app.add_subcommand("verify", "verify a witness JSON against a graph");
    std::string vgraph, vwitness;
    int vk = 0;
    bool vhf = false;
    ver->add_option("graph", vgraph, "input .gr file")->required();
    ver->add_option("witness", vwitness, "witness JSON")->required();
    ver->add_option("--k", vk, "required degree bound");
    ver->add_flag("--hole-free", vhf, "require a biconnected quadrangulation");

    auto* orc = app.add_subcommand("oracle", "brute-force recognition (small graphs)");
    std::string ograph;
    int ok_ = 3;
    bool ohf = false;
    orc->add_option("graph", ograph, "input .gr file")->required();
    orc->add_option("--k", ok_, "target k")->required();
    orc->add_flag("--hole-free", ohf, "hole-free variant");

    auto* ren = app.add_subcommand("render", "draw a witness as SVG");
    std::string rwitness, rout;
    ren->add_option("witness", rwitness, "witness JSON")->required();
    ren->add_option("-o,--out", rout, "output SVG path")->required();

    try {
        app.parse(argc, argv);
        if (rec->parsed()) {
            if (!want_min && kopt->count() == 0)
                throw std::runtime_error("recognize needs --k or --min-k");
            return cmd_recognize(graph_path, td_path, k, want_min, hole_free, cert_path,
                                 oracle_check, decision_only);
        }
        if (ver->parsed()) return cmd_verify(vgraph, vwitness, vk, vhf);
        if (orc->parsed()) return cmd_oracle(ograph, ok_, ohf);
        if (ren->parsed()) return cmd_render(rwitness, rout);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.message;
        if (e.line) std::cerr << " (line " << e.line << ")";
        std::cerr << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
