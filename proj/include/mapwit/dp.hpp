#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "mapwit/embedded.hpp"
#include "mapwit/graph.hpp"
#include "mapwit/treedecomp.hpp"

namespace mapwit {

struct DpOptions {
    int k = 1;
    bool hole_free = false;
    bool carry_witness = false;  // certificate mode: entries hold partial witnesses
};

struct RecordEntry {
    EmbeddedGraph sketch;
    std::string key;
    EmbeddedGraph witness;  // certificate mode only
    std::string provenance; // op tag + parent keys, for debugging
};

// Deduplicated sketch set at a bag. Only entries of the requested subrecord
// are kept (degree filter; hole-free counter filter), so emptiness means
// rejection.
using Record = std::map<std::string, RecordEntry>;

struct DpStats {
    long max_record_size = 0;
    long total_entries = 0;
    long sketch_cap_violations = 0;  // soft 12*omega size bound
    long enumeration_caps_hit = 0;
    int omega = 0;

    void note_record(const Record& r);
};

Record init_leaf(int v, const DpOptions& opts);
Record op_forget(const Record& r, int v, const std::set<int>& new_bag, const DpOptions& opts,
                 DpStats& stats);
Record op_introduce(const Record& r, int v, const std::set<int>& new_bag, const Graph& g,
                    const DpOptions& opts, DpStats& stats);
Record op_join(const Record& r1, const Record& r2, const std::set<int>& bag, const Graph& g,
               const DpOptions& opts, DpStats& stats);

struct RunResult {
    bool yes = false;
    std::optional<EmbeddedGraph> witness;
    DpStats stats;
};

// Bottom-up evaluation over a nice decomposition of a connected graph
// (biconnected required in hole-free mode). per_bag, when set, receives each
// node's record after it is computed.
RunResult dp_run(const Graph& g, const NiceTreeDecomposition& ntd, const DpOptions& opts,
                 const std::function<void(int, const Record&)>& per_bag = nullptr);

// Minimal k via binary search over [1, width+1] plus the n-1 probe.
std::optional<int> min_k(const Graph& g, const NiceTreeDecomposition& ntd, bool hole_free,
                         bool certificate, DpStats* stats = nullptr);

struct RecognizeResult {
    bool yes = false;
    int k = -1;  // echoed / minimal k
    std::optional<EmbeddedGraph> witness;
    DpStats stats;
};

// Top-level driver: block decomposition in general mode, biconnectivity gate
// in hole-free mode, witness gluing at cut vertices.
RecognizeResult recognize(const Graph& g, const std::optional<TreeDecomposition>& td,
                          std::optional<int> k, bool hole_free, bool certificate);

}  // namespace mapwit
