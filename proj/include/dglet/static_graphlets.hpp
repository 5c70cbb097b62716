#pragma once

#include "dglet/counting.hpp"
#include "dglet/temporal.hpp"

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace dglet {

// One entry of the standard 2-5 node graphlet catalog: the node positions
// 0..n-1, the edge list over those positions, and the global orbit id of
// each position. Orbit ids are contiguous across the catalog (0..72).
struct StaticGraphletDef {
    int n;
    std::vector<std::pair<int, int>> edges;
    std::array<int, 5> orbit; // positions >= n hold -1
};

// All 30 graphlets in their conventional order (G0 = edge ... G29 = K5).
// Verified at startup: entries are connected, pairwise non-isomorphic, and
// each one's orbit labels match its automorphism partition exactly.
const std::vector<StaticGraphletDef> &static_catalog();

int static_graphlet_count(int max_n); // 3 -> 3, 4 -> 9, 5 -> 30
int static_orbit_count(int max_n);    // 3 -> 4, 4 -> 15, 5 -> 73

// Graphlet id of the connected graph given by edges over nodes 0..n-1.
// Throws std::invalid_argument for n outside 2..5 or a disconnected input.
int classify_static(int n, const std::vector<std::pair<int, int>> &edges);

// Orbit id of position `node` within that graphlet.
int static_orbit_of(int n, const std::vector<std::pair<int, int>> &edges, int node);

// Counts of connected induced subgraphs on 2..max_n nodes, indexed by
// graphlet id. max_n must be 3, 4 or 5.
CountVector count_static(const StaticGraph &graph, int max_n);

// Graphlet degree vector per node: cell (v, o) counts the induced connected
// subgraphs where v sits at orbit o.
OrbitMatrix gdv(const StaticGraph &graph, int max_n);

struct TemporalStaticCounts {
    CountParams params;
    std::vector<CountVector> windows;
    std::vector<BigInt> flat; // window-major concatenation
};

// count_static applied to every snapshot of the series.
TemporalStaticCounts count_static_temporal(const SnapshotSeries &series, int max_n);

struct TemporalNodeGdv {
    CountParams params;
    std::vector<std::string> names;
    int window_count = 0;
    int orbits_per_window = 0;
    std::vector<std::uint64_t> cells; // node-major, then window-major

    std::uint64_t at(int node, int window, int orbit) const {
        return cells[((std::size_t)node * window_count + window) * orbits_per_window + orbit];
    }
    std::uint64_t &at(int node, int window, int orbit) {
        return cells[((std::size_t)node * window_count + window) * orbits_per_window + orbit];
    }
};

// gdv applied to every snapshot of the series.
TemporalNodeGdv node_gdv_temporal(const SnapshotSeries &series, int max_n);

} // namespace dglet
