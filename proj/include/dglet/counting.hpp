#pragma once

#include "dglet/catalog.hpp"
#include "dglet/temporal.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dglet {

enum class Mode { regular, causal };

const char *mode_name(Mode mode);

struct CountParams {
    std::string method = "dynamic"; // dynamic | static | static-temporal
    Mode mode = Mode::regular;
    double dt = 0.0;
    int max_n = 0;
    int max_k = 0;          // 0 for static methods
    double window_size = 0; // t_w when a snapshot pipeline produced the input, else 0
    int threshold = 0;      // w, likewise
};

// Network-level signature: one count per catalog graphlet id, zero-filled
// so vectors from the same catalog always share dimensionality.
struct CountVector {
    CountParams params;
    std::vector<BigInt> counts;
};

// Per-node orbit counts (the node's graphlet degree vector).
struct OrbitMatrix {
    CountParams params;
    std::vector<std::string> names; // node id -> token, may be empty
    int node_count = 0;
    int orbit_count = 0;
    std::vector<std::uint64_t> cells; // node-major

    std::uint64_t at(int node, int orbit) const {
        return cells[(std::size_t)node * orbit_count + orbit];
    }
    std::uint64_t &at(int node, int orbit) {
        return cells[(std::size_t)node * orbit_count + orbit];
    }
};

// Count every chain of <= max_k events growable by the rule: the next event
// shares a node with the chain's last event (u,v,t,sigma), starts within
// [t+sigma, t+sigma+dt], and comes strictly later in the (t,u,v,input-index)
// total order. causal mode additionally requires, when the new event lies on
// a different node pair, that no event on that pair has t'' < t' and
// t'' + sigma'' >= t. Chains keep at most max_n distinct nodes. Every
// visited chain adds 1 to its canonical graphlet's count and 1 to each of
// its nodes' orbit cells. Deterministic for any thread count.
std::pair<CountVector, OrbitMatrix> count_network(const TemporalNetwork &net, double dt,
                                                  const GraphletCatalog &catalog, Mode mode,
                                                  int threads = 1);

// snapshots_to_events then count_network; dt is in snapshot units.
std::pair<CountVector, OrbitMatrix> count_snapshots(const SnapshotSeries &series, double dt,
                                                    const GraphletCatalog &catalog, Mode mode,
                                                    int threads = 1);

// Work bound |E| + |E| * (D / |E|)^(k-1), D = number of extension-adjacent
// event pairs at this dt; exact rational arithmetic, rounded up.
BigInt estimate_work(const TemporalNetwork &net, double dt, int max_k);

} // namespace dglet
