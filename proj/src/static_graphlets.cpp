#include "dglet/static_graphlets.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace dglet {

namespace {

std::vector<StaticGraphletDef> build_defs() {
    std::vector<StaticGraphletDef> g(30);
    auto set = [&](int id, int n, std::vector<std::pair<int, int>> edges,
                   std::array<int, 5> orbit) {
        g[id] = StaticGraphletDef{n, std::move(edges), orbit};
        for (int i = n; i < 5; ++i)
            g[id].orbit[i] = -1;
    };
    set(0, 2, {{0, 1}}, {0, 0, -1, -1, -1});
    set(1, 3, {{0, 1}, {1, 2}}, {1, 2, 1, -1, -1});
    set(2, 3, {{0, 1}, {0, 2}, {1, 2}}, {3, 3, 3, -1, -1});
    set(3, 4, {{0, 1}, {1, 2}, {2, 3}}, {4, 5, 5, 4, -1});
    set(4, 4, {{0, 1}, {0, 2}, {0, 3}}, {7, 6, 6, 6, -1});
    set(5, 4, {{0, 1}, {0, 3}, {1, 2}, {2, 3}}, {8, 8, 8, 8, -1});
    set(6, 4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}}, {11, 10, 10, 9, -1});
    set(7, 4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}}, {13, 13, 12, 12, -1});
    set(8, 4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, {14, 14, 14, 14, -1});
    set(9, 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}, {15, 16, 17, 16, 15});
    set(10, 5, {{0, 1}, {1, 2}, {2, 3}, {2, 4}}, {18, 20, 21, 19, 19});
    set(11, 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, {23, 22, 22, 22, 22});
    set(12, 5, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 4}}, {25, 26, 26, 24, 24});
    set(13, 5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}}, {29, 29, 30, 28, 27});
    set(14, 5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}}, {32, 32, 33, 31, 31});
    set(15, 5, {{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}}, {34, 34, 34, 34, 34});
    set(16, 5, {{0, 1}, {0, 3}, {0, 4}, {1, 2}, {2, 3}}, {38, 37, 36, 37, 35});
    set(17, 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}}, {42, 41, 40, 40, 39});
    set(18, 5, {{0, 1}, {0, 4}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}, {43, 43, 43, 43, 44});
    set(19, 5, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 4}}, {48, 48, 47, 46, 45});
    set(20, 5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}}, {50, 50, 49, 49, 49});
    set(21, 5, {{0, 1}, {0, 3}, {0, 4}, {1, 2}, {1, 4}, {2, 3}}, {53, 53, 51, 51, 52});
    set(22, 5, {{0, 3}, {0, 4}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}, {54, 54, 54, 55, 55});
    set(23, 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {2, 3}}, {58, 57, 57, 57, 56});
    set(24, 5, {{0, 2}, {0, 3}, {0, 4}, {1, 3}, {1, 4}, {2, 4}, {3, 4}}, {60, 59, 59, 60, 61});
    set(25, 5, {{0, 2}, {0, 3}, {0, 4}, {1, 3}, {1, 4}, {2, 3}, {2, 4}}, {64, 62, 64, 63, 63});
    set(26, 5, {{0, 2}, {0, 3}, {0, 4}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}},
        {66, 65, 66, 67, 67});
    set(27, 5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 4}, {3, 4}},
        {68, 68, 68, 68, 69});
    set(28, 5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}},
        {70, 70, 71, 71, 71});
    set(29, 5,
        {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}},
        {72, 72, 72, 72, 72});
    return g;
}

using AdjMat = std::array<std::array<bool, 5>, 5>;

AdjMat adj_matrix(const StaticGraphletDef &d) {
    AdjMat a{};
    for (auto [x, y] : d.edges) {
        a[x][y] = true;
        a[y][x] = true;
    }
    return a;
}

bool def_connected(const StaticGraphletDef &d) {
    AdjMat a = adj_matrix(d);
    std::array<bool, 5> vis{};
    std::vector<int> stack{0};
    vis[0] = true;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y = 0; y < d.n; ++y)
            if (a[x][y] && !vis[y]) {
                vis[y] = true;
                stack.push_back(y);
            }
    }
    return std::all_of(vis.begin(), vis.begin() + d.n, [](bool b) { return b; });
}

// Smallest edge-bitmask over all relabelings; equal iff isomorphic.
std::uint32_t canonical_mask(const StaticGraphletDef &d) {
    AdjMat a = adj_matrix(d);
    std::array<int, 5> p;
    std::iota(p.begin(), p.begin() + d.n, 0);
    std::uint32_t best = ~0u;
    do {
        std::uint32_t m = 0;
        int bit = 0;
        for (int i = 0; i < d.n; ++i)
            for (int j = i + 1; j < d.n; ++j, ++bit)
                if (a[p[i]][p[j]])
                    m |= 1u << bit;
        best = std::min(best, m);
    } while (std::next_permutation(p.begin(), p.begin() + d.n));
    return best;
}

void verify_defs(const std::vector<StaticGraphletDef> &defs) {
    auto fail = [](const std::string &msg) {
        throw std::logic_error("static graphlet table: " + msg);
    };
    if (defs.size() != 30)
        fail("expected 30 entries");
    int next_orbit = 0;
    for (std::size_t id = 0; id < defs.size(); ++id) {
        const auto &d = defs[id];
        std::string tag = "entry " + std::to_string(id);
        if (d.n < 2 || d.n > 5)
            fail(tag + ": bad node count");
        for (auto [x, y] : d.edges)
            if (x < 0 || y <= x || y >= d.n)
                fail(tag + ": bad edge");
        if (!def_connected(d))
            fail(tag + ": disconnected");

        // Orbit labels must be the automorphism partition of the structure.
        AdjMat a = adj_matrix(d);
        std::array<int, 5> comp;
        std::iota(comp.begin(), comp.end(), 0);
        auto find = [&](int x) {
            while (comp[x] != x)
                x = comp[x] = comp[comp[x]];
            return x;
        };
        std::array<int, 5> p;
        std::iota(p.begin(), p.begin() + d.n, 0);
        do {
            bool aut = true;
            for (int i = 0; i < d.n && aut; ++i)
                for (int j = i + 1; j < d.n && aut; ++j)
                    aut = a[i][j] == a[p[i]][p[j]];
            if (aut)
                for (int i = 0; i < d.n; ++i)
                    comp[find(i)] = find(p[i]);
        } while (std::next_permutation(p.begin(), p.begin() + d.n));
        for (int i = 0; i < d.n; ++i)
            for (int j = 0; j < d.n; ++j)
                if ((d.orbit[i] == d.orbit[j]) != (find(i) == find(j)))
                    fail(tag + ": orbit labels disagree with automorphisms");

        // Orbit ids are consecutive across the whole table.
        std::vector<int> ids(d.orbit.begin(), d.orbit.begin() + d.n);
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (int o : ids)
            if (o != next_orbit++)
                fail(tag + ": orbit ids not consecutive");
    }
    if (next_orbit != 73)
        fail("expected 73 orbits");
    for (std::size_t i = 0; i < defs.size(); ++i)
        for (std::size_t j = i + 1; j < defs.size(); ++j)
            if (defs[i].n == defs[j].n && canonical_mask(defs[i]) == canonical_mask(defs[j]))
                fail("entries " + std::to_string(i) + " and " + std::to_string(j) +
                     " are isomorphic");
}

// Bit position of pair (i,j), i < j. Grouped by the larger endpoint, so a
// mask over positions 0..s-1 is a prefix of the mask over 0..s: growing a
// subset only appends bits.
int pair_bit(int i, int j) { return j * (j - 1) / 2 + i; }

// Per-size lookup: edge bitmask over positions 0..m-1 -> graphlet id and
// per-position orbit. -1 marks disconnected masks.
struct MaskTables {
    std::array<std::vector<std::int16_t>, 6> graphlet;
    std::array<std::vector<std::array<std::int8_t, 5>>, 6> orbits;
};

MaskTables build_tables(const std::vector<StaticGraphletDef> &defs) {
    MaskTables t;
    std::vector<AdjMat> mats;
    mats.reserve(defs.size());
    for (const auto &d : defs)
        mats.push_back(adj_matrix(d));

    for (int m = 2; m <= 5; ++m) {
        int bits = m * (m - 1) / 2;
        t.graphlet[m].assign(std::size_t(1) << bits, -1);
        t.orbits[m].assign(std::size_t(1) << bits, {-1, -1, -1, -1, -1});
        for (std::uint32_t mask = 0; mask < (1u << bits); ++mask) {
            AdjMat a{};
            int edge_count = 0;
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                    if (mask >> pair_bit(i, j) & 1) {
                        a[i][j] = a[j][i] = true;
                        ++edge_count;
                    }
            std::array<bool, 5> vis{};
            std::vector<int> stack{0};
            vis[0] = true;
            while (!stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                for (int y = 0; y < m; ++y)
                    if (a[x][y] && !vis[y]) {
                        vis[y] = true;
                        stack.push_back(y);
                    }
            }
            if (!std::all_of(vis.begin(), vis.begin() + m, [](bool b) { return b; }))
                continue;

            bool matched = false;
            for (std::size_t id = 0; id < defs.size() && !matched; ++id) {
                const auto &d = defs[id];
                if (d.n != m || (int)d.edges.size() != edge_count)
                    continue;
                std::array<int, 5> p; // position i of the mask -> position p[i] of the def
                std::iota(p.begin(), p.begin() + m, 0);
                do {
                    bool ok = true;
                    for (int i = 0; i < m && ok; ++i)
                        for (int j = i + 1; j < m && ok; ++j)
                            ok = a[i][j] == mats[id][p[i]][p[j]];
                    if (ok) {
                        t.graphlet[m][mask] = (std::int16_t)id;
                        for (int i = 0; i < m; ++i)
                            t.orbits[m][mask][i] = (std::int8_t)d.orbit[p[i]];
                        matched = true;
                        break;
                    }
                } while (std::next_permutation(p.begin(), p.begin() + m));
            }
            if (!matched)
                throw std::logic_error("static graphlet table: unmatched connected mask");
        }
    }
    return t;
}

const MaskTables &tables() {
    static const MaskTables t = build_tables(static_catalog());
    return t;
}

// Bit-matrix adjacency for fast induced-subgraph masks.
struct BitAdj {
    int n = 0;
    int words = 0;
    std::vector<std::uint64_t> rows;

    explicit BitAdj(const StaticGraph &g) : n(g.n), words((g.n + 63) / 64) {
        rows.assign((std::size_t)n * words, 0);
        for (auto [a, b] : g.edges) {
            rows[(std::size_t)a * words + b / 64] |= std::uint64_t(1) << (b % 64);
            rows[(std::size_t)b * words + a / 64] |= std::uint64_t(1) << (a % 64);
        }
    }
    bool has(int a, int b) const {
        return rows[(std::size_t)a * words + b / 64] >> (b % 64) & 1;
    }
};

// Enumerates every connected induced subset of 2..max_m nodes exactly once
// (extension candidates are restricted to ids above the root and to nodes
// not already adjacent to the subset). record(sub, size, mask) gets the
// nodes in insertion order plus the edge bitmask over those positions.
template <class F>
void subsets_extend(const std::vector<std::vector<int>> &adj, const BitAdj &bits,
                    std::vector<char> &seen, std::array<int, 5> &sub, int depth,
                    std::vector<int> ext, int root, int max_m, std::uint32_t mask, F &record) {
    if (depth >= (int)sub.size())
        return;
    while (!ext.empty()) {
        int w = ext.back();
        ext.pop_back();
        sub[depth] = w;
        std::uint32_t child_mask = mask;
        for (int i = 0; i < depth; ++i)
            if (bits.has(sub[i], w))
                child_mask |= std::uint32_t(1) << pair_bit(i, depth);
        record(sub, depth + 1, child_mask);
        if (depth + 1 == max_m)
            continue;
        std::vector<int> child = ext;
        std::vector<int> added;
        for (int u : adj[w])
            if (u > root && !seen[u]) {
                seen[u] = 1;
                child.push_back(u);
                added.push_back(u);
            }
        subsets_extend(adj, bits, seen, sub, depth + 1, std::move(child), root, max_m,
                       child_mask, record);
        for (int u : added)
            seen[u] = 0;
    }
}

template <class F>
void for_each_connected_subset(const StaticGraph &g, int max_m, F record) {
    auto adj = g.adjacency();
    BitAdj bits(g);
    std::vector<char> seen(g.n, 0);
    std::array<int, 5> sub{};
    for (int v = 0; v < g.n; ++v) {
        seen[v] = 1;
        std::vector<int> ext;
        for (int u : adj[v])
            if (u > v) {
                seen[u] = 1;
                ext.push_back(u);
            }
        sub[0] = v;
        subsets_extend(adj, bits, seen, sub, 1, ext, v, max_m, 0, record);
        seen[v] = 0;
        for (int u : adj[v])
            if (u > v)
                seen[u] = 0;
    }
}

void check_max_n(int max_n) {
    if (max_n < 3 || max_n > 5)
        throw std::invalid_argument("max_n must be 3, 4 or 5");
}

CountParams static_params(int max_n) {
    CountParams p;
    p.method = "static";
    p.max_n = max_n;
    p.max_k = 0;
    return p;
}

} // namespace

const std::vector<StaticGraphletDef> &static_catalog() {
    static const std::vector<StaticGraphletDef> defs = [] {
        auto d = build_defs();
        verify_defs(d);
        return d;
    }();
    return defs;
}

int static_graphlet_count(int max_n) {
    check_max_n(max_n);
    return max_n == 3 ? 3 : max_n == 4 ? 9 : 30;
}

int static_orbit_count(int max_n) {
    check_max_n(max_n);
    return max_n == 3 ? 4 : max_n == 4 ? 15 : 73;
}

int classify_static(int n, const std::vector<std::pair<int, int>> &edges) {
    if (n < 2 || n > 5)
        throw std::invalid_argument("classify_static: node count must be 2..5");
    std::uint32_t mask = 0;
    for (auto [a, b] : edges) {
        int x = std::min(a, b), y = std::max(a, b);
        if (x < 0 || y >= n || x == y)
            throw std::invalid_argument("classify_static: bad edge");
        mask |= std::uint32_t(1) << pair_bit(x, y);
    }
    int id = tables().graphlet[n][mask];
    if (id < 0)
        throw std::invalid_argument("classify_static: graph is disconnected");
    return id;
}

int static_orbit_of(int n, const std::vector<std::pair<int, int>> &edges, int node) {
    classify_static(n, edges); // validates
    if (node < 0 || node >= n)
        throw std::invalid_argument("static_orbit_of: bad node");
    std::uint32_t mask = 0;
    for (auto [a, b] : edges)
        mask |= std::uint32_t(1) << pair_bit(std::min(a, b), std::max(a, b));
    return tables().orbits[n][mask][node];
}

CountVector count_static(const StaticGraph &graph, int max_n) {
    check_max_n(max_n);
    const auto &t = tables();
    std::vector<std::uint64_t> acc(static_graphlet_count(max_n), 0);
    for_each_connected_subset(graph, max_n,
                              [&](const std::array<int, 5> &, int size, std::uint32_t mask) {
                                  ++acc[t.graphlet[size][mask]];
                              });
    CountVector out;
    out.params = static_params(max_n);
    out.counts.assign(acc.begin(), acc.end());
    return out;
}

OrbitMatrix gdv(const StaticGraph &graph, int max_n) {
    check_max_n(max_n);
    const auto &t = tables();
    OrbitMatrix m;
    m.params = static_params(max_n);
    m.names = graph.names;
    m.node_count = graph.n;
    m.orbit_count = static_orbit_count(max_n);
    m.cells.assign((std::size_t)graph.n * m.orbit_count, 0);
    for_each_connected_subset(
        graph, max_n, [&](const std::array<int, 5> &sub, int size, std::uint32_t mask) {
            const auto &orb = t.orbits[size][mask];
            for (int i = 0; i < size; ++i)
                ++m.cells[(std::size_t)sub[i] * m.orbit_count + orb[i]];
        });
    return m;
}

TemporalStaticCounts count_static_temporal(const SnapshotSeries &series, int max_n) {
    check_max_n(max_n);
    TemporalStaticCounts out;
    out.params = static_params(max_n);
    out.params.method = "static-temporal";
    out.params.window_size = series.window_size;
    out.params.threshold = series.threshold;
    for (const auto &snap : series.snapshots) {
        out.windows.push_back(count_static(snap, max_n));
        out.windows.back().params = out.params;
        for (const auto &c : out.windows.back().counts)
            out.flat.push_back(c);
    }
    return out;
}

TemporalNodeGdv node_gdv_temporal(const SnapshotSeries &series, int max_n) {
    check_max_n(max_n);
    TemporalNodeGdv out;
    out.params = static_params(max_n);
    out.params.method = "static-temporal";
    out.params.window_size = series.window_size;
    out.params.threshold = series.threshold;
    out.names = series.names;
    out.window_count = (int)series.snapshots.size();
    out.orbits_per_window = static_orbit_count(max_n);
    out.cells.assign((std::size_t)series.names.size() * out.window_count * out.orbits_per_window,
                     0);
    for (int w = 0; w < out.window_count; ++w) {
        OrbitMatrix m = gdv(series.snapshots[w], max_n);
        for (int v = 0; v < m.node_count; ++v)
            for (int o = 0; o < m.orbit_count; ++o)
                out.at(v, w, o) = m.at(v, o);
    }
    return out;
}

} // namespace dglet
