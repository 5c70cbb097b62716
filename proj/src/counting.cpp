#include "dglet/counting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dglet {

const char *mode_name(Mode mode) { return mode == Mode::regular ? "regular" : "causal"; }

namespace {

// Per-network lookup structures. Events are already in the (t,u,v,input)
// total order, so event-id comparisons decide "strictly later" and every
// id list below is time-sorted for free.
struct EventIndex {
    std::vector<std::vector<int>> by_node;       // incident event ids
    std::vector<int> pair_of;                    // event id -> node-pair id
    std::vector<std::vector<int>> pair_events;   // node-pair id -> event ids
    std::vector<std::vector<double>> pair_reach; // prefix max of t + sigma
    std::unordered_map<std::uint64_t, int> pair_ids;

    static std::uint64_t pair_key(int u, int v) {
        return (std::uint64_t)u << 32 | (std::uint32_t)v; // u < v
    }
    int pair_id(int u, int v) const {
        auto it = pair_ids.find(pair_key(u, v));
        return it == pair_ids.end() ? -1 : it->second;
    }
};

EventIndex build_index(const TemporalNetwork &net) {
    EventIndex ix;
    ix.by_node.resize(net.node_count());
    ix.pair_of.resize(net.events.size());
    ix.pair_ids.reserve(net.events.size());
    for (int i = 0; i < (int)net.events.size(); ++i) {
        const Event &e = net.events[i];
        ix.by_node[e.u].push_back(i);
        ix.by_node[e.v].push_back(i);
        auto [it, fresh] =
            ix.pair_ids.emplace(EventIndex::pair_key(e.u, e.v), (int)ix.pair_events.size());
        if (fresh) {
            ix.pair_events.emplace_back();
            ix.pair_reach.emplace_back();
        }
        int pid = it->second;
        ix.pair_of[i] = pid;
        double reach = e.t + e.sigma;
        if (!ix.pair_reach[pid].empty())
            reach = std::max(reach, ix.pair_reach[pid].back());
        ix.pair_events[pid].push_back(i);
        ix.pair_reach[pid].push_back(reach);
    }
    return ix;
}

// An event on another node pair breaks causality for a candidate start t_c
// if it starts before t_c and is still running at t_last (t'' + sigma'' >=
// t_last). pair_reach gives the prefix maximum of t'' + sigma''.
bool blocked(const EventIndex &ix, int pid, double t_c, double t_last,
             const std::vector<Event> &events) {
    const auto &el = ix.pair_events[pid];
    auto pos = std::lower_bound(el.begin(), el.end(), t_c,
                                [&](int idx, double val) { return events[idx].t < val; }) -
               el.begin();
    return pos > 0 && ix.pair_reach[pid][pos - 1] >= t_last;
}

struct Walker {
    const std::vector<Event> &events;
    const EventIndex &ix;
    const GraphletCatalog &cat;
    double dt;
    bool causal;
    int max_n;
    int max_k;
    int total_orbits;

    int nodes[16];
    std::pair<std::uint8_t, std::uint8_t> chain[16];
    int n = 0;
    int k = 0;

    std::vector<std::uint64_t> counts; // per catalog id
    std::vector<std::uint64_t> cells;  // node-major orbit counts

    Walker(const std::vector<Event> &events, const EventIndex &ix, const GraphletCatalog &cat,
           double dt, Mode mode, int node_count)
        : events(events), ix(ix), cat(cat), dt(dt), causal(mode == Mode::causal),
          max_n(cat.max_n()), max_k(cat.max_k()), total_orbits(cat.total_orbits()),
          counts(cat.size(), 0), cells((std::size_t)node_count * cat.total_orbits(), 0) {}

    int dense_of(int id) const {
        for (int i = 0; i < n; ++i)
            if (nodes[i] == id)
                return i;
        return -1;
    }

    void run_root(int r) {
        const Event &e = events[r];
        nodes[0] = e.u;
        nodes[1] = e.v;
        n = 2;
        chain[0] = {0, 1};
        k = 1;
        visit(r);
    }

    void visit(int last) {
        auto res = detail::canonicalize_dense(chain, k);
        int id = cat.find_key(res.key);
        if (id < 0)
            throw std::logic_error("count_network: chain missing from catalog");
        ++counts[id];
        int base = cat.entry(id).orbit_start;
        if (res.n == 2) {
            ++cells[(std::size_t)nodes[0] * total_orbits + base];
            ++cells[(std::size_t)nodes[1] * total_orbits + base];
        } else {
            for (int d = 0; d < res.n; ++d)
                ++cells[(std::size_t)nodes[d] * total_orbits + base + res.label[d]];
        }
        if (k == max_k)
            return;

        const Event &e = events[last];
        const double lo = e.t + e.sigma, hi = lo + dt;
        if (n == max_n) {
            // Node budget is full: only events among the chain's own nodes
            // can extend it, so scan those pair lists instead of the (much
            // longer) incident lists of e's endpoints.
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b) {
                    const int x = std::min(nodes[a], nodes[b]);
                    const int y = std::max(nodes[a], nodes[b]);
                    if (x != e.u && x != e.v && y != e.u && y != e.v)
                        continue;
                    const int pid = ix.pair_id(x, y);
                    if (pid < 0)
                        continue;
                    const auto &el = ix.pair_events[pid];
                    auto it = std::lower_bound(
                        el.begin(), el.end(), lo,
                        [&](int idx, double val) { return events[idx].t < val; });
                    for (; it != el.end(); ++it) {
                        const int j = *it;
                        if (events[j].t > hi)
                            break;
                        if (j <= last)
                            continue;
                        if (causal && pid != ix.pair_of[last] &&
                            blocked(ix, pid, events[j].t, e.t, events))
                            continue;
                        chain[k] = {(std::uint8_t)a, (std::uint8_t)b};
                        ++k;
                        visit(j);
                        --k;
                    }
                }
            return;
        }
        for (int side = 0; side < 2; ++side) {
            const int w = side == 0 ? e.u : e.v;
            const auto &lst = ix.by_node[w];
            auto it = std::lower_bound(lst.begin(), lst.end(), lo,
                                       [&](int idx, double val) { return events[idx].t < val; });
            for (; it != lst.end(); ++it) {
                const int j = *it;
                const Event &c = events[j];
                if (c.t > hi)
                    break;
                if (j <= last)
                    continue;
                // second pass only adds candidates not incident to e.u
                if (side == 1 && (c.u == e.u || c.v == e.u))
                    continue;
                if (causal && ix.pair_of[j] != ix.pair_of[last] &&
                    blocked(ix, ix.pair_of[j], c.t, e.t, events))
                    continue;
                int du = dense_of(c.u), dv = dense_of(c.v);
                int pushed = -1;
                if (du < 0 || dv < 0) { // at most one endpoint is new
                    pushed = n;
                    if (du < 0) {
                        nodes[n] = c.u;
                        du = n++;
                    } else {
                        nodes[n] = c.v;
                        dv = n++;
                    }
                }
                chain[k] = {(std::uint8_t)std::min(du, dv), (std::uint8_t)std::max(du, dv)};
                ++k;
                visit(j);
                --k;
                if (pushed >= 0)
                    --n;
            }
        }
    }
};

} // namespace

std::pair<CountVector, OrbitMatrix> count_network(const TemporalNetwork &net, double dt,
                                                  const GraphletCatalog &catalog, Mode mode,
                                                  int threads) {
    if (!std::isfinite(dt) || dt < 0)
        throw std::invalid_argument("count_network: dt must be finite and >= 0");
    if (threads < 1)
        threads = 1;

    EventIndex ix = build_index(net);
    const int roots = (int)net.events.size();
    const int workers = std::max(1, std::min(threads, roots));

    std::vector<Walker> walkers;
    walkers.reserve(workers);
    for (int i = 0; i < workers; ++i)
        walkers.emplace_back(net.events, ix, catalog, dt, mode, net.node_count());

    if (workers == 1) {
        for (int r = 0; r < roots; ++r)
            walkers[0].run_root(r);
    } else {
        // Roots are claimed in batches; per-worker tallies merge by
        // addition, so the result is schedule-independent.
        std::atomic<int> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (int wi = 0; wi < workers; ++wi)
            pool.emplace_back([&, wi] {
                try {
                    constexpr int batch = 32;
                    for (;;) {
                        int begin = next.fetch_add(batch);
                        if (begin >= roots)
                            break;
                        int end = std::min(begin + batch, roots);
                        for (int r = begin; r < end; ++r)
                            walkers[wi].run_root(r);
                    }
                } catch (...) {
                    errors[wi] = std::current_exception();
                }
            });
        for (auto &t : pool)
            t.join();
        for (auto &err : errors)
            if (err)
                std::rethrow_exception(err);
    }

    CountVector cv;
    cv.params.method = "dynamic";
    cv.params.mode = mode;
    cv.params.dt = dt;
    cv.params.max_n = catalog.max_n();
    cv.params.max_k = catalog.max_k();
    cv.counts.assign(catalog.size(), 0);
    for (int id = 0; id < catalog.size(); ++id) {
        BigInt total = 0;
        for (const auto &w : walkers)
            total += w.counts[id];
        cv.counts[id] = total;
    }

    OrbitMatrix om;
    om.params = cv.params;
    om.names = net.names;
    om.node_count = net.node_count();
    om.orbit_count = catalog.total_orbits();
    om.cells.assign((std::size_t)om.node_count * om.orbit_count, 0);
    for (const auto &w : walkers)
        for (std::size_t i = 0; i < om.cells.size(); ++i)
            om.cells[i] += w.cells[i];
    return {std::move(cv), std::move(om)};
}

std::pair<CountVector, OrbitMatrix> count_snapshots(const SnapshotSeries &series, double dt,
                                                    const GraphletCatalog &catalog, Mode mode,
                                                    int threads) {
    auto result = count_network(snapshots_to_events(series), dt, catalog, mode, threads);
    result.first.params.window_size = series.window_size;
    result.first.params.threshold = series.threshold;
    result.second.params = result.first.params;
    return result;
}

BigInt estimate_work(const TemporalNetwork &net, double dt, int max_k) {
    if (!std::isfinite(dt) || dt < 0)
        throw std::invalid_argument("estimate_work: dt must be finite and >= 0");
    if (max_k < 1)
        throw std::invalid_argument("estimate_work: max_k must be >= 1");
    const BigInt E = net.events.size();
    if (E == 0)
        return 0;
    if (max_k == 1)
        return 2 * E;

    EventIndex ix = build_index(net);
    std::uint64_t extensions = 0; // candidate pairs, the window-rule branching mass
    for (int i = 0; i < (int)net.events.size(); ++i) {
        const Event &e = net.events[i];
        const double lo = e.t + e.sigma, hi = lo + dt;
        for (int side = 0; side < 2; ++side) {
            const int w = side == 0 ? e.u : e.v;
            const auto &lst = ix.by_node[w];
            auto it = std::lower_bound(lst.begin(), lst.end(), lo,
                                       [&](int idx, double val) { return net.events[idx].t < val; });
            for (; it != lst.end(); ++it) {
                const Event &c = net.events[*it];
                if (c.t > hi)
                    break;
                if (*it <= i)
                    continue;
                if (side == 1 && (c.u == e.u || c.v == e.u))
                    continue;
                ++extensions;
            }
        }
    }

    // E + E * (extensions/E)^(k-1), exact, rounded up
    BigInt numer = boost::multiprecision::pow(BigInt(extensions), (unsigned)(max_k - 1));
    BigInt denom = boost::multiprecision::pow(E, (unsigned)(max_k - 2));
    return E + (numer + denom - 1) / denom;
}

} // namespace dglet
