#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dglet/counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

using namespace dglet;

namespace {

// Brute-force reference: enumerate every ordered event subsequence that
// satisfies the chain rules directly from their definitions, with its own
// canonicalization (label by first appearance, minimize over the two
// labelings of the first event's endpoints).
std::pair<std::vector<std::pair<int, int>>, std::map<int, int>>
ref_canonical(const std::vector<std::pair<int, int>> &chain) {
    auto attempt = [&](bool swapped) {
        std::map<int, int> lab;
        lab[swapped ? chain[0].second : chain[0].first] = 0;
        lab[swapped ? chain[0].first : chain[0].second] = 1;
        int next = 2;
        std::vector<std::pair<int, int>> code;
        for (auto [x, y] : chain) {
            if (!lab.count(x))
                lab[x] = next++;
            if (!lab.count(y))
                lab[y] = next++;
            int a = lab[x], b = lab[y];
            code.push_back({std::min(a, b), std::max(a, b)});
        }
        return std::pair(code, lab);
    };
    auto a = attempt(false);
    auto b = attempt(true);
    return a.first <= b.first ? a : b;
}

struct RefCounts {
    std::vector<std::uint64_t> counts;
    std::vector<std::uint64_t> cells;
};

RefCounts ref_count(const TemporalNetwork &net, double dt, const GraphletCatalog &cat,
                    Mode mode) {
    RefCounts out;
    out.counts.assign(cat.size(), 0);
    out.cells.assign((std::size_t)net.node_count() * cat.total_orbits(), 0);
    const auto &ev = net.events;
    std::vector<int> chain;

    auto record = [&] {
        std::vector<std::pair<int, int>> pairs;
        for (int idx : chain)
            pairs.push_back({ev[idx].u, ev[idx].v});
        auto [code_pairs, lab] = ref_canonical(pairs);
        GraphletCode code;
        code.n = (int)lab.size();
        code.k = (int)pairs.size();
        code.pairs = code_pairs;
        if (!(canonical_code(pairs) == code))
            throw std::logic_error("reference canonicalization disagrees");
        int id = cat.find(code);
        if (id < 0)
            throw std::logic_error("reference chain missing from catalog");
        ++out.counts[id];
        int base = cat.entry(id).orbit_start;
        for (auto [node, label] : lab)
            ++out.cells[(std::size_t)node * cat.total_orbits() + base +
                        (code.n == 2 ? 0 : label)];
    };

    std::function<void(int, std::set<int>)> grow = [&](int last, std::set<int> nodes) {
        record();
        if ((int)chain.size() == cat.max_k())
            return;
        const Event &e = ev[last];
        for (int j = last + 1; j < (int)ev.size(); ++j) {
            const Event &c = ev[j];
            if (c.t < e.t + e.sigma || c.t > e.t + e.sigma + dt)
                continue;
            if (c.u != e.u && c.u != e.v && c.v != e.u && c.v != e.v)
                continue;
            auto grown = nodes;
            grown.insert(c.u);
            grown.insert(c.v);
            if ((int)grown.size() > cat.max_n())
                continue;
            if (mode == Mode::causal && !(c.u == e.u && c.v == e.v)) {
                bool blocked = false;
                for (const Event &x : ev)
                    if (x.u == c.u && x.v == c.v && x.t < c.t && x.t + x.sigma >= e.t) {
                        blocked = true;
                        break;
                    }
                if (blocked)
                    continue;
            }
            chain.push_back(j);
            grow(j, grown);
            chain.pop_back();
        }
    };

    for (int r = 0; r < (int)ev.size(); ++r) {
        chain = {r};
        grow(r, {ev[r].u, ev[r].v});
    }
    return out;
}

TemporalNetwork random_network(std::mt19937 &rng, int max_nodes, int max_events,
                               bool unique_pairs) {
    int n = 2 + (int)(rng() % (max_nodes - 1));
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i)
        names.push_back("n" + std::to_string(i));

    std::vector<std::pair<int, int>> pool;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            pool.push_back({u, v});
    std::shuffle(pool.begin(), pool.end(), rng);

    int want = 1 + (int)(rng() % max_events);
    if (unique_pairs)
        want = std::min(want, (int)pool.size());
    std::vector<Event> events;
    for (int i = 0; i < want; ++i) {
        auto [u, v] = unique_pairs ? pool[i] : pool[rng() % pool.size()];
        // quarter-step grid makes simultaneous starts and exact window
        // boundaries common
        double t = (double)(rng() % 61) * 0.25;
        double sigma = rng() % 3 == 0 ? (double)(rng() % 8) * 0.25 : 0.0;
        events.push_back({u, v, t, sigma});
    }
    return make_network(std::move(names), std::move(events));
}

void expect_matches_reference(const TemporalNetwork &net, double dt,
                              const GraphletCatalog &cat, Mode mode) {
    auto [cv, om] = count_network(net, dt, cat, mode);
    auto ref = ref_count(net, dt, cat, mode);
    for (int id = 0; id < cat.size(); ++id)
        REQUIRE(cv.counts[id] == BigInt(ref.counts[id]));
    REQUIRE(om.cells == ref.cells);
}

int node_id(const TemporalNetwork &net, const std::string &name) {
    for (int i = 0; i < net.node_count(); ++i)
        if (net.names[i] == name)
            return i;
    return -1;
}

} // namespace

TEST_CASE("a lone wedge and its orbits") {
    auto net = parse_events_text("a b 0\nb c 1\n");
    auto cat = enumerate_catalog(4, 3);
    auto [cv, om] = count_network(net, 1.0, cat, Mode::regular);

    CHECK(cv.counts[0] == 2); // each event alone
    CHECK(cv.counts[2] == 1); // the 2-path
    BigInt rest = 0;
    for (int id = 0; id < cat.size(); ++id)
        if (id != 0 && id != 2)
            rest += cv.counts[id];
    CHECK(rest == 0);

    // 2-path orbits: shared node first, then the starting leaf, then the
    // closing leaf
    int base = cat.entry(2).orbit_start;
    CHECK(om.at(node_id(net, "b"), base) == 1);
    CHECK(om.at(node_id(net, "a"), base + 1) == 1);
    CHECK(om.at(node_id(net, "c"), base + 2) == 1);
    // single-event orbit: one per endpoint per event
    CHECK(om.at(node_id(net, "a"), 0) == 1);
    CHECK(om.at(node_id(net, "b"), 0) == 2);
    CHECK(om.at(node_id(net, "c"), 0) == 1);
}

TEST_CASE("a repeated edge forms the 2-event repeat graphlet") {
    auto net = parse_events_text("a b 0\na b 1\n");
    auto cat = enumerate_catalog(4, 3);
    auto [cv, om] = count_network(net, 1.0, cat, Mode::regular);
    CHECK(cv.counts[0] == 2);
    CHECK(cv.counts[1] == 1);
    for (int id = 2; id < cat.size(); ++id)
        CHECK(cv.counts[id] == 0);
}

TEST_CASE("events farther apart than dt do not chain") {
    auto net = parse_events_text("a b 0\nb c 2\n");
    auto cat = enumerate_catalog(4, 3);
    auto [cv, om] = count_network(net, 1.0, cat, Mode::regular);
    CHECK(cv.counts[0] == 2);
    for (int id = 1; id < cat.size(); ++id)
        CHECK(cv.counts[id] == 0);
}

TEST_CASE("window bounds are closed on both ends") {
    auto cat = enumerate_catalog(3, 2);
    // sigma pushes the window start to t=1; candidates at exactly 1 and
    // exactly 1+dt chain, just outside does not
    auto at = [&](double t2) {
        auto net = make_network({"a", "b", "c"}, {{0, 1, 0.0, 1.0}, {1, 2, t2, 0.0}});
        auto [cv, om] = count_network(net, 0.5, cat, Mode::regular);
        return cv.counts[2];
    };
    CHECK(at(1.0) == 1);
    CHECK(at(1.5) == 1);
    CHECK(at(0.99) == 0);
    CHECK(at(1.51) == 0);
}

TEST_CASE("a blocked extension disappears in causal mode only") {
    auto net = parse_events_text("a b 1\nb c 1.5\nb c 2\n");
    auto cat = enumerate_catalog(3, 3);
    auto [reg, reg_om] = count_network(net, 2.0, cat, Mode::regular);
    auto [cau, cau_om] = count_network(net, 2.0, cat, Mode::causal);

    CHECK(reg.counts[0] == 3);
    CHECK(reg.counts[1] == 1); // (b,c,1.5) -> (b,c,2)
    CHECK(reg.counts[2] == 2); // both (a,b)->(b,c) wedges
    CHECK(reg.counts[6] == 1); // (a,b)->(b,c)->(b,c)

    // (a,b,1)->(b,c,2) is rejected: (b,c,1.5) interacts between the starts.
    // The same-edge continuation (b,c,1.5)->(b,c,2) stays.
    CHECK(cau.counts[0] == 3);
    CHECK(cau.counts[1] == 1);
    CHECK(cau.counts[2] == 1);
    CHECK(cau.counts[6] == 1);
}

TEST_CASE("an older same-edge event does not block") {
    auto net = parse_events_text("b c 1\na b 2\nb c 3\n");
    auto cat = enumerate_catalog(3, 3);
    auto [reg, reg_om] = count_network(net, 2.0, cat, Mode::regular);
    auto [cau, cau_om] = count_network(net, 2.0, cat, Mode::causal);
    // (b,c,1) is before (a,b,2) starts, so (a,b,2)->(b,c,3) is causal
    for (int id = 0; id < cat.size(); ++id)
        CHECK(reg.counts[id] == cau.counts[id]);
    CHECK(reg.counts[2] == 2);
    CHECK(reg.counts[5] == 1); // (b,c)->(a,b)->(b,c)
}

TEST_CASE("snapshot series counting") {
    auto cat = enumerate_catalog(4, 3);

    auto two_ab = build_snapshots(parse_events_text("a b 0\na b 2\n"), 2.0, 1);
    auto [cv1, om1] = count_snapshots(two_ab, 1.0, cat, Mode::regular);
    CHECK(cv1.counts[0] == 2);
    CHECK(cv1.counts[1] == 1);
    CHECK(cv1.params.window_size == 2.0);
    CHECK(cv1.params.threshold == 1);
    CHECK(om1.params.window_size == 2.0);

    auto path = build_snapshots(parse_events_text("a b 0\nb c 1\nc d 2\n"), 1.0, 1);
    auto [cv2, om2] = count_snapshots(path, 1.0, cat, Mode::regular);
    CHECK(cv2.counts[9] == 1); // the 4-node event path

    auto lone = build_snapshots(parse_events_text("a b 0\nc d 0\n"), 1.0, 1);
    auto [cv3, om3] = count_snapshots(lone, 1.0, cat, Mode::regular);
    CHECK(cv3.counts[0] == 2);
    for (int id = 1; id < cat.size(); ++id)
        CHECK(cv3.counts[id] == 0);
}

TEST_CASE("every event is one single-event graphlet") {
    std::mt19937 rng(11);
    auto cat = enumerate_catalog(3, 3);
    for (int round = 0; round < 10; ++round) {
        auto net = random_network(rng, 10, 30, false);
        auto [cv, om] = count_network(net, 1.5, cat, Mode::regular);
        CHECK(cv.counts[0] == BigInt(net.events.size()));
    }
}

TEST_CASE("regular counting matches the brute-force reference") {
    std::mt19937 rng(2024);
    auto cat = enumerate_catalog(5, 4);
    for (int round = 0; round < 25; ++round) {
        auto net = random_network(rng, 15, 40, false);
        double dt = (double)(rng() % 13) * 0.25;
        CAPTURE(round);
        expect_matches_reference(net, dt, cat, Mode::regular);
    }
}

TEST_CASE("causal counting matches the brute-force reference") {
    std::mt19937 rng(2025);
    auto cat = enumerate_catalog(5, 4);
    for (int round = 0; round < 25; ++round) {
        auto net = random_network(rng, 15, 40, false);
        double dt = (double)(rng() % 13) * 0.25;
        CAPTURE(round);
        expect_matches_reference(net, dt, cat, Mode::causal);
    }
}

TEST_CASE("causal never exceeds regular, and matches it on single-event edges") {
    std::mt19937 rng(77);
    auto cat = enumerate_catalog(4, 4);
    for (int round = 0; round < 15; ++round) {
        auto net = random_network(rng, 12, 35, false);
        double dt = 0.25 + (double)(rng() % 10) * 0.25;
        auto [reg, reg_om] = count_network(net, dt, cat, Mode::regular);
        auto [cau, cau_om] = count_network(net, dt, cat, Mode::causal);
        for (int id = 0; id < cat.size(); ++id)
            CHECK(cau.counts[id] <= reg.counts[id]);
    }
    for (int round = 0; round < 10; ++round) {
        auto net = random_network(rng, 12, 35, true);
        double dt = 0.25 + (double)(rng() % 10) * 0.25;
        auto [reg, reg_om] = count_network(net, dt, cat, Mode::regular);
        auto [cau, cau_om] = count_network(net, dt, cat, Mode::causal);
        for (int id = 0; id < cat.size(); ++id)
            CHECK(cau.counts[id] == reg.counts[id]);
        CHECK(cau_om.cells == reg_om.cells);
    }
}

TEST_CASE("counts grow monotonically with dt") {
    std::mt19937 rng(5150);
    auto cat = enumerate_catalog(4, 3);
    for (int round = 0; round < 10; ++round) {
        auto net = random_network(rng, 12, 30, false);
        auto [small, om1] = count_network(net, 0.5, cat, Mode::regular);
        auto [large, om2] = count_network(net, 2.5, cat, Mode::regular);
        for (int id = 0; id < cat.size(); ++id)
            CHECK(small.counts[id] <= large.counts[id]);
    }
}

TEST_CASE("orbit totals account for every node of every instance") {
    std::mt19937 rng(31337);
    auto cat = enumerate_catalog(4, 4);
    for (int round = 0; round < 8; ++round) {
        auto net = random_network(rng, 12, 35, false);
        for (Mode mode : {Mode::regular, Mode::causal}) {
            auto [cv, om] = count_network(net, 1.0, cat, mode);
            for (int id = 0; id < cat.size(); ++id) {
                const auto &e = cat.entry(id);
                BigInt touched = 0;
                for (int node = 0; node < om.node_count; ++node)
                    for (int o = 0; o < e.orbit_count; ++o)
                        touched += om.at(node, e.orbit_start + o);
                CHECK(touched == cv.counts[id] * e.code.n);
            }
        }
    }
}

TEST_CASE("worker count does not change results") {
    std::mt19937 rng(99);
    auto cat = enumerate_catalog(4, 4);
    auto net = random_network(rng, 15, 40, false);
    auto [base_cv, base_om] = count_network(net, 1.0, cat, Mode::regular, 1);
    for (int threads : {2, 3, 8}) {
        auto [cv, om] = count_network(net, 1.0, cat, Mode::regular, threads);
        CHECK(cv.counts == base_cv.counts);
        CHECK(om.cells == base_om.cells);
    }
}

TEST_CASE("count parameters are recorded") {
    auto net = parse_events_text("a b 0\nb c 1\n");
    auto cat = enumerate_catalog(4, 3);
    auto [cv, om] = count_network(net, 1.0, cat, Mode::causal);
    CHECK(cv.params.method == "dynamic");
    CHECK(cv.params.mode == Mode::causal);
    CHECK(cv.params.dt == 1.0);
    CHECK(cv.params.max_n == 4);
    CHECK(cv.params.max_k == 3);
    CHECK(om.params.method == "dynamic");
}

TEST_CASE("dt must be finite and non-negative") {
    auto net = parse_events_text("a b 0\n");
    auto cat = enumerate_catalog(3, 2);
    CHECK_THROWS_AS(count_network(net, -1.0, cat, Mode::regular), std::invalid_argument);
    CHECK_THROWS_AS(count_network(net, std::nan(""), cat, Mode::regular),
                    std::invalid_argument);
    CHECK_THROWS_AS(estimate_work(net, -1.0, 3), std::invalid_argument);
}

TEST_CASE("work estimates") {
    auto adjacent = parse_events_text("a b 0\nb c 1\n");
    CHECK(estimate_work(adjacent, 1.0, 2) == 3); // 2 + 2*(1/2)
    CHECK(estimate_work(adjacent, 1.0, 1) == 4); // 2 + 2*(1/2)^0

    auto gap = parse_events_text("a b 0\nb c 2\n");
    CHECK(estimate_work(gap, 1.0, 2) == 2); // no adjacent pairs, only the events
    CHECK(estimate_work(gap, 1.0, 5) == 2);

    TemporalNetwork empty = make_network({}, {});
    CHECK(estimate_work(empty, 1.0, 3) == 0);
}
