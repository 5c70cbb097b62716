#include "dglet/synth.hpp"

#include "rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <unordered_set>
#include <vector>

namespace dglet {

namespace {

using detail::Rng;
using detail::mix_seed;

void validate(const ModelSpec &spec) {
    auto finite_pos = [](double x) { return std::isfinite(x) && x > 0; };
    if (spec.target_nodes < 2)
        throw std::invalid_argument("generate: target_nodes must be >= 2");
    if (!finite_pos(spec.arrival_scale))
        throw std::invalid_argument("generate: arrival scale must be finite and > 0");
    if (spec.arrival == Arrival::exponential &&
        (!std::isfinite(spec.arrival_base) || spec.arrival_base <= 1))
        throw std::invalid_argument("generate: exponential arrival base must be > 1");
    if (spec.variant == Variant::evolution) {
        if (!finite_pos(spec.lambda) || !finite_pos(spec.alpha) || !finite_pos(spec.beta))
            throw std::invalid_argument("generate: lambda, alpha, beta must be finite and > 0");
    } else if (spec.m < 1) {
        throw std::invalid_argument("generate: m must be >= 1");
    }
}

struct Sim {
    const ModelSpec &spec;
    Rng rng;
    std::vector<std::vector<int>> nbr; // distinct neighbors
    std::unordered_set<std::uint64_t> edge_set;
    std::vector<int> bag; // endpoint multiset: draws are degree-proportional
    std::vector<Event> out;
    std::vector<int> stamp; // scratch for neighbor-of-neighbor dedup
    int stamp_gen = 0;

    Sim(const ModelSpec &spec)
        : spec(spec), rng(spec.seed), nbr(spec.target_nodes), stamp(spec.target_nodes, 0) {}

    bool adjacent(int a, int b) const {
        return edge_set.count((std::uint64_t)std::min(a, b) << 32 | (std::uint32_t)std::max(a, b));
    }

    void link(int a, int b) { // updates the simple graph, not the event list
        if (edge_set.insert((std::uint64_t)std::min(a, b) << 32 | (std::uint32_t)std::max(a, b))
                .second) {
            nbr[a].push_back(b);
            nbr[b].push_back(a);
        }
        bag.push_back(a);
        bag.push_back(b);
    }

    void emit(int a, int b, std::int64_t t) {
        out.push_back({std::min(a, b), std::max(a, b), (double)t, 0.0});
    }

    int draw_pref(int self) {
        for (;;) {
            int d = bag[rng.below(bag.size())];
            if (d != self)
                return d;
        }
    }

    double draw_gap(int degree) {
        double rate = spec.beta * degree;
        for (;;) {
            double delta = 1.0 + rng.exponential(rate);
            if (rng.uniform() < std::pow(delta, -spec.alpha))
                return delta;
        }
    }

    // uniform node at distance exactly 2, degree-proportional fallback
    int draw_destination(int s) {
        ++stamp_gen;
        std::vector<int> cands;
        for (int y : nbr[s])
            for (int x : nbr[y])
                if (x != s && stamp[x] != stamp_gen && !adjacent(s, x)) {
                    stamp[x] = stamp_gen;
                    cands.push_back(x);
                }
        if (!cands.empty())
            return cands[rng.below(cands.size())];
        return draw_pref(s);
    }
};

std::int64_t arrivals_at(const ModelSpec &spec, std::int64_t t) {
    double n;
    switch (spec.arrival) {
    case Arrival::linear: n = spec.arrival_scale * (double)t; break;
    case Arrival::quadratic: n = spec.arrival_scale * (double)t * (double)t; break;
    default: n = spec.arrival_scale * std::pow(spec.arrival_base, (double)t); break;
    }
    if (n >= (double)spec.target_nodes)
        return spec.target_nodes;
    return std::llround(n);
}

struct ActiveNode {
    int id;
    double death;
    double wake;
};

} // namespace

TemporalNetwork generate(const ModelSpec &spec) {
    validate(spec);
    Sim sim(spec);

    const int core = std::min(5, spec.target_nodes);
    for (int a = 0; a < core; ++a)
        for (int b = a + 1; b < core; ++b)
            sim.link(a, b);

    int arrived = core;
    std::vector<ActiveNode> active;

    const bool evolution = spec.variant == Variant::evolution;
    for (std::int64_t t = 1; arrived < spec.target_nodes || !active.empty(); ++t) {
        if (arrived < spec.target_nodes) {
            std::int64_t want =
                std::min<std::int64_t>(spec.target_nodes, core + arrivals_at(spec, t));
            while (arrived < want) {
                int id = arrived++;
                if (evolution) {
                    int dest = sim.draw_pref(id);
                    sim.link(id, dest);
                    sim.emit(id, dest, t);
                    double death = t + sim.rng.exponential(spec.lambda);
                    double wake = t + sim.draw_gap((int)sim.nbr[id].size());
                    active.push_back({id, death, wake});
                } else {
                    std::vector<int> chosen;
                    for (int e = 0; e < spec.m; ++e) {
                        bool pool_left = (int)chosen.size() < arrived - 1;
                        int dest;
                        for (;;) {
                            dest = sim.draw_pref(id);
                            if (pool_left &&
                                std::find(chosen.begin(), chosen.end(), dest) != chosen.end())
                                continue;
                            break;
                        }
                        if (std::find(chosen.begin(), chosen.end(), dest) == chosen.end())
                            chosen.push_back(dest);
                        sim.link(id, dest);
                        sim.emit(id, dest, t);
                    }
                }
            }
        }
        std::size_t keep = 0;
        for (std::size_t i = 0; i < active.size(); ++i) {
            ActiveNode node = active[i];
            if ((double)t > node.death)
                continue; // lifetime over, drop from the active set
            if (node.wake <= (double)t) {
                int dest = sim.draw_destination(node.id);
                sim.link(node.id, dest);
                sim.emit(node.id, dest, t);
                node.wake += sim.draw_gap((int)sim.nbr[node.id].size());
            }
            active[keep++] = node;
        }
        active.resize(keep);
    }

    std::vector<std::string> names(spec.target_nodes);
    for (int i = 0; i < spec.target_nodes; ++i)
        names[i] = std::to_string(i);
    return make_network(std::move(names), std::move(sim.out));
}

ModelSpec class_spec(int cls, int target_nodes, std::uint64_t seed) {
    if (cls < 0 || cls > 8)
        throw std::invalid_argument("class_spec: class must be 0..8");
    ModelSpec spec;
    spec.arrival = (Arrival)(cls / 3);
    switch (cls % 3) {
    case 0:
        spec.variant = Variant::evolution;
        spec.lambda = 0.032;
        spec.alpha = 0.8;
        spec.beta = 0.002;
        break;
    case 1:
        spec.variant = Variant::evolution;
        spec.lambda = 0.02;
        spec.alpha = 0.9;
        spec.beta = 0.004;
        break;
    default: spec.variant = Variant::preferential_attachment; spec.m = 20; break;
    }
    spec.target_nodes = target_nodes;
    spec.seed = seed;
    return spec;
}

std::string class_name(int cls) {
    if (cls < 0 || cls > 8)
        throw std::invalid_argument("class_name: class must be 0..8");
    static const char *arrival[] = {"linear", "quadratic", "exponential"};
    static const char *dynamics[] = {"evo1", "evo2", "pa"};
    return std::string(arrival[cls / 3]) + "-" + dynamics[cls % 3];
}

std::vector<SuiteInstance> generate_suite(int instances_per_class, const std::vector<int> &sizes,
                                          std::uint64_t seed, int threads) {
    if (instances_per_class < 1)
        throw std::invalid_argument("generate_suite: instances_per_class must be >= 1");
    std::vector<SuiteInstance> suite;
    for (int size : sizes)
        for (int cls = 0; cls < 9; ++cls)
            for (int inst = 0; inst < instances_per_class; ++inst) {
                SuiteInstance si;
                si.label = cls;
                si.size = size;
                si.seed = mix_seed(mix_seed(mix_seed(seed, (std::uint64_t)size), (std::uint64_t)cls),
                                   (std::uint64_t)inst);
                si.spec = class_spec(cls, size, si.seed);
                suite.push_back(std::move(si));
            }

    if (threads < 1)
        threads = 1;
    threads = std::min<int>(threads, (int)suite.size());
    if (threads <= 1) {
        for (auto &si : suite)
            si.network = generate(si.spec);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= suite.size())
                        break;
                    suite[i].network = generate(suite[i].spec);
                }
            });
        for (auto &t : pool)
            t.join();
    }
    return suite;
}

} // namespace dglet
