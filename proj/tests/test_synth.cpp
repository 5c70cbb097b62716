#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dglet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

using namespace dglet;

namespace {

// arrival step of each non-core node, read off its first event
std::map<int, double> first_event_time(const TemporalNetwork &net) {
    std::map<int, double> first;
    for (const auto &e : net.events) {
        first.emplace(e.u, e.t);
        first.emplace(e.v, e.t);
    }
    return first;
}

// R^2 of the least-squares fit count ~ a + b*f(t)
double fit_r2(const std::vector<double> &xs, const std::vector<double> &ys) {
    int n = (int)xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double a = (sy - b * sx) / n;
    double ss_res = 0, ss_tot = 0;
    for (int i = 0; i < n; ++i) {
        double err = ys[i] - (a + b * xs[i]);
        ss_res += err * err;
        double dev = ys[i] - sy / n;
        ss_tot += dev * dev;
    }
    return 1.0 - ss_res / ss_tot;
}

double arrival_r2(int cls, int target) {
    auto spec = class_spec(cls, target, 1234);
    auto net = generate(spec);
    auto first = first_event_time(net);

    // cumulative arrivals per integer step, stopping before saturation
    std::vector<double> steps;
    for (auto [node, t] : first)
        if (node >= 5)
            steps.push_back(t);
    std::sort(steps.begin(), steps.end());
    double t_full = steps.back();

    std::vector<double> xs, ys;
    size_t idx = 0;
    for (int t = 1; (double)t < t_full; ++t) {
        while (idx < steps.size() && steps[idx] <= t)
            ++idx;
        double x = 0;
        switch (spec.arrival) {
        case Arrival::linear: x = t; break;
        case Arrival::quadratic: x = (double)t * t; break;
        case Arrival::exponential: x = std::pow(spec.arrival_base, t); break;
        }
        xs.push_back(x);
        ys.push_back((double)idx);
    }
    REQUIRE(xs.size() >= 5);
    return fit_r2(xs, ys);
}

std::vector<int> degrees(const TemporalNetwork &net) {
    std::set<std::pair<int, int>> edges;
    for (const auto &e : net.events)
        edges.insert({e.u, e.v});
    std::vector<int> deg(net.node_count(), 0);
    for (auto [u, v] : edges) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

} // namespace

TEST_CASE("class specs cover arrivals x dynamics") {
    CHECK(class_name(0) == "linear-evo1");
    CHECK(class_name(4) == "quadratic-evo2");
    CHECK(class_name(8) == "exponential-pa");
    auto s0 = class_spec(0, 100, 1);
    CHECK(s0.arrival == Arrival::linear);
    CHECK(s0.variant == Variant::evolution);
    CHECK(s0.lambda == 0.032);
    CHECK(s0.alpha == 0.8);
    CHECK(s0.beta == 0.002);
    auto s1 = class_spec(1, 100, 1);
    CHECK(s1.lambda == 0.02);
    CHECK(s1.alpha == 0.9);
    CHECK(s1.beta == 0.004);
    auto s2 = class_spec(2, 100, 1);
    CHECK(s2.variant == Variant::preferential_attachment);
    CHECK(s2.m == 20);
    CHECK(class_spec(6, 100, 1).arrival == Arrival::exponential);
    CHECK_THROWS_AS(class_spec(9, 100, 1), std::invalid_argument);
}

TEST_CASE("preferential attachment emits exactly m events per arrival") {
    auto spec = class_spec(2, 100, 42); // linear-pa
    auto net = generate(spec);
    CHECK(net.node_count() == 100);
    CHECK(net.events.size() == (100 - 5) * 20);

    // nobody interacts before arriving: walking events in time order, each
    // event introduces at most one node not seen before (the core counts
    // as seen)
    std::set<int> seen = {0, 1, 2, 3, 4};
    for (const auto &e : net.events) {
        int fresh = !seen.count(e.u) + !seen.count(e.v);
        CHECK(fresh <= 1);
        seen.insert(e.u);
        seen.insert(e.v);
    }
}

TEST_CASE("tiny targets shrink the core") {
    auto spec = class_spec(2, 6, 7);
    auto net = generate(spec);
    CHECK(net.node_count() == 6);
    CHECK(net.events.size() == 20); // one arrival on a 5-node core
    CHECK(generate(class_spec(2, 2, 7)).events.empty());
}

TEST_CASE("fixed seeds reproduce, different seeds differ") {
    for (int cls : {0, 5, 8}) {
        auto a = generate(class_spec(cls, 120, 99));
        auto b = generate(class_spec(cls, 120, 99));
        CHECK(a == b);
        auto c = generate(class_spec(cls, 120, 100));
        CHECK_FALSE(a == c);
    }
}

TEST_CASE("evolution networks are structurally sane") {
    auto net = generate(class_spec(0, 500, 31));
    CHECK(net.node_count() == 500);
    CHECK(net.events.size() > 0);
    for (size_t i = 1; i < net.events.size(); ++i)
        CHECK(net.events[i - 1].t <= net.events[i].t);
    for (const auto &e : net.events) {
        CHECK(e.u != e.v);
        CHECK(e.u >= 0);
        CHECK(e.v < 500);
        CHECK(e.t >= 1.0);
        CHECK(e.sigma == 0.0);
    }

    // every non-core node shows up (its first edge is drawn on arrival)
    auto first = first_event_time(net);
    int missing = 0;
    for (int v = 5; v < 500; ++v)
        missing += !first.count(v);
    CHECK(missing == 0);
}

TEST_CASE("arrivals follow their curves") {
    CHECK(arrival_r2(0, 1200) > 0.99); // linear evolution
    CHECK(arrival_r2(4, 1000) > 0.99); // quadratic evolution
    CHECK(arrival_r2(8, 1000) > 0.99); // exponential preferential attachment
}

TEST_CASE("preferential attachment grows hubs") {
    for (int target : {400, 1600}) {
        auto net = generate(class_spec(2, target, 2718));
        auto deg = degrees(net);
        int top = *std::max_element(deg.begin(), deg.end());
        // far beyond any logarithmic trend; a uniform-attachment graph
        // with m=20 stays near 20 + m*ln(n) ~ 170 at these sizes
        CHECK(top > 8 * std::log2((double)target));
    }
}

TEST_CASE("bad specs are rejected") {
    auto ok = class_spec(0, 100, 1);
    auto bad = ok;
    bad.target_nodes = 1;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
    bad = ok;
    bad.lambda = 0;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
    bad = ok;
    bad.arrival_scale = 0;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
    bad = class_spec(2, 100, 1);
    bad.m = 0;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
    bad = class_spec(6, 100, 1);
    bad.arrival_base = 1.0;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
}

TEST_CASE("suites are labeled, ordered, and reproducible") {
    auto suite = generate_suite(2, {60, 80}, 7);
    REQUIRE(suite.size() == 36);
    int i = 0;
    for (int size : {60, 80})
        for (int cls = 0; cls < 9; ++cls)
            for (int inst = 0; inst < 2; ++inst, ++i) {
                CHECK(suite[i].label == cls);
                CHECK(suite[i].size == size);
                CHECK(suite[i].network.node_count() == size);
                CHECK(suite[i].spec.target_nodes == size);
                CHECK(suite[i].seed == suite[i].spec.seed);
            }

    // instance seeds all differ
    std::set<std::uint64_t> seeds;
    for (const auto &inst : suite)
        seeds.insert(inst.seed);
    CHECK(seeds.size() == suite.size());

    auto again = generate_suite(2, {60, 80}, 7);
    for (size_t j = 0; j < suite.size(); ++j)
        CHECK(suite[j].network == again[j].network);

    auto threaded = generate_suite(2, {60, 80}, 7, 3);
    for (size_t j = 0; j < suite.size(); ++j)
        CHECK(suite[j].network == threaded[j].network);

    auto other = generate_suite(2, {60, 80}, 8);
    CHECK_FALSE(suite[0].network == other[0].network);
}

TEST_CASE("one instance of each class") {
    auto suite = generate_suite(1, {100}, 3);
    REQUIRE(suite.size() == 9);
    for (int cls = 0; cls < 9; ++cls)
        CHECK(suite[cls].label == cls);
}
