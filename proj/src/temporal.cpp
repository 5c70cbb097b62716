#include "dglet/temporal.hpp"

#include "text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace dglet {

namespace {

using detail::fmt_double;
using detail::parse_double;
using detail::split_ws;

void sort_events(std::vector<Event> &events) {
    std::stable_sort(events.begin(), events.end(), [](const Event &a, const Event &b) {
        if (a.t != b.t) return a.t < b.t;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
}

} // namespace

TemporalNetwork make_network(std::vector<std::string> names, std::vector<Event> events) {
    const int n = (int)names.size();
    for (Event &e : events) {
        if (e.u == e.v) throw std::invalid_argument("self-event");
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u < 0 || e.v >= n) throw std::invalid_argument("event endpoint out of range");
        if (!std::isfinite(e.t) || !std::isfinite(e.sigma) || e.sigma < 0)
            throw std::invalid_argument("bad event time or duration");
    }
    sort_events(events);
    return TemporalNetwork{std::move(names), std::move(events)};
}

bool operator==(const TemporalNetwork &a, const TemporalNetwork &b) {
    std::vector<std::string> na = a.names, nb = b.names;
    std::sort(na.begin(), na.end());
    std::sort(nb.begin(), nb.end());
    if (na != nb) return false;
    auto key_events = [](const TemporalNetwork &net) {
        std::vector<std::tuple<std::string, std::string, double, double>> keys;
        keys.reserve(net.events.size());
        for (const Event &e : net.events) {
            std::string x = net.names[e.u], y = net.names[e.v];
            if (y < x) std::swap(x, y);
            keys.emplace_back(std::move(x), std::move(y), e.t, e.sigma);
        }
        std::sort(keys.begin(), keys.end());
        return keys;
    };
    return key_events(a) == key_events(b);
}

TemporalNetwork parse_events(std::istream &in) {
    std::vector<std::string> names;
    std::unordered_map<std::string, int> ids;
    std::vector<Event> events;
    std::string line;
    int lineno = 0;
    auto intern = [&](const std::string &tok) {
        auto it = ids.find(tok);
        if (it != ids.end()) return it->second;
        int id = (int)names.size();
        names.push_back(tok);
        ids.emplace(tok, id);
        return id;
    };
    while (std::getline(in, line)) {
        lineno++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks.size() < 3 || toks.size() > 4)
            throw ParseError(lineno, "expected 'u v t_start [sigma]', got " +
                                         std::to_string(toks.size()) + " fields");
        Event e;
        if (!parse_double(toks[2], e.t)) throw ParseError(lineno, "bad t_start '" + toks[2] + "'");
        if (toks.size() == 4) {
            if (!parse_double(toks[3], e.sigma)) throw ParseError(lineno, "bad sigma '" + toks[3] + "'");
            if (e.sigma < 0) throw ParseError(lineno, "negative sigma");
        }
        if (toks[0] == toks[1]) throw ParseError(lineno, "self-event '" + toks[0] + "'");
        e.u = intern(toks[0]);
        e.v = intern(toks[1]);
        if (e.u > e.v) std::swap(e.u, e.v);
        events.push_back(e);
    }
    sort_events(events);
    return TemporalNetwork{std::move(names), std::move(events)};
}

TemporalNetwork parse_events_text(const std::string &text) {
    std::istringstream in(text);
    return parse_events(in);
}

TemporalNetwork parse_events_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return parse_events(in);
}

void serialize(const TemporalNetwork &net, std::ostream &out) {
    for (const Event &e : net.events) {
        out << net.names[e.u] << ' ' << net.names[e.v] << ' ' << fmt_double(e.t);
        if (e.sigma != 0.0) out << ' ' << fmt_double(e.sigma);
        out << '\n';
    }
}

std::string serialize(const TemporalNetwork &net) {
    std::ostringstream out;
    serialize(net, out);
    return out.str();
}

void write_events_file(const TemporalNetwork &net, const std::string &path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    serialize(net, out);
}

bool StaticGraph::has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(a, b));
}

std::vector<std::vector<int>> StaticGraph::adjacency() const {
    std::vector<std::vector<int>> adj(n);
    for (auto &[a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto &row : adj) std::sort(row.begin(), row.end());
    return adj;
}

StaticGraph make_static_graph(int n, std::vector<std::pair<int, int>> edges,
                              std::vector<std::string> names) {
    for (auto &[a, b] : edges) {
        if (a == b) throw std::invalid_argument("self-loop");
        if (a > b) std::swap(a, b);
        if (a < 0 || b >= n) throw std::invalid_argument("edge endpoint out of range");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (!names.empty() && (int)names.size() != n)
        throw std::invalid_argument("names/node count mismatch");
    return StaticGraph{n, std::move(edges), std::move(names)};
}

StaticGraph aggregate(const TemporalNetwork &net, int w) {
    if (w < 1) throw std::invalid_argument("aggregate: w must be >= 1");
    std::map<std::pair<int, int>, long long> counts;
    for (const Event &e : net.events) counts[{e.u, e.v}]++;
    std::vector<std::pair<int, int>> edges;
    for (auto &[pair, c] : counts)
        if (c >= w) edges.push_back(pair);
    return StaticGraph{net.node_count(), std::move(edges), net.names};
}

SnapshotSeries build_snapshots(const TemporalNetwork &net, double t_w, int w) {
    if (!(t_w > 0)) throw std::invalid_argument("build_snapshots: t_w must be > 0");
    if (w < 1) throw std::invalid_argument("build_snapshots: w must be >= 1");
    SnapshotSeries series;
    series.window_size = t_w;
    series.threshold = w;
    series.names = net.names;
    if (net.events.empty()) return series;
    const double origin = net.events.front().t;
    const double t_max = net.events.back().t;
    series.origin = origin;
    int count = (int)std::floor((t_max - origin) / t_w) + 1;
    std::vector<std::map<std::pair<int, int>, long long>> window(count);
    for (const Event &e : net.events) {
        int idx = (int)std::floor((e.t - origin) / t_w);
        idx = std::clamp(idx, 0, count - 1);
        window[idx][{e.u, e.v}]++;
    }
    series.snapshots.reserve(count);
    for (auto &pairs : window) {
        std::vector<std::pair<int, int>> edges;
        for (auto &[pair, c] : pairs)
            if (c >= w) edges.push_back(pair);
        series.snapshots.push_back(StaticGraph{net.node_count(), std::move(edges), net.names});
    }
    return series;
}

TemporalNetwork snapshots_to_events(const SnapshotSeries &series) {
    std::vector<Event> events;
    for (size_t i = 0; i < series.snapshots.size(); i++)
        for (auto &[a, b] : series.snapshots[i].edges)
            events.push_back(Event{a, b, (double)i, 0.0});
    return make_network(series.names, std::move(events));
}

void write_snapshots(const SnapshotSeries &series, std::ostream &out) {
    for (size_t i = 0; i < series.snapshots.size(); i++) {
        if (i > 0) out << "%\n";
        const StaticGraph &g = series.snapshots[i];
        for (auto &[a, b] : g.edges) {
            if (!g.names.empty())
                out << g.names[a] << ' ' << g.names[b] << '\n';
            else
                out << a << ' ' << b << '\n';
        }
    }
}

SnapshotSeries read_snapshots(std::istream &in) {
    std::vector<std::vector<std::pair<std::string, std::string>>> blocks(1);
    std::string line;
    int lineno = 0;
    bool any = false;
    while (std::getline(in, line)) {
        lineno++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        if (toks[0][0] == '#') continue;
        any = true;
        if (toks.size() == 1 && toks[0] == "%") {
            blocks.emplace_back();
            continue;
        }
        if (toks.size() != 2) throw ParseError(lineno, "expected 'u v' or '%'");
        blocks.back().emplace_back(toks[0], toks[1]);
    }
    SnapshotSeries series;
    series.window_size = 1.0;
    if (!any) return series;
    std::unordered_map<std::string, int> ids;
    auto intern = [&](const std::string &tok) {
        auto it = ids.find(tok);
        if (it != ids.end()) return it->second;
        int id = (int)series.names.size();
        series.names.push_back(tok);
        ids.emplace(tok, id);
        return id;
    };
    std::vector<std::vector<std::pair<int, int>>> edge_blocks;
    for (auto &block : blocks) {
        edge_blocks.emplace_back();
        for (auto &[x, y] : block) {
            if (x == y) throw std::invalid_argument("self-loop in snapshot");
            edge_blocks.back().emplace_back(intern(x), intern(y));
        }
    }
    for (auto &edges : edge_blocks)
        series.snapshots.push_back(
            make_static_graph((int)series.names.size(), std::move(edges), series.names));
    return series;
}

std::vector<std::pair<std::string, std::string>> parse_labels(std::istream &in) {
    std::vector<std::pair<std::string, std::string>> out;
    std::unordered_map<std::string, int> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks.size() != 2) throw ParseError(lineno, "expected 'node_token label_token'");
        if (!seen.emplace(toks[0], lineno).second)
            throw ParseError(lineno, "duplicate node token '" + toks[0] + "'");
        out.emplace_back(toks[0], toks[1]);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_labels_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return parse_labels(in);
}

} // namespace dglet
