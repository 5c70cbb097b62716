#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dglet {

// Raised for malformed input files; line is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string &what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// One timed undirected interaction. Stored with u < v.
struct Event {
    int u = 0;
    int v = 0;
    double t = 0.0;     // start time
    double sigma = 0.0; // duration, >= 0

    friend bool operator==(const Event &a, const Event &b) {
        return a.u == b.u && a.v == b.v && a.t == b.t && a.sigma == b.sigma;
    }
};

// Node set plus time-ordered event sequence. Events are sorted by
// (t, u, v) with a stable sort, so identical 4-tuples keep input order
// and the position in `events` is the total order used by counting.
struct TemporalNetwork {
    std::vector<std::string> names; // dense id -> token
    std::vector<Event> events;

    int node_count() const { return (int)names.size(); }
};

// Normalizes endpoint order, validates ids/times, stable-sorts events.
TemporalNetwork make_network(std::vector<std::string> names, std::vector<Event> events);

// Equality is name-keyed: same node-name set and same multiset of
// (name_a, name_b, t, sigma) with names ordered inside each pair.
// Dense ids are allowed to differ.
bool operator==(const TemporalNetwork &a, const TemporalNetwork &b);

// Event-list text format: one event per line, `u v t_start [sigma]`,
// whitespace separated; lines whose first non-blank char is '#' are skipped.
TemporalNetwork parse_events(std::istream &in);
TemporalNetwork parse_events_text(const std::string &text);
TemporalNetwork parse_events_file(const std::string &path);

void serialize(const TemporalNetwork &net, std::ostream &out);
std::string serialize(const TemporalNetwork &net);
void write_events_file(const TemporalNetwork &net, const std::string &path);

// Simple undirected graph; edges sorted, each stored (min,max).
struct StaticGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::string> names; // may be empty for anonymous graphs

    bool has_edge(int a, int b) const;
    std::vector<std::vector<int>> adjacency() const; // sorted neighbor lists
};

StaticGraph make_static_graph(int n, std::vector<std::pair<int, int>> edges,
                              std::vector<std::string> names = {});

// Aggregate network: edge wherever at least w events occurred on the pair.
StaticGraph aggregate(const TemporalNetwork &net, int w);

// Consecutive windows of width t_w starting at the first event time.
// Snapshot i covers [origin + i*t_w, origin + (i+1)*t_w); an edge is in
// snapshot i iff >= w events on that pair start inside window i.
// All snapshots share the full node set.
struct SnapshotSeries {
    double window_size = 0.0;
    int threshold = 1;
    double origin = 0.0;
    std::vector<std::string> names;
    std::vector<StaticGraph> snapshots;

    int node_count() const { return (int)names.size(); }
};

SnapshotSeries build_snapshots(const TemporalNetwork &net, double t_w, int w);

// For each edge (a,b) of snapshot i emit event (a,b,i,0): timestamps are
// snapshot indices, so downstream dt is measured in snapshot units.
TemporalNetwork snapshots_to_events(const SnapshotSeries &series);

// Snapshot serialization: edge-list blocks ("u v" lines, node tokens)
// separated by lines containing a single '%'. N snapshots use N-1
// separators; empty blocks are legal. The reader reconstructs the node set
// from the tokens it sees and leaves window_size/threshold/origin at their
// defaults (the format does not carry them).
void write_snapshots(const SnapshotSeries &series, std::ostream &out);
SnapshotSeries read_snapshots(std::istream &in);

// Label file: `node_token label_token` per line, '#' comments skipped.
// Duplicate node tokens are rejected.
std::vector<std::pair<std::string, std::string>> parse_labels(std::istream &in);
std::vector<std::pair<std::string, std::string>> parse_labels_file(const std::string &path);

} // namespace dglet
