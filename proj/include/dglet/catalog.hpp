#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dglet {

using BigInt = boost::multiprecision::cpp_int;

// Raised when a requested catalog would exceed the entry capacity or the
// packed-code implementation limits (event count <= 16, node labels < 16).
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string &what) : std::runtime_error(what) {}
};

// Number of dynamic graphlets with n nodes and k events.
// Recurrence: D(2,k)=1; D(3,k)=3*D(3,k-1)+D(2,k-1);
// D(n,k)=(2n-3)*D(n,k-1)+2*D(n-1,k-1); D(n,k)=0 for k<n-1.
BigInt count_graphlets(int n, int k);

// Closed form, exact rational arithmetic; agrees with count_graphlets.
// Domain n >= 3, k >= n-1.
BigInt count_graphlets_closed(int n, int k);

// Canonical representative of a dynamic graphlet: the event pair sequence
// relabeled by first appearance, minimized over the two admissible
// assignments of labels {0,1} to the first event's endpoints.
struct GraphletCode {
    int n = 0;
    int k = 0;
    std::vector<std::pair<int, int>> pairs; // (min,max) per event

    std::string str() const; // "01,02" with hex node labels
    friend bool operator==(const GraphletCode &a, const GraphletCode &b) {
        return a.pairs == b.pairs;
    }
};

// Canonicalize a concrete event chain (endpoint pairs in occurrence order,
// arbitrary node ids). Throws std::invalid_argument if consecutive events
// do not share a node.
GraphletCode canonical_code(const std::vector<std::pair<int, int>> &chain);

// Static graphlet id (0..29) of the graph on the code's nodes whose edges
// are the distinct pairs of the code. Throws std::invalid_argument for
// codes on more than 5 nodes (beyond the supported static catalog).
int backbone(const GraphletCode &code);

// Packed canonical code: event pairs as bytes, first event most
// significant, so integer order == lexicographic order at equal k.
using PackedCode = unsigned __int128;

PackedCode pack_code(const GraphletCode &code);
GraphletCode unpack_code(PackedCode key, int k);

struct CatalogEntry {
    GraphletCode code;
    PackedCode key = 0;
    int orbit_start = 0; // global orbit id range [orbit_start, orbit_start+orbit_count)
    int orbit_count = 0; // 1 if n == 2, else n
    int backbone = -1;   // static graphlet id, -1 when n > 5
};

namespace detail {

struct PackedHash {
    size_t operator()(PackedCode key) const {
        std::uint64_t x = (std::uint64_t)key ^ ((std::uint64_t)(key >> 64) * 0x9e3779b97f4a7c15ULL);
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return (size_t)x;
    }
};

// Build-once key -> id table, linear probing at load factor <= 0.5.
// A valid packed code is never 0 (its first byte is 0x01), so 0 marks
// empty slots and probes touch only the key array until a hit.
class PackedIndex {
public:
    void build(std::size_t count) {
        std::size_t cap = 16;
        while (cap < count * 2) cap <<= 1;
        mask_ = cap - 1;
        keys_.assign(cap, 0);
        ids_.assign(cap, -1);
    }
    void insert(PackedCode key, int id) {
        std::size_t h = PackedHash{}(key) & mask_;
        while (keys_[h] != 0) h = (h + 1) & mask_;
        keys_[h] = key;
        ids_[h] = id;
    }
    int find(PackedCode key) const {
        if (keys_.empty()) return -1;
        std::size_t h = PackedHash{}(key) & mask_;
        while (true) {
            PackedCode slot = keys_[h];
            if (slot == key) return ids_[h];
            if (slot == 0) return -1;
            h = (h + 1) & mask_;
        }
    }

private:
    std::size_t mask_ = 0;
    std::vector<PackedCode> keys_;
    std::vector<int> ids_;
};

} // namespace detail

class GraphletCatalog {
public:
    int max_n() const { return max_n_; }
    int max_k() const { return max_k_; }
    int total_orbits() const { return total_orbits_; }
    const std::vector<CatalogEntry> &entries() const { return entries_; }
    const CatalogEntry &entry(int id) const { return entries_.at(id); }
    int size() const { return (int)entries_.size(); }

    // id of a canonical code, -1 if absent
    int find(const GraphletCode &code) const;
    int find_key(PackedCode key) const;

    // global orbit id for a node label of a catalog code
    int orbit_of(const GraphletCode &code, int label) const;

    friend GraphletCatalog enumerate_catalog(int, int, std::uint64_t);

private:
    int max_n_ = 0, max_k_ = 0, total_orbits_ = 0;
    std::vector<CatalogEntry> entries_;
    detail::PackedIndex index_;
};

// Build the full catalog for node counts <= max_n and event counts <= max_k.
// Entry ids are assigned by (k asc, n asc, code lex asc); D_0 = [(0,1)].
// Throws CapacityError if the predicted entry count (from count_graphlets)
// exceeds max_entries, or the packed-code limits are exceeded.
GraphletCatalog enumerate_catalog(int max_n, int max_k,
                                  std::uint64_t max_entries = 20000000ULL);

// One line per entry: `D_i n k code orbit_lo-orbit_hi backbone`
// where backbone is `G_j` or `-` for unsupported sizes.
void dump_catalog(const GraphletCatalog &catalog, std::ostream &out);

// Lines `n k count` for 2 <= n <= max_n, 1 <= k <= max_k.
void dump_count_table(int max_n, int max_k, std::ostream &out);

namespace detail {

// Core canonicalization over dense ids (< 32). Returns the packed winner,
// the node count, and the winning labeling for each dense id.
struct CanonResult {
    PackedCode key = 0;
    int n = 0;
    std::int8_t label[32];
};

CanonResult canonicalize_dense(const std::pair<std::uint8_t, std::uint8_t> *pairs, int k);

} // namespace detail

} // namespace dglet
